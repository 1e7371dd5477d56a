#pragma once

// Kernelized bandit learner and the full-information multiclass perceptron.
//
// Each class i keeps a support list J_i of signed examples and scores a point
// by sum_{(x', s) in J_i} s k(x', x). Classes with a non-negative score form
// S_t. If S_t is empty the learner explores with a uniform guess; otherwise it
// exploits a member of S_t. Only the predicted class is ever updated:
//
//   explore, correct  ->  J_yhat += (x, +1)
//   exploit, wrong    ->  J_yhat += (x, -1)
//
// Feedback z = 1 means the prediction was wrong.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gwsep/core.hpp"
#include "gwsep/kernel.hpp"
#include "gwsep/rng.hpp"

namespace gwsep {

struct LearnerConfig {
    enum class TieRule { smallest_index, uniform };
    enum class Membership { non_negative, positive };

    int classes = 1;
    KernelKind kernel = KernelKind::rational;
    /// How an exploit prediction is chosen from S_t.
    TieRule tie_rule = TieRule::smallest_index;
    /// non_negative: score >= 0 (empty lists belong to S_t); positive: score > 0.
    Membership membership = Membership::non_negative;
};

struct SupportEntry {
    Vector x;
    int sign = 1;
};

struct Prediction {
    enum class Mode { explore, exploit };
    int label = 1;
    Mode mode = Mode::exploit;
    std::vector<int> candidates;  ///< S_t, ascending
};

class KernelBandit {
public:
    KernelBandit(LearnerConfig config, std::uint64_t seed);

    const LearnerConfig& config() const noexcept { return config_; }
    const std::vector<std::vector<SupportEntry>>& supports() const noexcept { return supports_; }
    std::size_t step() const noexcept { return step_; }
    Rng& rng() noexcept { return rng_; }
    const Rng& rng() const noexcept { return rng_; }

    /// sum_{(x', s) in J_label} s k(x', x).
    double score(int label, std::span<const double> x) const;

    /// Reads the supports; advances the generator only when it draws.
    Prediction predict(std::span<const double> x);

    /// Applies the update for feedback z (1 = mistake). `prediction` must be the
    /// value predict returned for x. Returns true when a support list grew.
    bool update(std::span<const double> x, const Prediction& prediction, int z);

    /// Restores a snapshot.
    void set_state(std::vector<std::vector<SupportEntry>> supports, std::size_t step,
                   const std::array<std::uint64_t, 4>& rng_state);

private:
    bool is_member(double score) const noexcept;

    LearnerConfig config_;
    std::vector<std::vector<SupportEntry>> supports_;
    std::size_t step_ = 0;
    Rng rng_;
    std::size_t dim_ = 0;  ///< 0 until the first support entry fixes it
};

struct StepRecord {
    std::size_t t = 0;  ///< 1-based
    int y = 0;
    int y_hat = 0;
    int z = 0;
    bool explore = false;
    std::size_t candidates = 0;  ///< |S_t|
    std::size_t cumulative = 0;
};

struct MistakeTrace {
    std::vector<StepRecord> steps;
    std::size_t mistakes() const noexcept { return steps.empty() ? 0 : steps.back().cumulative; }
};

/// Runs the protocol over `stream`; the learner seed is derived from `seed`.
/// Pass a learner to keep its final state.
MistakeTrace run_protocol(std::span<const LabeledExample> stream, const LearnerConfig& config, std::uint64_t seed,
                          KernelBandit* learner = nullptr);

/// T examples drawn from `data`: each pass over the dataset is a fresh seeded
/// shuffle, repeated until T examples are collected.
std::vector<LabeledExample> make_stream(const Dataset& data, std::size_t horizon, std::uint64_t seed);

/// Multiclass perceptron with full feedback: predict argmax <w_i, x> (ties go
/// to the smallest index); on a mistake w_y += x and w_yhat -= x.
MistakeTrace multiclass_perceptron(std::span<const LabeledExample> stream, int classes);

}  // namespace gwsep
