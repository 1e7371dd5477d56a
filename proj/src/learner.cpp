#include "gwsep/learner.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gwsep/errors.hpp"

namespace gwsep {

KernelBandit::KernelBandit(LearnerConfig config, std::uint64_t seed)
    : config_(config), supports_(static_cast<std::size_t>(config.classes)), rng_(seed)
{
    if (config_.classes < 1) throw InvalidInput("learner needs at least one class");
}

bool KernelBandit::is_member(double score) const noexcept
{
    return config_.membership == LearnerConfig::Membership::non_negative ? score >= 0.0 : score > 0.0;
}

double KernelBandit::score(int label, std::span<const double> x) const
{
    if (label < 1 || label > config_.classes) throw InvalidInput("class " + std::to_string(label) + " out of range");
    double sum = 0.0;
    for (const auto& entry : supports_[static_cast<std::size_t>(label - 1)]) {
        sum += entry.sign * kernel_eval(config_.kernel, entry.x, x);
    }
    return sum;
}

Prediction KernelBandit::predict(std::span<const double> x)
{
    if (dim_ != 0 && x.size() != dim_) {
        throw InvalidInput("example of dimension " + std::to_string(x.size()) + ", expected " + std::to_string(dim_));
    }
    if (config_.kernel == KernelKind::rational && norm(x) > 1.0 + kBallTolerance) {
        throw InvalidInput("rational kernel needs examples in the unit ball");
    }
    Prediction out;
    for (int i = 1; i <= config_.classes; ++i) {
        if (is_member(score(i, x))) out.candidates.push_back(i);
    }
    const auto K = static_cast<std::uint64_t>(config_.classes);
    if (out.candidates.empty()) {
        out.mode = Prediction::Mode::explore;
        out.label = static_cast<int>(rng_.below(K)) + 1;
    } else {
        out.mode = Prediction::Mode::exploit;
        if (config_.tie_rule == LearnerConfig::TieRule::smallest_index || out.candidates.size() == 1) {
            out.label = out.candidates.front();
        } else {
            out.label = out.candidates[static_cast<std::size_t>(rng_.below(out.candidates.size()))];
        }
    }
    return out;
}

bool KernelBandit::update(std::span<const double> x, const Prediction& prediction, int z)
{
    if (z != 0 && z != 1) throw InvalidInput("feedback must be 0 or 1");
    if (prediction.label < 1 || prediction.label > config_.classes) {
        throw InvalidInput("predicted class " + std::to_string(prediction.label) + " out of range");
    }
    const bool listed = std::find(prediction.candidates.begin(), prediction.candidates.end(), prediction.label) !=
                        prediction.candidates.end();
    if (prediction.mode == Prediction::Mode::explore ? !prediction.candidates.empty() : !listed) {
        throw InvalidInput("prediction mode does not match its candidate set");
    }
    ++step_;
    int sign = 0;
    if (prediction.mode == Prediction::Mode::explore && z == 0) sign = +1;
    if (prediction.mode == Prediction::Mode::exploit && z == 1) sign = -1;
    if (sign == 0) return false;
    if (dim_ == 0) dim_ = x.size();
    supports_[static_cast<std::size_t>(prediction.label - 1)].push_back({Vector(x.begin(), x.end()), sign});
    return true;
}

void KernelBandit::set_state(std::vector<std::vector<SupportEntry>> supports, std::size_t step,
                             const std::array<std::uint64_t, 4>& rng_state)
{
    if (supports.size() != static_cast<std::size_t>(config_.classes)) {
        throw InvalidInput("snapshot has " + std::to_string(supports.size()) + " support lists for " +
                           std::to_string(config_.classes) + " classes");
    }
    std::size_t dim = 0;
    for (const auto& list : supports) {
        for (const auto& e : list) {
            if (e.sign != 1 && e.sign != -1) throw InvalidInput("support signs must be +1 or -1");
            if (dim == 0) dim = e.x.size();
            if (e.x.size() != dim) throw InvalidInput("support entries of mixed dimension");
        }
    }
    supports_ = std::move(supports);
    step_ = step;
    dim_ = dim;
    rng_.set_state(rng_state);
}

MistakeTrace run_protocol(std::span<const LabeledExample> stream, const LearnerConfig& config, std::uint64_t seed,
                          KernelBandit* learner)
{
    KernelBandit local(config, derive_seed(seed, seed_tag::learner));
    KernelBandit& model = learner ? (*learner = std::move(local)) : local;

    MistakeTrace trace;
    trace.steps.reserve(stream.size());
    std::size_t dim = stream.empty() ? 0 : stream.front().x.size();
    std::size_t mistakes = 0;
    for (std::size_t t = 0; t < stream.size(); ++t) {
        const auto& ex = stream[t];
        if (ex.x.size() != dim) throw InvalidInput("stream example " + std::to_string(t + 1) + " changes dimension");
        if (ex.label < 1 || ex.label > config.classes) {
            throw InvalidInput("stream label " + std::to_string(ex.label) + " outside [1, " +
                               std::to_string(config.classes) + "]");
        }
        const Prediction pred = model.predict(ex.x);
        const int z = pred.label != ex.label ? 1 : 0;
        model.update(ex.x, pred, z);
        mistakes += static_cast<std::size_t>(z);
        trace.steps.push_back({t + 1, ex.label, pred.label, z, pred.mode == Prediction::Mode::explore,
                               pred.candidates.size(), mistakes});
    }
    return trace;
}

std::vector<LabeledExample> make_stream(const Dataset& data, std::size_t horizon, std::uint64_t seed)
{
    std::vector<LabeledExample> out;
    if (horizon == 0) return out;
    if (data.empty()) throw InvalidInput("cannot draw a stream from an empty dataset");
    out.reserve(horizon);
    Rng rng(derive_seed(seed, seed_tag::stream));
    std::vector<std::size_t> order(data.size());
    while (out.size() < horizon) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(std::span<std::size_t>(order), rng);
        for (std::size_t i = 0; i < order.size() && out.size() < horizon; ++i) out.push_back(data[order[i]]);
    }
    return out;
}

MistakeTrace multiclass_perceptron(std::span<const LabeledExample> stream, int classes)
{
    if (classes < 1) throw InvalidInput("need at least one class");
    MistakeTrace trace;
    if (stream.empty()) return trace;
    const std::size_t d = stream.front().x.size();
    std::vector<Vector> w(static_cast<std::size_t>(classes), Vector(d, 0.0));
    std::size_t mistakes = 0;
    for (std::size_t t = 0; t < stream.size(); ++t) {
        const auto& ex = stream[t];
        if (ex.x.size() != d) throw InvalidInput("stream example " + std::to_string(t + 1) + " changes dimension");
        if (ex.label < 1 || ex.label > classes) throw InvalidInput("stream label out of range");
        int best = 1;
        double best_score = dot(w[0], ex.x);
        for (int i = 2; i <= classes; ++i) {
            const double s = dot(w[static_cast<std::size_t>(i - 1)], ex.x);
            if (s > best_score) {
                best = i;
                best_score = s;
            }
        }
        const int z = best != ex.label ? 1 : 0;
        if (z) {
            auto& wy = w[static_cast<std::size_t>(ex.label - 1)];
            auto& wp = w[static_cast<std::size_t>(best - 1)];
            for (std::size_t k = 0; k < d; ++k) {
                wy[k] += ex.x[k];
                wp[k] -= ex.x[k];
            }
        }
        mistakes += static_cast<std::size_t>(z);
        trace.steps.push_back({t + 1, ex.label, best, z, false, 0, mistakes});
    }
    return trace;
}

}  // namespace gwsep
