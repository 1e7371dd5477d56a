#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gwsep {

using Vector = std::vector<double>;

/// Absolute slack allowed in every separability inequality and norm budget.
inline constexpr double kVerifyTolerance = 1e-9;

/// Examples must live in the closed unit ball, up to this rounding slop.
inline constexpr double kBallTolerance = 1e-12;

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);

struct LabeledExample {
    Vector x;
    int label = 1;  ///< 1-based class in [K]
};

/// An ordered sequence of labeled examples of a common dimension.
///
/// Labels are 1-based. The optional group column mirrors the dataset CSV: when
/// present it holds one 1-based group id per example.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t dim, std::vector<LabeledExample> examples, std::vector<int> groups = {});

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return examples_.size(); }
    bool empty() const noexcept { return examples_.empty(); }

    const std::vector<LabeledExample>& examples() const noexcept { return examples_; }
    const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }

    bool has_groups() const noexcept { return !groups_.empty(); }
    const std::vector<int>& groups() const noexcept { return groups_; }

    /// Largest label present (0 for an empty dataset).
    int max_label() const noexcept;

private:
    std::size_t dim_ = 0;
    std::vector<LabeledExample> examples_;
    std::vector<int> groups_;
};

/// max_t ||x_t||. Throws InvalidInput on an empty dataset.
double max_norm(const Dataset& data);

/// A partition G_1..G_L of the classes [K] together with the map g.
class GroupStructure {
public:
    /// `assignment[i]` is the 1-based group of class i+1.
    static GroupStructure from_assignment(std::vector<int> assignment);
    /// Each inner list is one group of 1-based classes.
    static GroupStructure from_groups(const std::vector<std::vector<int>>& groups);
    /// K singleton groups; group i holds class i.
    static GroupStructure singletons(int num_classes);

    int num_classes() const noexcept { return static_cast<int>(assignment_.size()); }
    int num_groups() const noexcept { return static_cast<int>(members_.size()); }
    int group_of(int cls) const;
    const std::vector<int>& classes_in(int group) const;
    const std::vector<int>& assignment() const noexcept { return assignment_; }

private:
    std::vector<int> assignment_;
    std::vector<std::vector<int>> members_;
};

enum class SeparabilityKind { strong, weak, group_weak };

std::string_view to_string(SeparabilityKind kind);
SeparabilityKind parse_separability_kind(std::string_view text);

/// Weights witnessing one of the three separability conditions.
///
/// For strong and weak kinds `weights` holds w_1..w_K. For the group-weak kind
/// `weights` holds the inter-group directions u_1..u_L, `intra_weights` the
/// intra-group directions u'_1..u'_L, and `groups` the partition.
struct SeparabilityCertificate {
    SeparabilityKind kind = SeparabilityKind::weak;
    double gamma = 0.0;
    std::vector<Vector> weights;
    std::vector<Vector> intra_weights;
    std::optional<GroupStructure> groups;
};

/// One violated inequality. `other_example` is set for pairwise conditions.
struct Violation {
    std::size_t example = 0;
    std::optional<std::size_t> other_example;
    int label = 0;
    int other_label = 0;
    double slack = 0.0;
    std::string condition;
};

/// Outcome of checking a dataset against a certificate.
///
/// Slacks are signed: non-negative means the inequality holds. Fields that do
/// not apply to a kind stay at +infinity (vacuous).
struct CertificateReport {
    static constexpr double kVacuous = std::numeric_limits<double>::infinity();

    SeparabilityKind kind = SeparabilityKind::weak;
    double gamma = 0.0;
    bool passed = false;

    double positive_slack = kVacuous;     ///< strong: min <x_t, w_{y_t}> - gamma/2
    double negative_slack = kVacuous;     ///< strong: min -gamma/2 - <x_t, w_i>
    double pairwise_slack = kVacuous;     ///< weak / group condition 1
    double intra_group_slack = kVacuous;  ///< group condition 2
    double weight_budget = 0.0;           ///< sum ||w_i||^2 or sum ||u_p||^2
    double intra_weight_budget = 0.0;

    std::size_t violation_count = 0;
    std::optional<Violation> worst;  ///< most negative slack, if any

    double min_slack() const;
};

CertificateReport verify_strong_separability(const Dataset& data, std::span<const Vector> weights,
                                             double gamma, double tol = kVerifyTolerance);

CertificateReport verify_weak_separability(const Dataset& data, std::span<const Vector> weights,
                                           double gamma, double tol = kVerifyTolerance);

CertificateReport verify_group_weak_separability(const Dataset& data, const GroupStructure& groups,
                                                 std::span<const Vector> inter, std::span<const Vector> intra,
                                                 double gamma, double tol = kVerifyTolerance);

/// Dispatches on certificate.kind.
CertificateReport verify(const Dataset& data, const SeparabilityCertificate& certificate,
                         double tol = kVerifyTolerance);

}  // namespace gwsep
