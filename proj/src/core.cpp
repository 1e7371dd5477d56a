#include "gwsep/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "gwsep/errors.hpp"

namespace gwsep {

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw InvalidInput("dot: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double squared_norm(std::span<const double> a)
{
    double sum = 0.0;
    for (double v : a) sum += v * v;
    return sum;
}

double norm(std::span<const double> a) { return std::sqrt(squared_norm(a)); }

Dataset::Dataset(std::size_t dim, std::vector<LabeledExample> examples, std::vector<int> groups)
    : dim_(dim), examples_(std::move(examples)), groups_(std::move(groups))
{
    if (!groups_.empty() && groups_.size() != examples_.size()) {
        throw InvalidInput("dataset: group column has " + std::to_string(groups_.size()) +
                           " entries for " + std::to_string(examples_.size()) + " examples");
    }
    for (std::size_t t = 0; t < examples_.size(); ++t) {
        const auto& ex = examples_[t];
        if (ex.x.size() != dim_) {
            throw InvalidInput("dataset: example " + std::to_string(t) + " has dimension " +
                               std::to_string(ex.x.size()) + ", expected " + std::to_string(dim_));
        }
        if (ex.label < 1) {
            throw InvalidInput("dataset: example " + std::to_string(t) + " has label " +
                               std::to_string(ex.label) + " (labels are 1-based)");
        }
        if (norm(ex.x) > 1.0 + kBallTolerance) {
            throw InvalidInput("dataset: example " + std::to_string(t) + " lies outside the unit ball");
        }
        if (!groups_.empty() && groups_[t] < 1) {
            throw InvalidInput("dataset: example " + std::to_string(t) + " has group id < 1");
        }
    }
}

int Dataset::max_label() const noexcept
{
    int k = 0;
    for (const auto& ex : examples_) k = std::max(k, ex.label);
    return k;
}

double max_norm(const Dataset& data)
{
    if (data.empty()) throw InvalidInput("max_norm: empty dataset");
    double best = 0.0;
    for (const auto& ex : data.examples()) best = std::max(best, norm(ex.x));
    return best;
}

// ---------------------------------------------------------------------------
// GroupStructure

GroupStructure GroupStructure::from_assignment(std::vector<int> assignment)
{
    if (assignment.empty()) throw InvalidInput("group structure: no classes");
    const int num_groups = *std::max_element(assignment.begin(), assignment.end());
    GroupStructure gs;
    gs.members_.assign(static_cast<std::size_t>(std::max(num_groups, 0)), {});
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] < 1) {
            throw InvalidInput("group structure: class " + std::to_string(i + 1) + " has no group");
        }
        gs.members_[static_cast<std::size_t>(assignment[i] - 1)].push_back(static_cast<int>(i + 1));
    }
    for (std::size_t j = 0; j < gs.members_.size(); ++j) {
        if (gs.members_[j].empty()) {
            throw InvalidInput("group structure: group " + std::to_string(j + 1) + " is empty");
        }
    }
    gs.assignment_ = std::move(assignment);
    return gs;
}

GroupStructure GroupStructure::from_groups(const std::vector<std::vector<int>>& groups)
{
    int num_classes = 0;
    for (const auto& g : groups) {
        for (int c : g) num_classes = std::max(num_classes, c);
    }
    std::vector<int> assignment(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t j = 0; j < groups.size(); ++j) {
        for (int c : groups[j]) {
            if (c < 1) throw InvalidInput("group structure: class ids are 1-based");
            auto& slot = assignment[static_cast<std::size_t>(c - 1)];
            if (slot != 0) {
                throw InvalidInput("group structure: class " + std::to_string(c) + " appears in two groups");
            }
            slot = static_cast<int>(j + 1);
        }
    }
    if (groups.empty()) throw InvalidInput("group structure: no groups");
    auto gs = from_assignment(std::move(assignment));
    if (gs.num_groups() != static_cast<int>(groups.size())) {
        throw InvalidInput("group structure: empty group");
    }
    return gs;
}

GroupStructure GroupStructure::singletons(int num_classes)
{
    std::vector<int> assignment(static_cast<std::size_t>(num_classes));
    std::iota(assignment.begin(), assignment.end(), 1);
    return from_assignment(std::move(assignment));
}

int GroupStructure::group_of(int cls) const
{
    if (cls < 1 || cls > num_classes()) {
        throw InvalidInput("group structure: class " + std::to_string(cls) + " outside [1, " +
                           std::to_string(num_classes()) + "]");
    }
    return assignment_[static_cast<std::size_t>(cls - 1)];
}

const std::vector<int>& GroupStructure::classes_in(int group) const
{
    if (group < 1 || group > num_groups()) {
        throw InvalidInput("group structure: group " + std::to_string(group) + " outside [1, " +
                           std::to_string(num_groups()) + "]");
    }
    return members_[static_cast<std::size_t>(group - 1)];
}

std::string_view to_string(SeparabilityKind kind)
{
    switch (kind) {
    case SeparabilityKind::strong: return "strong";
    case SeparabilityKind::weak: return "weak";
    case SeparabilityKind::group_weak: return "group-weak";
    }
    return "?";
}

SeparabilityKind parse_separability_kind(std::string_view text)
{
    if (text == "strong") return SeparabilityKind::strong;
    if (text == "weak") return SeparabilityKind::weak;
    if (text == "group-weak" || text == "group_weak") return SeparabilityKind::group_weak;
    throw InvalidInput("unknown separability kind '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Verification

double CertificateReport::min_slack() const
{
    return std::min({positive_slack, negative_slack, pairwise_slack, intra_group_slack});
}

namespace {

void check_gamma(double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidInput("margin gamma must be positive, got " + std::to_string(gamma));
    }
}

void check_weight_dims(const Dataset& data, std::span<const Vector> weights, const char* what)
{
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].size() != data.dim()) {
            throw InvalidInput(std::string(what) + " " + std::to_string(i + 1) + " has dimension " +
                               std::to_string(weights[i].size()) + ", examples have " +
                               std::to_string(data.dim()));
        }
    }
}

void check_labels(const Dataset& data, int num_classes)
{
    for (std::size_t t = 0; t < data.size(); ++t) {
        if (data[t].label > num_classes) {
            throw InvalidInput("example " + std::to_string(t) + " has label " + std::to_string(data[t].label) +
                               " outside [1, " + std::to_string(num_classes) + "]");
        }
    }
}

double budget(std::span<const Vector> weights)
{
    double sum = 0.0;
    for (const auto& w : weights) sum += squared_norm(w);
    return sum;
}

/// Tracks the count and the most negative of the violated inequalities.
class ViolationLog {
public:
    explicit ViolationLog(double tol) : tol_(tol) {}

    void record(double slack, Violation v)
    {
        if (slack >= -tol_) return;
        ++count_;
        if (!worst_ || slack < worst_->slack) {
            v.slack = slack;
            worst_ = std::move(v);
        }
    }

    void finish(CertificateReport& report) const
    {
        report.violation_count = count_;
        report.worst = worst_;
    }

private:
    double tol_;
    std::size_t count_ = 0;
    std::optional<Violation> worst_;
};

std::vector<double> inner_products(std::span<const double> x, std::span<const Vector> weights)
{
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) out[i] = dot(x, weights[i]);
    return out;
}

}  // namespace

CertificateReport verify_strong_separability(const Dataset& data, std::span<const Vector> weights,
                                             double gamma, double tol)
{
    check_gamma(gamma);
    check_weight_dims(data, weights, "weight");
    const int num_classes = static_cast<int>(weights.size());
    check_labels(data, num_classes);

    CertificateReport report;
    report.kind = SeparabilityKind::strong;
    report.gamma = gamma;
    report.weight_budget = budget(weights);

    ViolationLog log(tol);
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& ex = data[t];
        const auto scores = inner_products(ex.x, weights);
        for (int i = 1; i <= num_classes; ++i) {
            const double s = scores[static_cast<std::size_t>(i - 1)];
            if (i == ex.label) {
                const double slack = s - gamma / 2.0;
                report.positive_slack = std::min(report.positive_slack, slack);
                log.record(slack, {t, std::nullopt, ex.label, i, 0.0, "own-class score below gamma/2"});
            } else {
                const double slack = -gamma / 2.0 - s;
                report.negative_slack = std::min(report.negative_slack, slack);
                log.record(slack, {t, std::nullopt, ex.label, i, 0.0, "other-class score above -gamma/2"});
            }
        }
    }
    log.finish(report);
    report.passed = report.violation_count == 0 && report.weight_budget <= 1.0 + tol;
    return report;
}

CertificateReport verify_weak_separability(const Dataset& data, std::span<const Vector> weights,
                                           double gamma, double tol)
{
    check_gamma(gamma);
    check_weight_dims(data, weights, "weight");
    const int num_classes = static_cast<int>(weights.size());
    check_labels(data, num_classes);

    CertificateReport report;
    report.kind = SeparabilityKind::weak;
    report.gamma = gamma;
    report.weight_budget = budget(weights);

    ViolationLog log(tol);
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& ex = data[t];
        const auto scores = inner_products(ex.x, weights);
        const double own = scores[static_cast<std::size_t>(ex.label - 1)];
        for (int i = 1; i <= num_classes; ++i) {
            if (i == ex.label) continue;
            const double slack = own - scores[static_cast<std::size_t>(i - 1)] - gamma;
            report.pairwise_slack = std::min(report.pairwise_slack, slack);
            log.record(slack, {t, std::nullopt, ex.label, i, 0.0, "own-class score not ahead by gamma"});
        }
    }
    log.finish(report);
    report.passed = report.violation_count == 0 && report.weight_budget <= 1.0 + tol;
    return report;
}

CertificateReport verify_group_weak_separability(const Dataset& data, const GroupStructure& groups,
                                                 std::span<const Vector> inter, std::span<const Vector> intra,
                                                 double gamma, double tol)
{
    check_gamma(gamma);
    const int num_groups = groups.num_groups();
    if (inter.size() != static_cast<std::size_t>(num_groups) ||
        intra.size() != static_cast<std::size_t>(num_groups)) {
        throw InvalidInput("group-weak certificate needs " + std::to_string(num_groups) +
                           " inter- and intra-group weights, got " + std::to_string(inter.size()) + " and " +
                           std::to_string(intra.size()));
    }
    check_weight_dims(data, inter, "inter-group weight");
    check_weight_dims(data, intra, "intra-group weight");
    check_labels(data, groups.num_classes());
    if (data.has_groups()) {
        for (std::size_t t = 0; t < data.size(); ++t) {
            if (data.groups()[t] != groups.group_of(data[t].label)) {
                throw InvalidInput("example " + std::to_string(t) + " has group column " +
                                   std::to_string(data.groups()[t]) + " but class " +
                                   std::to_string(data[t].label) + " belongs to group " +
                                   std::to_string(groups.group_of(data[t].label)));
            }
        }
    }

    CertificateReport report;
    report.kind = SeparabilityKind::group_weak;
    report.gamma = gamma;
    report.weight_budget = budget(inter);
    report.intra_weight_budget = budget(intra);

    ViolationLog log(tol);

    // Condition 1: the own group's direction wins every comparison by gamma.
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& ex = data[t];
        const int g = groups.group_of(ex.label);
        const auto scores = inner_products(ex.x, inter);
        const double own = scores[static_cast<std::size_t>(g - 1)];
        for (int p = 1; p <= num_groups; ++p) {
            if (p == g) continue;
            const double slack = own - scores[static_cast<std::size_t>(p - 1)] - gamma;
            report.pairwise_slack = std::min(report.pairwise_slack, slack);
            log.record(slack, {t, std::nullopt, ex.label, 0, 0.0, "own group not ahead by gamma"});
        }
    }

    // Condition 2: within a group, the projection ranges of two classes on
    // u'_g are 2*gamma apart. For every class pair the worst example pair is
    // (min of the upper class, max of the lower class), so per-class extremes
    // give exactly the pairwise minimum.
    struct Range {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        std::size_t arg_lo = 0;
        std::size_t arg_hi = 0;
    };
    std::map<int, Range> ranges;
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& ex = data[t];
        const int g = groups.group_of(ex.label);
        const double proj = dot(ex.x, intra[static_cast<std::size_t>(g - 1)]);
        auto& r = ranges[ex.label];
        if (proj < r.lo) { r.lo = proj; r.arg_lo = t; }
        if (proj > r.hi) { r.hi = proj; r.arg_hi = t; }
    }
    for (int g = 1; g <= num_groups; ++g) {
        const auto& members = groups.classes_in(g);
        for (std::size_t a = 0; a < members.size(); ++a) {
            const auto ia = ranges.find(members[a]);
            if (ia == ranges.end()) continue;
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const auto ib = ranges.find(members[b]);
                if (ib == ranges.end()) continue;
                const Range& ra = ia->second;
                const Range& rb = ib->second;
                const double a_above = ra.lo - rb.hi;
                const double b_above = rb.lo - ra.hi;
                const double slack = std::max(a_above, b_above) - 2.0 * gamma;
                report.intra_group_slack = std::min(report.intra_group_slack, slack);
                Violation v;
                if (a_above >= b_above) {
                    v = {ra.arg_lo, rb.arg_hi, members[a], members[b], 0.0, "intra-group bands closer than 2*gamma"};
                } else {
                    v = {rb.arg_lo, ra.arg_hi, members[b], members[a], 0.0, "intra-group bands closer than 2*gamma"};
                }
                log.record(slack, std::move(v));
            }
        }
    }

    log.finish(report);
    report.passed = report.violation_count == 0 && report.weight_budget <= 1.0 + tol &&
                    report.intra_weight_budget <= 1.0 + tol;
    return report;
}

CertificateReport verify(const Dataset& data, const SeparabilityCertificate& certificate, double tol)
{
    switch (certificate.kind) {
    case SeparabilityKind::strong:
        return verify_strong_separability(data, certificate.weights, certificate.gamma, tol);
    case SeparabilityKind::weak:
        return verify_weak_separability(data, certificate.weights, certificate.gamma, tol);
    case SeparabilityKind::group_weak:
        if (!certificate.groups) throw InvalidInput("group-weak certificate without a group structure");
        return verify_group_weak_separability(data, *certificate.groups, certificate.weights,
                                              certificate.intra_weights, certificate.gamma, tol);
    }
    throw InvalidInput("unknown certificate kind");
}

}  // namespace gwsep
