#include "gwsep/separating.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gwsep/chebyshev.hpp"
#include "gwsep/errors.hpp"

namespace gwsep {

int ceil_log2(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("ceil_log2 of zero");
    int k = 0;
    while ((std::uint64_t{1} << k) < n) ++k;
    return k;
}

int ceil_sqrt_two_over(double gamma)
{
    if (!(gamma > 0.0)) throw InvalidInput("margin must be positive");
    int s = 1;
    while (static_cast<double>(s) * s * gamma < 2.0 * (1.0 - 1e-12)) ++s;
    return s;
}

double SeparatingParams::log_norm_bound() const
{
    const double rs = static_cast<double>(r) * s;
    return std::log(4.5) + 0.5 * rs * std::log(420.0 * rs);
}

SeparatingParams separating_params(int m, double gamma)
{
    if (m < 0) throw InvalidInput("number of halfspaces must be non-negative");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("margin must lie in (0, 1)");
    return {m, ceil_log2(2 * static_cast<std::uint64_t>(m) + 4), ceil_sqrt_two_over(gamma)};
}

namespace {

constexpr double kUnitSlop = 1e-9;
constexpr double kMaxThresholdProjection = 3.0;

void require_unit(std::span<const double> v, const std::string& what)
{
    if (norm(v) > 1.0 + kUnitSlop) throw InvalidInput(what + " has norm above 1");
}

void require_dim(std::span<const double> v, std::size_t dim, const std::string& what)
{
    if (v.size() != dim) {
        throw InvalidInput(what + " has dimension " + std::to_string(v.size()) + ", expected " +
                           std::to_string(dim));
    }
}

/// T_s(f)^r.
SparsePolynomial chebyshev_power(const SeparatingParams& params, const SparsePolynomial& f, std::size_t max_terms)
{
    return power(chebyshev_compose(params.s, f, max_terms), params.r, max_terms);
}

}  // namespace

SparsePolynomial build_separating_polynomial(std::span<const Vector> directions, std::span<const double> intra,
                                             std::span<const double> lower_point,
                                             std::span<const double> upper_point, double gamma,
                                             const ConstructionLimits& limits)
{
    const std::size_t d = intra.size();
    require_dim(lower_point, d, "v_b");
    require_dim(upper_point, d, "v_t");
    require_unit(intra, "v'");
    for (std::size_t i = 0; i < directions.size(); ++i) {
        require_dim(directions[i], d, "v_" + std::to_string(i + 1));
        require_unit(directions[i], "v_" + std::to_string(i + 1));
    }
    const double lower = dot(lower_point, intra);
    const double upper = dot(upper_point, intra);
    if (std::abs(lower) > kMaxThresholdProjection || std::abs(upper) > kMaxThresholdProjection) {
        throw InvalidInput("threshold projections <v_b, v'> = " + std::to_string(lower) + " and <v_t, v'> = " +
                           std::to_string(upper) + " must lie in [-3, 3]");
    }

    const SeparatingParams params = separating_params(static_cast<int>(directions.size()), gamma);
    if (params.degree() > limits.max_degree) {
        throw ResourceLimit("separating polynomial degree r*s = " + std::to_string(params.r) + "*" +
                            std::to_string(params.s) + " = " + std::to_string(params.degree()) +
                            " exceeds the limit of " + std::to_string(limits.max_degree));
    }

    SparsePolynomial p = SparsePolynomial::constant(d, params.m + 2.5);
    Vector neg(d);
    for (const auto& v : directions) {
        for (std::size_t k = 0; k < d; ++k) neg[k] = -v[k];
        p -= chebyshev_power(params, SparsePolynomial::affine(1.0, neg), limits.max_terms);
    }

    // h_b(x) = 1 - <x - v_b, v'>/2 and h_t(x) = 1 - <v_t - x, v'>/2.
    Vector half(d);
    for (std::size_t k = 0; k < d; ++k) {
        half[k] = 0.5 * intra[k];
        neg[k] = -half[k];
    }
    p -= chebyshev_power(params, SparsePolynomial::affine(1.0 + 0.5 * lower, neg), limits.max_terms);
    p -= chebyshev_power(params, SparsePolynomial::affine(1.0 - 0.5 * upper, half), limits.max_terms);
    return p;
}

ClassThresholds class_thresholds(const Dataset& data, const GroupStructure& groups,
                                 std::span<const double> intra_direction, int label, double gamma, double tol)
{
    require_dim(intra_direction, data.dim(), "intra-group direction");
    if (!(gamma > 0.0)) throw InvalidInput("margin must be positive");
    const int group = groups.group_of(label);

    ClassThresholds out;
    out.label = label;
    out.direction.assign(intra_direction.begin(), intra_direction.end());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& ex : data.examples()) {
        if (ex.label != label) continue;
        const double proj = dot(ex.x, intra_direction);
        lo = std::min(lo, proj);
        hi = std::max(hi, proj);
    }
    if (lo > hi) throw InvalidInput("class " + std::to_string(label) + " has no examples");
    out.lower = lo - gamma;
    out.upper = hi + gamma;

    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& ex = data[t];
        if (ex.label == label || ex.label > groups.num_classes() || groups.group_of(ex.label) != group) continue;
        const double proj = dot(ex.x, intra_direction);
        if (proj > out.lower - gamma + tol && proj < out.upper + gamma - tol) {
            throw VerificationFailure("example " + std::to_string(t) + " of class " + std::to_string(ex.label) +
                                      " projects to " + std::to_string(proj) + ", inside (" +
                                      std::to_string(out.lower - gamma) + ", " +
                                      std::to_string(out.upper + gamma) + ") around class " +
                                      std::to_string(label));
        }
    }
    return out;
}

ClassSeparator separate_class(const Dataset& data, const SeparabilityCertificate& certificate, int label,
                              const ConstructionLimits& limits)
{
    if (certificate.kind != SeparabilityKind::group_weak || !certificate.groups) {
        throw InvalidInput("separating polynomials need a group-weak certificate");
    }
    const GroupStructure& gs = *certificate.groups;
    const auto L = static_cast<std::size_t>(gs.num_groups());
    if (certificate.weights.size() != L || certificate.intra_weights.size() != L) {
        throw InvalidInput("certificate must carry one inter and one intra direction per group");
    }
    const double gamma = certificate.gamma;

    ClassSeparator out;
    out.label = label;
    out.group = gs.group_of(label);
    const Vector& u = certificate.weights[static_cast<std::size_t>(out.group - 1)];
    const Vector& intra = certificate.intra_weights[static_cast<std::size_t>(out.group - 1)];

    std::vector<Vector> directions;
    for (std::size_t j = 0; j < L; ++j) {
        if (j + 1 == static_cast<std::size_t>(out.group)) continue;
        Vector v(u.size());
        for (std::size_t k = 0; k < u.size(); ++k) v[k] = u[k] - certificate.weights[j][k];
        directions.push_back(std::move(v));
    }

    out.thresholds = class_thresholds(data, gs, intra, label, gamma);
    const double sq = squared_norm(intra);
    out.lower_point.assign(intra.size(), 0.0);
    out.upper_point.assign(intra.size(), 0.0);
    if (sq > 0.0) {
        for (std::size_t k = 0; k < intra.size(); ++k) {
            out.lower_point[k] = out.thresholds.lower / sq * intra[k];
            out.upper_point[k] = out.thresholds.upper / sq * intra[k];
        }
    }
    out.thresholds_in_unit_ball =
        norm(out.lower_point) <= 1.0 + kUnitSlop && norm(out.upper_point) <= 1.0 + kUnitSlop;

    out.params = separating_params(static_cast<int>(directions.size()), gamma);
    out.polynomial = build_separating_polynomial(directions, intra, out.lower_point, out.upper_point, gamma, limits);

    out.min_positive = std::numeric_limits<double>::infinity();
    out.max_negative = -std::numeric_limits<double>::infinity();
    for (const auto& ex : data.examples()) {
        const double value = out.polynomial.evaluate(ex.x);
        if (ex.label == label) {
            out.min_positive = std::min(out.min_positive, value);
            ++out.positives;
        } else {
            out.max_negative = std::max(out.max_negative, value);
            ++out.negatives;
        }
    }
    return out;
}

std::vector<ClassSeparator> separate_all_classes(const Dataset& data, const SeparabilityCertificate& certificate,
                                                 const ConstructionLimits& limits)
{
    if (!certificate.groups) throw InvalidInput("separating polynomials need a group-weak certificate");
    std::vector<ClassSeparator> out;
    for (int label = 1; label <= certificate.groups->num_classes(); ++label) {
        out.push_back(separate_class(data, certificate, label, limits));
    }
    return out;
}

}  // namespace gwsep
