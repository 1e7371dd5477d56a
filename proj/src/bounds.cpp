#include "gwsep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gwsep/errors.hpp"
#include "gwsep/separating.hpp"

namespace gwsep {

namespace {

void require_unit_interval(double gamma)
{
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("margin must lie in (0, 1), got " + std::to_string(gamma));
}

std::optional<double> linear_if_normal(double log_value)
{
    if (log_value < std::log(std::numeric_limits<double>::min()) || log_value > std::log(std::numeric_limits<double>::max())) {
        return std::nullopt;
    }
    return std::exp(log_value);
}

}  // namespace

int ceil_log2_two_over(double gamma)
{
    if (!(gamma > 0.0)) throw InvalidInput("margin must be positive");
    int s = 1;
    while (std::ldexp(gamma, s) < 2.0 * (1.0 - 1e-12)) ++s;
    return s;
}

int ceil_quarter_log2(std::uint64_t n)
{
    if (n == 0) throw InvalidInput("ceil_quarter_log2 of zero");
    int q = 0;
    // 16^q overflows at q = 16, which already exceeds every 64-bit n.
    while (q < 16 && (std::uint64_t{1} << (4 * q)) < n) ++q;
    return q;
}

double MarginReport::log10_gamma_prime() const { return log_gamma_prime / std::numbers::ln10; }

MarginReport transformed_margin(double gamma, int groups)
{
    require_unit_interval(gamma);
    if (groups < 1) throw InvalidInput("number of groups must be at least 1");
    MarginReport out;
    out.gamma = gamma;
    out.groups = groups;
    out.r = ceil_log2(2 * static_cast<std::uint64_t>(groups) + 2);
    out.s = ceil_sqrt_two_over(gamma);
    const double rs = static_cast<double>(out.r) * out.s;
    out.base = 840.0 * rs;
    out.exponent = -rs / 2.0;
    out.log_gamma_prime = out.exponent * std::log(out.base) - std::log(9.0) - 0.5 * std::log(groups);
    out.gamma_prime = linear_if_normal(out.log_gamma_prime);
    return out;
}

double ComparisonMargins::log_best() const { return std::max(log_gamma1, log_gamma2); }

ComparisonMargins bpstwz_margins(double gamma, int classes)
{
    require_unit_interval(gamma);
    if (classes < 2) throw InvalidInput("comparison margins need at least 2 classes");
    ComparisonMargins out;
    out.gamma = gamma;
    out.classes = classes;
    const auto K = static_cast<std::uint64_t>(classes);
    const double k = classes;

    out.r1 = ceil_log2(2 * K - 2);
    out.s1 = ceil_sqrt_two_over(gamma);
    const double rs = static_cast<double>(out.r1) * out.s1;
    out.log_gamma1 = -rs / 2.0 * std::log(376.0 * rs) - std::log(2.0) - 0.5 * std::log(k);

    out.r2 = 2 * ceil_quarter_log2(4 * K - 3) + 1;
    out.s2 = ceil_log2_two_over(gamma);
    const double r = out.r2;
    const double s = out.s2;
    const double log_base = (s + 1.0) * std::numbers::ln2 + std::log(r * (k - 1.0) * (4.0 * s + 2.0));
    out.log_gamma2 = -(s + 0.5) * r * (k - 1.0) * log_base - std::log(4.0) - 0.5 * std::log(k) -
                     std::log(4.0 * k - 5.0) - (k - 1.0) * std::numbers::ln2;
    return out;
}

namespace {

/// floor(4 (R/gamma)^2) in long double, nudged so exact integers are not
/// rounded down by one.
long double floor_core(double radius, double gamma)
{
    const long double ratio = static_cast<long double>(radius) / gamma;
    const long double v = 4.0L * ratio * ratio;
    return std::floor(v * (1.0L + 1e-12L));
}

void require_bound_inputs(int classes, double radius)
{
    if (classes < 1) throw InvalidInput("number of classes must be at least 1");
    if (!(radius > 0.0)) throw InvalidInput("radius must be positive");
}

}  // namespace

std::uint64_t mistake_bound(int classes, double radius, double gamma)
{
    require_bound_inputs(classes, radius);
    if (!(gamma > 0.0)) throw InvalidInput("margin must be positive");
    if (classes == 1) return 0;
    const long double value = static_cast<long double>(classes - 1) * floor_core(radius, gamma);
    if (!(value < 18446744073709551616.0L)) {
        throw ResourceLimit("mistake bound does not fit in 64 bits");
    }
    return static_cast<std::uint64_t>(value);
}

MistakeBoundReport mistake_bound_from_log(int classes, double radius, double log_gamma)
{
    require_bound_inputs(classes, radius);
    MistakeBoundReport out;
    if (classes == 1) {
        out.log10_value = -std::numeric_limits<double>::infinity();
        out.exact = 0;
        return out;
    }
    // log10 of (K-1) * 4 (R/gamma)^2; the floor only matters when small.
    const double log_core = std::log(4.0) + 2.0 * std::log(radius) - 2.0 * log_gamma;
    const double log_value = std::log(classes - 1.0) + log_core;
    out.log10_value = log_value / std::numbers::ln10;
    if (log_value < std::log(1.8e19)) {
        const auto gamma = std::exp(log_gamma);
        try {
            out.exact = mistake_bound(classes, radius, gamma);
            if (*out.exact == 0) {
                out.log10_value = -std::numeric_limits<double>::infinity();
            } else {
                out.log10_value = std::log10(static_cast<double>(*out.exact));
            }
        } catch (const ResourceLimit&) {
            out.exact.reset();
        }
    }
    return out;
}

}  // namespace gwsep
