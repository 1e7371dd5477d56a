#pragma once

// Margin transformations and mistake bounds. Margins underflow double
// precision for realistic gamma (50400^-30 ~ 1e-141 is fine, but L=8,
// gamma=0.001 is not), so everything is carried as natural logs and a linear
// value is attached only when it is a normal double.

#include <cstdint>
#include <optional>

namespace gwsep {

/// Smallest s >= 1 with 2^s * gamma >= 2, i.e. ceil(log2(2/gamma)), with the
/// same 1e-12 relative slack as ceil_sqrt_two_over.
int ceil_log2_two_over(double gamma);

/// Smallest q >= 0 with 16^q >= n, i.e. ceil(log2(n) / 4).
int ceil_quarter_log2(std::uint64_t n);

/// gamma' = [840 r s]^{-r s / 2} / (9 sqrt(L)) with r = ceil(log2(2L + 2)),
/// s = ceil(sqrt(2/gamma)). The 840 is the 420 of the separating-polynomial
/// norm bound times the 2^{deg/2} factor of the l2 embedding.
struct MarginReport {
    double gamma = 0.0;
    int groups = 0;  ///< L
    int r = 0;
    int s = 0;
    double base = 0.0;      ///< 840 r s
    double exponent = 0.0;  ///< -r s / 2
    double log_gamma_prime = 0.0;
    std::optional<double> gamma_prime;

    double log10_gamma_prime() const;
};

MarginReport transformed_margin(double gamma, int groups);

/// The two margins of the earlier weak-to-strong transformation:
///   gamma_1 = [376 r1 s1]^{-r1 s1 / 2} / (2 sqrt(K)),
///             r1 = ceil(log2(2K - 2)), s1 = ceil(sqrt(2/gamma));
///   gamma_2 = (2^{s+1} r (K-1) (4s+2))^{-(s+1/2) r (K-1)} / (4 sqrt(K) (4K-5) 2^{K-1}),
///             r = 2 ceil(log2(4K-3)/4) + 1, s = ceil(log2(2/gamma)).
struct ComparisonMargins {
    double gamma = 0.0;
    int classes = 0;  ///< K
    int r1 = 0;
    int s1 = 0;
    double log_gamma1 = 0.0;
    int r2 = 0;
    int s2 = 0;
    double log_gamma2 = 0.0;

    /// log max{gamma_1, gamma_2}.
    double log_best() const;
};

ComparisonMargins bpstwz_margins(double gamma, int classes);

/// (K - 1) floor(4 (R/gamma)^2). Throws ResourceLimit if it does not fit in 64 bits.
std::uint64_t mistake_bound(int classes, double radius, double gamma);

/// The same bound for a margin given as a natural log.
struct MistakeBoundReport {
    double log10_value = 0.0;  ///< -inf when the bound is 0
    std::optional<std::uint64_t> exact;
};

MistakeBoundReport mistake_bound_from_log(int classes, double radius, double log_gamma);

}  // namespace gwsep
