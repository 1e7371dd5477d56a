#pragma once

// Separating polynomials for the intersection of halfspaces.
//
// Given directions v_1..v_m, an intra-group direction v' and threshold points
// v_b, v_t, the constructed polynomial is
//
//   p(x) = m + 5/2 - sum_i T_s(1 - <v_i, x>)^r
//                  - T_s(1 - <x - v_b, v'>/2)^r
//                  - T_s(1 - <v_t - x, v'>/2)^r
//
// with r = ceil(log2(2m + 4)) and s = ceil(sqrt(2/gamma)). It is >= 1/2 on
// the intersection of {<v_i, x> >= gamma} with the threshold slab and <= -1/2
// on the union of the complementary gamma-separated halfspaces. deg(p) = r*s
// and ||p|| <= (9/2) (420 r s)^{r s / 2}.

#include <cstddef>
#include <span>
#include <vector>

#include "gwsep/core.hpp"
#include "gwsep/polynomial.hpp"

namespace gwsep {

/// ceil(log2(n)) for n >= 1.
int ceil_log2(std::uint64_t n);

/// Smallest s >= 1 with s^2 * gamma >= 2, i.e. ceil(sqrt(2/gamma)). The
/// comparison allows 1e-12 relative slack so decimal margins such as 0.005
/// land on the value exact arithmetic gives (20, not 21).
int ceil_sqrt_two_over(double gamma);

struct SeparatingParams {
    int m = 0;
    int r = 0;
    int s = 0;
    int degree() const noexcept { return r * s; }
    /// ln((9/2) (420 r s)^{r s / 2}).
    double log_norm_bound() const;
};

SeparatingParams separating_params(int m, double gamma);

struct ConstructionLimits {
    /// Polynomials above this degree lose all precision in double arithmetic.
    int max_degree = 40;
    std::size_t max_terms = kDefaultMaxTerms;
};

/// Builds p as above. Requires ||v_i|| <= 1, ||v'|| <= 1 and gamma in (0, 1).
/// The threshold points only enter through <v_b, v'> and <v_t, v'>; these must
/// lie in [-3, 3], which keeps every Chebyshev argument >= -1 on the unit ball
/// (always true when ||v_b||, ||v_t|| <= 1).
SparsePolynomial build_separating_polynomial(std::span<const Vector> directions, std::span<const double> intra,
                                             std::span<const double> lower_point,
                                             std::span<const double> upper_point, double gamma,
                                             const ConstructionLimits& limits = {});

/// Lower/upper thresholds isolating one class along its group's intra direction.
struct ClassThresholds {
    int label = 0;
    Vector direction;  ///< u'_{g(y)}
    double lower = 0.0;
    double upper = 0.0;
};

/// b = min projection - gamma, t = max projection + gamma over the class's
/// examples. Throws VerificationFailure when a same-group example of another
/// class projects inside (b - gamma, t + gamma).
ClassThresholds class_thresholds(const Dataset& data, const GroupStructure& groups,
                                 std::span<const double> intra_direction, int label, double gamma,
                                 double tol = kVerifyTolerance);

/// The separating polynomial for one class of a group-weak certificate,
/// together with its evaluation on the dataset.
struct ClassSeparator {
    int label = 0;
    int group = 0;
    SeparatingParams params;
    ClassThresholds thresholds;
    Vector lower_point;  ///< v_b
    Vector upper_point;  ///< v_t
    bool thresholds_in_unit_ball = true;
    SparsePolynomial polynomial;

    double min_positive = 0.0;  ///< min p(x_t) over the class (+inf if empty)
    double max_negative = 0.0;  ///< max p(x_t) over other classes (-inf if none)
    std::size_t positives = 0;
    std::size_t negatives = 0;

    bool passed(double tol = kVerifyTolerance) const
    {
        return min_positive >= 0.5 - tol && max_negative <= -0.5 + tol;
    }
};

/// Instantiates the construction for `label`: v_j = u_{g} - u_{j'} over the
/// other groups j' in increasing order (m = L - 1), v' = u'_g and
/// v_b, v_t = (b, t) / ||u'_g||^2 * u'_g, so that <v_b, v'> = b and
/// <v_t, v'> = t. All three are zero when u'_g = 0.
ClassSeparator separate_class(const Dataset& data, const SeparabilityCertificate& certificate, int label,
                              const ConstructionLimits& limits = {});

std::vector<ClassSeparator> separate_all_classes(const Dataset& data, const SeparabilityCertificate& certificate,
                                                 const ConstructionLimits& limits = {});

}  // namespace gwsep
