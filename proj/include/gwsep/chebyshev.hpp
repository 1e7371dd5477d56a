#pragma once

#include <span>
#include <string>
#include <vector>

#include "gwsep/polynomial.hpp"

namespace gwsep {

/// Exact integer coefficient type. T_64 has coefficients near 2^81.
using WideInt = __int128;

inline constexpr int kMaxChebyshevDegree = 64;

std::string to_string(WideInt v);

/// Chebyshev polynomials of the first kind, T_0..T_n, with exact integer
/// coefficients listed in ascending powers of z.
class ChebyshevTable {
public:
    explicit ChebyshevTable(int max_degree);

    int max_degree() const noexcept { return static_cast<int>(rows_.size()) - 1; }
    const std::vector<WideInt>& coefficients(int n) const;
    std::vector<double> coefficients_as_double(int n) const;

    /// Euclidean norm of the coefficient vector of T_n.
    double norm(int n) const;

private:
    std::vector<std::vector<WideInt>> rows_;
};

/// Coefficients of T_n. Throws InvalidInput for n < 0 or n > 64.
std::vector<WideInt> chebyshev(int n);

/// T_n(z) through the three-term recurrence.
double chebyshev_value(int n, double z);

/// T_n(inner(x)) built with the recurrence T_{k+1} = 2 f T_k - T_{k-1}
/// in polynomial arithmetic.
SparsePolynomial chebyshev_compose(int n, const SparsePolynomial& inner,
                                   std::size_t max_terms = kDefaultMaxTerms);

}  // namespace gwsep
