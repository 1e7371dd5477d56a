#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gwsep/core.hpp"

namespace gwsep {

/// Multi-index (alpha_1, ..., alpha_d) of non-negative exponents.
using Exponent = std::vector<std::uint16_t>;

int total_degree(std::span<const std::uint16_t> alpha) noexcept;

/// Graded lexicographic order: lower total degree first, then larger leading
/// exponents first (x1^2 < x1 x2 < x2^2).
struct GradedLexLess {
    bool operator()(const Exponent& a, const Exponent& b) const noexcept;
};

/// Term-count cap applied by the arithmetic below.
inline constexpr std::size_t kDefaultMaxTerms = 2'000'000;

/// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Multivariate polynomial over R^d stored as exponent -> coefficient.
///
/// Zero coefficients are never stored. The norm is the Euclidean norm of the
/// coefficient vector.
class SparsePolynomial {
public:
    using Terms = std::map<Exponent, double, GradedLexLess>;

    explicit SparsePolynomial(std::size_t dim = 0) : dim_(dim) {}

    static SparsePolynomial constant(std::size_t dim, double c);
    /// The coordinate x_{index+1}.
    static SparsePolynomial variable(std::size_t dim, std::size_t index);
    /// c + <v, x>.
    static SparsePolynomial affine(double c, std::span<const double> v);

    std::size_t dim() const noexcept { return dim_; }
    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Max total degree over stored terms; 0 for the zero polynomial.
    int degree() const noexcept;

    double coefficient(const Exponent& alpha) const;
    /// Adds c to the coefficient at alpha, erasing it if the result is zero.
    void add_term(const Exponent& alpha, double c);

    double squared_norm() const;
    double norm() const;
    /// Natural log of the norm, safe when the squared norm would overflow.
    double log_norm() const;

    /// Sum of c_alpha x^alpha with compensated accumulation.
    double evaluate(std::span<const double> x) const;

    SparsePolynomial& operator+=(const SparsePolynomial& other);
    SparsePolynomial& operator-=(const SparsePolynomial& other);
    SparsePolynomial& operator*=(double factor);

    friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

private:
    std::size_t dim_ = 0;
    Terms terms_;
};

SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b);
SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b);
SparsePolynomial operator*(SparsePolynomial a, double factor);
SparsePolynomial operator*(double factor, SparsePolynomial a);

SparsePolynomial multiply(const SparsePolynomial& a, const SparsePolynomial& b,
                          std::size_t max_terms = kDefaultMaxTerms);
inline SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b)
{
    return multiply(a, b);
}

/// q^n by repeated squaring. q^0 is the constant 1.
SparsePolynomial power(const SparsePolynomial& q, int n, std::size_t max_terms = kDefaultMaxTerms);

/// outer(inner(x)) for a univariate outer given by ascending coefficients,
/// evaluated with Horner's scheme in polynomial arithmetic.
SparsePolynomial compose(std::span<const double> outer, const SparsePolynomial& inner,
                         std::size_t max_terms = kDefaultMaxTerms);

}  // namespace gwsep
