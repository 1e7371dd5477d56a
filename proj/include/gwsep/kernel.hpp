#pragma once

// Rational kernel k(x, x') = 1 / (1 - <x, x'>/2) on the unit ball and its
// feature map into l2. Coordinates of the map are indexed by multi-indices
// alpha with
//
//   phi(x)_alpha = x^alpha * sqrt(2^-|alpha| * multinomial(alpha)).
//
// The map is infinite; TruncatedEmbedding keeps all |alpha| <= D.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "gwsep/polynomial.hpp"

namespace gwsep {

enum class KernelKind { linear, rational };

std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view text);

/// linear: <x, x'>; rational: 1 / (1 - <x, x'>/2). Rational requires <x, x'> < 2.
double kernel_eval(KernelKind kind, std::span<const double> x, std::span<const double> y);

/// multinomial(alpha) = |alpha|! / prod alpha_i!. Exact integer arithmetic for
/// |alpha| <= 20, log-gamma above.
double multinomial(std::span<const std::uint16_t> alpha);
double log_multinomial(std::span<const std::uint16_t> alpha);

/// sqrt(2^-|alpha| * multinomial(alpha)).
double feature_weight(std::span<const std::uint16_t> alpha);

/// phi(x)_alpha for one coordinate.
double feature_coordinate(std::span<const double> x, std::span<const std::uint16_t> alpha);

/// C(D + d, d), saturating at SIZE_MAX.
std::size_t count_multi_indices(std::size_t dim, int max_degree);

inline constexpr std::size_t kDefaultCoordinateCap = 10'000'000;

/// Every multi-index of total degree <= D in dimension d, in graded-lex order,
/// stored flat together with its feature weight.
class MultiIndexSet {
public:
    MultiIndexSet(std::size_t dim, int max_degree, std::size_t cap = kDefaultCoordinateCap);

    std::size_t dim() const noexcept { return dim_; }
    int max_degree() const noexcept { return max_degree_; }
    std::size_t size() const noexcept { return weights_.size(); }

    std::span<const std::uint16_t> exponent(std::size_t i) const
    {
        return {flat_.data() + i * dim_, dim_};
    }
    double weight(std::size_t i) const { return weights_[i]; }

private:
    std::size_t dim_;
    int max_degree_;
    std::vector<std::uint16_t> flat_;
    std::vector<double> weights_;
};

/// phi(x) restricted to |alpha| <= D. Values align with indices().
class TruncatedEmbedding {
public:
    TruncatedEmbedding(std::shared_ptr<const MultiIndexSet> indices, std::vector<double> values);

    const MultiIndexSet& indices() const noexcept { return *indices_; }
    std::shared_ptr<const MultiIndexSet> shared_indices() const noexcept { return indices_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Compensated dot product with another embedding over the same index set.
    double dot(const TruncatedEmbedding& other) const;

private:
    std::shared_ptr<const MultiIndexSet> indices_;
    std::vector<double> values_;
};

TruncatedEmbedding truncated_feature_map(std::span<const double> x, int max_degree,
                                         std::size_t cap = kDefaultCoordinateCap);
TruncatedEmbedding truncated_feature_map(std::span<const double> x, std::shared_ptr<const MultiIndexSet> indices);

/// <phi(x), phi(y)> over `indices` as sum_alpha w_alpha^2 (x o y)^alpha, in a
/// single traversal without storing either embedding.
double truncated_feature_dot(std::span<const double> x, std::span<const double> y, const MultiIndexSet& indices);

/// sum_{|alpha| <= D} phi(x)_alpha phi(y)_alpha evaluated degree slice by degree
/// slice. With z_i = x_i y_i, the slice of degree n is
/// 2^-n n! sum_{|alpha| = n} prod z_i^alpha_i / alpha_i!, accumulated one
/// coordinate at a time. Costs O(d D^2) instead of C(D + d, d).
double truncated_kernel_by_degree(std::span<const double> x, std::span<const double> y, int max_degree);

/// l2 coefficients c with <c, phi(x)> = p(x): c_alpha = p_alpha / feature_weight(alpha).
struct PolynomialEmbedding {
    std::size_t dim = 0;
    std::map<Exponent, double, GradedLexLess> coords;

    double squared_norm() const;
    double norm() const;
    /// <c, phi(x)>, summing only over the support of c.
    double dot_feature_map(std::span<const double> x) const;
};

PolynomialEmbedding embed_polynomial(const SparsePolynomial& p);

}  // namespace gwsep
