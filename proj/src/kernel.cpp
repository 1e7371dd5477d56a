#include "gwsep/kernel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gwsep/errors.hpp"

namespace gwsep {

std::string_view to_string(KernelKind kind)
{
    return kind == KernelKind::linear ? "linear" : "rational";
}

KernelKind parse_kernel_kind(std::string_view text)
{
    if (text == "linear") return KernelKind::linear;
    if (text == "rational") return KernelKind::rational;
    throw InvalidInput("unknown kernel '" + std::string(text) + "' (expected linear or rational)");
}

double kernel_eval(KernelKind kind, std::span<const double> x, std::span<const double> y)
{
    const double ip = dot(x, y);
    if (kind == KernelKind::linear) return ip;
    if (!(ip < 2.0)) {
        throw InvalidInput("rational kernel undefined for <x, x'> >= 2 (inputs must lie in the unit ball)");
    }
    return 1.0 / (1.0 - 0.5 * ip);
}

namespace {

constexpr int kExactMultinomialDegree = 20;

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
    std::array<std::uint64_t, 21> f{};
    f[0] = 1;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
    return f;
}();

}  // namespace

double multinomial(std::span<const std::uint16_t> alpha)
{
    const int n = total_degree(alpha);
    if (n <= kExactMultinomialDegree) {
        std::uint64_t result = kFactorials[static_cast<std::size_t>(n)];
        for (auto a : alpha) result /= kFactorials[a];
        return static_cast<double>(result);
    }
    return std::exp(log_multinomial(alpha));
}

double log_multinomial(std::span<const std::uint16_t> alpha)
{
    const int n = total_degree(alpha);
    if (n <= kExactMultinomialDegree) return std::log(multinomial(alpha));
    double acc = std::lgamma(n + 1.0);
    for (auto a : alpha) acc -= std::lgamma(a + 1.0);
    return acc;
}

double feature_weight(std::span<const std::uint16_t> alpha)
{
    const int n = total_degree(alpha);
    if (n <= kExactMultinomialDegree) return std::sqrt(std::ldexp(multinomial(alpha), -n));
    return std::exp(0.5 * (log_multinomial(alpha) - n * std::numbers::ln2));
}

double feature_coordinate(std::span<const double> x, std::span<const std::uint16_t> alpha)
{
    if (x.size() != alpha.size()) throw InvalidInput("feature_coordinate: dimension mismatch");
    double mono = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (unsigned k = 0; k < alpha[i]; ++k) mono *= x[i];
    }
    return mono * feature_weight(alpha);
}

std::size_t count_multi_indices(std::size_t dim, int max_degree)
{
    if (max_degree < 0) return 0;
    // C(D + d, d) = prod_{i=1..d} (D + i) / i, exact at every step.
    unsigned __int128 c = 1;
    const auto limit = static_cast<unsigned __int128>(std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 1; i <= dim; ++i) {
        c = c * (static_cast<unsigned __int128>(max_degree) + i) / i;
        if (c > limit) return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(c);
}

namespace {

/// Depth-first walk over all multi-indices of total degree <= D in graded-lex
/// order. `extend(state, coordinate, exponent)` refines a prefix state and
/// `emit(state)` is called once per complete multi-index.
template <typename State, typename Extend, typename Emit>
void walk_graded_lex(std::size_t dim, int max_degree, const State& root, Extend&& extend, Emit&& emit)
{
    if (dim == 0) {
        emit(root);
        return;
    }
    auto rec = [&](auto&& self, std::size_t i, int remaining, const State& state) -> void {
        if (i + 1 == dim) {
            emit(extend(state, i, remaining));
            return;
        }
        for (int a = remaining; a >= 0; --a) self(self, i + 1, remaining - a, extend(state, i, a));
    };
    for (int n = 0; n <= max_degree; ++n) rec(rec, 0, n, root);
}

void check_cap(std::size_t dim, int max_degree, std::size_t cap)
{
    if (max_degree < 0) throw InvalidInput("truncation degree must be non-negative");
    const std::size_t count = count_multi_indices(dim, max_degree);
    if (count > cap) {
        throw ResourceLimit("truncated feature map with d=" + std::to_string(dim) + ", D=" +
                            std::to_string(max_degree) + " has " + std::to_string(count) +
                            " coordinates, above the cap of " + std::to_string(cap));
    }
}

}  // namespace

MultiIndexSet::MultiIndexSet(std::size_t dim, int max_degree, std::size_t cap)
    : dim_(dim), max_degree_(max_degree)
{
    check_cap(dim, max_degree, cap);
    const std::size_t count = count_multi_indices(dim, max_degree);
    flat_.reserve(count * dim);
    weights_.reserve(count);
    Exponent buffer(dim, 0);
    walk_graded_lex(
        dim, max_degree, 0,
        [&](int, std::size_t i, int a) {
            buffer[i] = static_cast<std::uint16_t>(a);
            return 0;
        },
        [&](int) {
            flat_.insert(flat_.end(), buffer.begin(), buffer.end());
            weights_.push_back(feature_weight(buffer));
        });
}

TruncatedEmbedding::TruncatedEmbedding(std::shared_ptr<const MultiIndexSet> indices, std::vector<double> values)
    : indices_(std::move(indices)), values_(std::move(values))
{
    if (!indices_ || indices_->size() != values_.size()) {
        throw InvalidInput("truncated embedding: values do not match the index set");
    }
}

double TruncatedEmbedding::dot(const TruncatedEmbedding& other) const
{
    if (indices_ != other.indices_ &&
        (indices_->dim() != other.indices_->dim() || indices_->max_degree() != other.indices_->max_degree())) {
        throw InvalidInput("truncated embeddings over different index sets");
    }
    CompensatedSum sum;
    for (std::size_t i = 0; i < values_.size(); ++i) sum.add(values_[i] * other.values_[i]);
    return sum.value();
}

TruncatedEmbedding truncated_feature_map(std::span<const double> x, int max_degree, std::size_t cap)
{
    return truncated_feature_map(x, std::make_shared<const MultiIndexSet>(x.size(), max_degree, cap));
}

TruncatedEmbedding truncated_feature_map(std::span<const double> x, std::shared_ptr<const MultiIndexSet> indices)
{
    if (x.size() != indices->dim()) throw InvalidInput("truncated_feature_map: dimension mismatch");
    if (norm(x) > 1.0 + kBallTolerance) throw InvalidInput("truncated_feature_map: x outside the unit ball");

    const std::size_t d = x.size();
    const int deg = indices->max_degree();
    std::vector<double> powers(d * static_cast<std::size_t>(deg + 1), 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (int k = 1; k <= deg; ++k) {
            powers[i * static_cast<std::size_t>(deg + 1) + static_cast<std::size_t>(k)] =
                powers[i * static_cast<std::size_t>(deg + 1) + static_cast<std::size_t>(k - 1)] * x[i];
        }
    }

    // Same walk as MultiIndexSet, so the k-th emitted monomial is x^alpha for
    // the k-th stored exponent.
    std::vector<double> values;
    values.reserve(indices->size());
    walk_graded_lex(
        d, deg, 1.0,
        [&](double prefix, std::size_t i, int a) {
            return prefix * powers[i * static_cast<std::size_t>(deg + 1) + static_cast<std::size_t>(a)];
        },
        [&](double mono) { values.push_back(mono * indices->weight(values.size())); });
    return TruncatedEmbedding(std::move(indices), std::move(values));
}

double truncated_feature_dot(std::span<const double> x, std::span<const double> y, const MultiIndexSet& indices)
{
    const std::size_t d = indices.dim();
    if (x.size() != d || y.size() != d) throw InvalidInput("truncated_feature_dot: dimension mismatch");
    if (norm(x) > 1.0 + kBallTolerance || norm(y) > 1.0 + kBallTolerance) {
        throw InvalidInput("truncated_feature_dot: input outside the unit ball");
    }
    if (d == 0) {
        const double w = indices.weight(0);
        return w * w;
    }
    // phi(x)_a phi(y)_a = w_a^2 prod (x_i y_i)^a_i.
    const int deg = indices.max_degree();
    const auto stride = static_cast<std::size_t>(deg + 1);
    std::vector<double> pz(d * stride, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double z = x[i] * y[i];
        for (std::size_t k = 1; k < stride; ++k) pz[i * stride + k] = pz[i * stride + k - 1] * z;
    }

    // Same traversal as MultiIndexSet; the last two coordinates form a flat loop.
    CompensatedSum sum;
    std::size_t next = 0;
    auto leaf = [&](double prefix) {
        const double w = indices.weight(next++);
        sum.add(w * w * prefix);
    };
    auto rec = [&](auto&& self, std::size_t i, int remaining, double prefix) -> void {
        if (i + 1 == d) {
            leaf(prefix * pz[i * stride + static_cast<std::size_t>(remaining)]);
            return;
        }
        if (i + 2 == d) {
            // At most D + 1 terms: a plain partial sum, compensated once.
            const double* zi = &pz[i * stride];
            const double* zl = &pz[(i + 1) * stride];
            double partial = 0.0;
            for (int a = remaining; a >= 0; --a) {
                const double w = indices.weight(next++);
                partial += w * w * zi[a] * zl[remaining - a];
            }
            sum.add(prefix * partial);
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            self(self, i + 1, remaining - a, prefix * pz[i * stride + static_cast<std::size_t>(a)]);
        }
    };
    for (int n = 0; n <= deg; ++n) rec(rec, 0, n, 1.0);
    return sum.value();
}

double truncated_kernel_by_degree(std::span<const double> x, std::span<const double> y, int max_degree)
{
    if (x.size() != y.size()) throw InvalidInput("truncated_kernel_by_degree: dimension mismatch");
    if (max_degree < 0) throw InvalidInput("truncation degree must be non-negative");
    const auto deg = static_cast<std::size_t>(max_degree);

    // slice[n] = sum over alpha on the coordinates seen so far with |alpha| = n
    // of prod z_i^alpha_i / alpha_i!.
    std::vector<double> slice(deg + 1, 0.0);
    slice[0] = 1.0;
    std::vector<double> term(deg + 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = x[i] * y[i];
        term[0] = 1.0;
        for (std::size_t a = 1; a <= deg; ++a) term[a] = term[a - 1] * z / static_cast<double>(a);
        std::vector<double> next(deg + 1, 0.0);
        for (std::size_t n = 0; n <= deg; ++n) {
            CompensatedSum acc;
            for (std::size_t a = 0; a <= n; ++a) acc.add(slice[n - a] * term[a]);
            next[n] = acc.value();
        }
        slice = std::move(next);
    }
    CompensatedSum total;
    double scale = 1.0;  // n! / 2^n
    for (std::size_t n = 0; n <= deg; ++n) {
        if (n > 0) scale *= static_cast<double>(n) / 2.0;
        total.add(scale * slice[n]);
    }
    return total.value();
}

double PolynomialEmbedding::squared_norm() const
{
    CompensatedSum sum;
    for (const auto& [alpha, c] : coords) sum.add(c * c);
    return sum.value();
}

double PolynomialEmbedding::norm() const { return std::sqrt(squared_norm()); }

double PolynomialEmbedding::dot_feature_map(std::span<const double> x) const
{
    if (x.size() != dim) throw InvalidInput("dot_feature_map: dimension mismatch");
    CompensatedSum sum;
    for (const auto& [alpha, c] : coords) sum.add(c * feature_coordinate(x, alpha));
    return sum.value();
}

PolynomialEmbedding embed_polynomial(const SparsePolynomial& p)
{
    PolynomialEmbedding out;
    out.dim = p.dim();
    for (const auto& [alpha, c] : p.terms()) out.coords.emplace(alpha, c / feature_weight(alpha));
    return out;
}

}  // namespace gwsep
