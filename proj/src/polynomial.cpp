#include "gwsep/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gwsep/errors.hpp"

namespace gwsep {

int total_degree(std::span<const std::uint16_t> alpha) noexcept
{
    int n = 0;
    for (auto a : alpha) n += a;
    return n;
}

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const noexcept
{
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void CompensatedSum::add(double v) noexcept
{
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        carry_ += (sum_ - t) + v;
    } else {
        carry_ += (v - t) + sum_;
    }
    sum_ = t;
}

SparsePolynomial SparsePolynomial::constant(std::size_t dim, double c)
{
    SparsePolynomial p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
}

SparsePolynomial SparsePolynomial::variable(std::size_t dim, std::size_t index)
{
    if (index >= dim) throw InvalidInput("variable index " + std::to_string(index) + " out of range");
    SparsePolynomial p(dim);
    Exponent alpha(dim, 0);
    alpha[index] = 1;
    p.add_term(alpha, 1.0);
    return p;
}

SparsePolynomial SparsePolynomial::affine(double c, std::span<const double> v)
{
    SparsePolynomial p(v.size());
    p.add_term(Exponent(v.size(), 0), c);
    for (std::size_t i = 0; i < v.size(); ++i) {
        Exponent alpha(v.size(), 0);
        alpha[i] = 1;
        p.add_term(alpha, v[i]);
    }
    return p;
}

int SparsePolynomial::degree() const noexcept
{
    // Graded order: the last key has the largest total degree.
    return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
}

double SparsePolynomial::coefficient(const Exponent& alpha) const
{
    const auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

void SparsePolynomial::add_term(const Exponent& alpha, double c)
{
    if (alpha.size() != dim_) {
        throw InvalidInput("exponent of length " + std::to_string(alpha.size()) + " in a " +
                           std::to_string(dim_) + "-variate polynomial");
    }
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double SparsePolynomial::squared_norm() const
{
    CompensatedSum sum;
    for (const auto& [alpha, c] : terms_) sum.add(c * c);
    return sum.value();
}

double SparsePolynomial::norm() const { return std::sqrt(squared_norm()); }

double SparsePolynomial::log_norm() const
{
    if (terms_.empty()) return -std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const auto& [alpha, c] : terms_) scale = std::max(scale, std::abs(c));
    CompensatedSum sum;
    for (const auto& [alpha, c] : terms_) {
        const double r = c / scale;
        sum.add(r * r);
    }
    return std::log(scale) + 0.5 * std::log(sum.value());
}

double SparsePolynomial::evaluate(std::span<const double> x) const
{
    if (x.size() != dim_) {
        throw InvalidInput("evaluate: point of dimension " + std::to_string(x.size()) + " for a " +
                           std::to_string(dim_) + "-variate polynomial");
    }
    // Power table so each monomial costs d multiplications.
    const int deg = degree();
    std::vector<double> powers(dim_ * static_cast<std::size_t>(deg + 1), 1.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        double* row = powers.data() + i * static_cast<std::size_t>(deg + 1);
        for (int k = 1; k <= deg; ++k) row[k] = row[k - 1] * x[i];
    }
    CompensatedSum sum;
    for (const auto& [alpha, c] : terms_) {
        double mono = c;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (alpha[i] != 0) mono *= powers[i * static_cast<std::size_t>(deg + 1) + alpha[i]];
        }
        sum.add(mono);
    }
    return sum.value();
}

namespace {

void require_same_dim(const SparsePolynomial& a, const SparsePolynomial& b)
{
    if (a.dim() != b.dim()) {
        throw InvalidInput("polynomial dimensions differ (" + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()) + ")");
    }
}

}  // namespace

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& other)
{
    require_same_dim(*this, other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
    return *this;
}

SparsePolynomial& SparsePolynomial::operator-=(const SparsePolynomial& other)
{
    require_same_dim(*this, other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
    return *this;
}

SparsePolynomial& SparsePolynomial::operator*=(double factor)
{
    if (factor == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= factor;
        it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) { return a -= b; }
SparsePolynomial operator*(SparsePolynomial a, double factor) { return a *= factor; }
SparsePolynomial operator*(double factor, SparsePolynomial a) { return a *= factor; }

SparsePolynomial multiply(const SparsePolynomial& a, const SparsePolynomial& b, std::size_t max_terms)
{
    require_same_dim(a, b);
    const std::size_t d = a.dim();
    std::map<Exponent, CompensatedSum, GradedLexLess> acc;
    Exponent alpha(d);
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            for (std::size_t i = 0; i < d; ++i) {
                const unsigned sum = unsigned{ea[i]} + unsigned{eb[i]};
                if (sum > std::numeric_limits<std::uint16_t>::max()) {
                    throw ResourceLimit("polynomial exponent overflow");
                }
                alpha[i] = static_cast<std::uint16_t>(sum);
            }
            acc[alpha].add(ca * cb);
            if (acc.size() > max_terms) {
                throw ResourceLimit("polynomial product exceeds " + std::to_string(max_terms) + " terms");
            }
        }
    }
    SparsePolynomial out(d);
    for (const auto& [e, s] : acc) out.add_term(e, s.value());
    return out;
}

SparsePolynomial power(const SparsePolynomial& q, int n, std::size_t max_terms)
{
    if (n < 0) throw InvalidInput("negative polynomial power");
    SparsePolynomial result = SparsePolynomial::constant(q.dim(), 1.0);
    SparsePolynomial base = q;
    while (n > 0) {
        if (n & 1) result = multiply(result, base, max_terms);
        n >>= 1;
        if (n > 0) base = multiply(base, base, max_terms);
    }
    return result;
}

SparsePolynomial compose(std::span<const double> outer, const SparsePolynomial& inner, std::size_t max_terms)
{
    SparsePolynomial result(inner.dim());
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) {
        result = multiply(result, inner, max_terms);
        result += SparsePolynomial::constant(inner.dim(), *it);
    }
    return result;
}

}  // namespace gwsep
