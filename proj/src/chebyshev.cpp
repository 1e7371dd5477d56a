#include "gwsep/chebyshev.hpp"

#include <algorithm>
#include <cmath>

#include "gwsep/errors.hpp"

namespace gwsep {

std::string to_string(WideInt v)
{
    if (v == 0) return "0";
    const bool negative = v < 0;
    unsigned __int128 u = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

ChebyshevTable::ChebyshevTable(int max_degree)
{
    if (max_degree < 0 || max_degree > kMaxChebyshevDegree) {
        throw InvalidInput("Chebyshev degree " + std::to_string(max_degree) + " outside [0, " +
                           std::to_string(kMaxChebyshevDegree) + "]");
    }
    rows_.push_back({1});
    if (max_degree >= 1) rows_.push_back({0, 1});
    for (int n = 1; n < max_degree; ++n) {
        const auto& cur = rows_[static_cast<std::size_t>(n)];
        const auto& prev = rows_[static_cast<std::size_t>(n - 1)];
        std::vector<WideInt> next(cur.size() + 1, 0);
        for (std::size_t k = 0; k < cur.size(); ++k) next[k + 1] += 2 * cur[k];
        for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= prev[k];
        rows_.push_back(std::move(next));
    }
}

const std::vector<WideInt>& ChebyshevTable::coefficients(int n) const
{
    if (n < 0 || n > max_degree()) {
        throw InvalidInput("Chebyshev table has no degree " + std::to_string(n));
    }
    return rows_[static_cast<std::size_t>(n)];
}

std::vector<double> ChebyshevTable::coefficients_as_double(int n) const
{
    const auto& exact = coefficients(n);
    std::vector<double> out(exact.size());
    std::transform(exact.begin(), exact.end(), out.begin(), [](WideInt c) { return static_cast<double>(c); });
    return out;
}

double ChebyshevTable::norm(int n) const
{
    long double sum = 0;
    for (WideInt c : coefficients(n)) {
        const auto v = static_cast<long double>(c);
        sum += v * v;
    }
    return static_cast<double>(std::sqrt(sum));
}

std::vector<WideInt> chebyshev(int n)
{
    return ChebyshevTable(n).coefficients(n);
}

double chebyshev_value(int n, double z)
{
    if (n < 0) throw InvalidInput("negative Chebyshev degree");
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = z;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * z * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

SparsePolynomial chebyshev_compose(int n, const SparsePolynomial& inner, std::size_t max_terms)
{
    if (n < 0) throw InvalidInput("negative Chebyshev degree");
    SparsePolynomial prev = SparsePolynomial::constant(inner.dim(), 1.0);
    if (n == 0) return prev;
    SparsePolynomial cur = inner;
    const SparsePolynomial twice = 2.0 * inner;
    for (int k = 1; k < n; ++k) {
        SparsePolynomial next = multiply(twice, cur, max_terms);
        next -= prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace gwsep
