#pragma once

// Minsky–Papert symmetrization on the ±1 hypercube.
//
// The average of p over all n! variable permutations depends on a sign
// vector only through its weight s, and equals the mean of p over the C(n,s)
// vectors of weight s. For one monomial of size k that mean is the
// hypergeometric sum
//
//     (1 / C(n,s)) Σ_j (-1)^j C(k,j) C(n-k, s-j),
//
// so the weight-level averages cost O(#terms + n·deg) big-number operations.
// The result is interpolated through s = 0..deg(p) and checked against the
// remaining weights.

#include <algorithm>
#include <bit>
#include <map>
#include <vector>

#include "qerr/errors.hpp"
#include "qerr/multilinear.hpp"
#include "qerr/univariate.hpp"

namespace qerr {

/// Mean of x̂_S over weight-s points of {-1,1}^n, for any S with |S| = k.
inline Rational monomial_weight_average(unsigned n, unsigned k, unsigned s) {
    Integer total = 0;
    for (unsigned j = 0; j <= std::min(k, s); ++j) {
        if (s - j > n - k) continue;
        Integer term = binomial(k, j) * binomial(n - k, s - j);
        if (j & 1U) total -= term;
        else total += term;
    }
    return Rational(total, binomial(n, s));
}

/// Mean of p over all weight-s points, for every s in 0..n.
inline std::vector<Rational> weight_averages(const MultilinearPoly& p) {
    const unsigned n = p.n();
    std::map<unsigned, Rational> by_size;  // Σ of coefficients of size-k monomials
    for (const auto& [m, c] : p.terms()) by_size[static_cast<unsigned>(std::popcount(m))] += c;

    std::vector<Rational> avg(n + 1);
    for (unsigned s = 0; s <= n; ++s)
        for (const auto& [k, c] : by_size)
            if (!c.is_zero()) avg[s] += c * monomial_weight_average(n, k, s);
    return avg;
}

inline UnivariatePoly symmetrize(const MultilinearPoly& p) {
    if (p.is_zero()) return {};
    const auto avg = weight_averages(p);
    const auto d = static_cast<std::size_t>(p.degree());
    const std::size_t fit = std::min(d + 1, avg.size());
    UnivariatePoly q = interpolate_at_naturals(std::span(avg).first(fit));
    for (std::size_t s = fit; s < avg.size(); ++s)
        if (q(Rational(static_cast<long>(s))) != avg[s])
            throw InvariantError("symmetrization: weight average at s=" + std::to_string(s) +
                                 " disagrees with the degree-" + std::to_string(d) + " interpolant");
    return q;
}

/// Π_{0≤i<j} (s - i)(n - s - i); the weight multiplying the j-th Blekherman term.
inline UnivariatePoly falling_factorial_weight(unsigned n, unsigned j) {
    if (2 * j > n) throw DomainError("falling factorial weight needs 2j <= n");
    UnivariatePoly out = UnivariatePoly::constant(1);
    for (unsigned i = 0; i < j; ++i) {
        const Rational ri(static_cast<long>(i));
        out = out * UnivariatePoly({-ri, 1}) * UnivariatePoly({Rational(static_cast<long>(n)) - ri, -1});
    }
    return out;
}

}  // namespace qerr
