#pragma once

// Test-only brute-force oracles. Nothing here calls the symmetrization,
// evaluation or probability code under test; monomials are evaluated by
// multiplying sign entries directly.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qerr/multilinear.hpp"
#include "qerr/rational.hpp"

namespace qerr::oracle {

/// Σ_S c_S Π_{i∈S} v_i by explicit products.
inline Rational eval_direct(const MultilinearPoly& p, const std::vector<int>& v) {
    Rational total{0};
    for (const auto& [m, c] : p.terms()) {
        int sign = 1;
        for (unsigned i = 0; i < v.size(); ++i)
            if ((m >> i) & 1U) sign *= v[i];
        total += sign > 0 ? c : -c;
    }
    return total;
}

inline std::vector<int> signs_of_mask(std::uint64_t mask, unsigned n) {
    std::vector<int> v(n);
    for (unsigned i = 0; i < n; ++i) v[i] = (mask >> i) & 1U ? -1 : 1;
    return v;
}

/// For each s, (1/n!) Σ_π p(π·v) with v = (-1,…,-1,+1,…,+1) of weight s.
inline std::vector<Rational> symmetrize_by_permutations(const MultilinearPoly& p) {
    const unsigned n = p.n();
    std::vector<Rational> out;
    for (unsigned s = 0; s <= n; ++s) {
        std::vector<int> base(n, 1);
        std::fill(base.begin(), base.begin() + s, -1);
        std::vector<unsigned> perm(n);
        std::iota(perm.begin(), perm.end(), 0U);
        Rational sum{0};
        std::uint64_t count = 0;
        do {
            std::vector<int> moved(n);
            for (unsigned i = 0; i < n; ++i) moved[perm[i]] = base[i];
            sum += eval_direct(p, moved);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.push_back(sum / Rational(Integer(static_cast<unsigned long>(count))));
    }
    return out;
}

/// For each s, the mean of p over all 2^n sign vectors of weight s.
inline std::vector<Rational> symmetrize_by_weight_classes(const MultilinearPoly& p) {
    const unsigned n = p.n();
    std::vector<Rational> sum(n + 1);
    std::vector<std::uint64_t> count(n + 1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto s = static_cast<unsigned>(__builtin_popcountll(mask));
        sum[s] += eval_direct(p, signs_of_mask(mask, n));
        ++count[s];
    }
    for (unsigned s = 0; s <= n; ++s) sum[s] /= Rational(Integer(static_cast<unsigned long>(count[s])));
    return sum;
}

/// Random multilinear polynomial: each monomial of size ≤ max_degree kept
/// with probability `density`, coefficient a random small fraction.
inline MultilinearPoly random_poly(std::mt19937_64& gen, unsigned n, unsigned max_degree, double density = 0.5) {
    MultilinearPoly p(n);
    std::uniform_real_distribution<double> keep(0.0, 1.0);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 6);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        if (static_cast<unsigned>(__builtin_popcountll(m)) > max_degree) continue;
        if (keep(gen) < density) p.add_term(m, Rational(num(gen), den(gen)));
    }
    return p;
}

inline std::vector<unsigned> random_permutation(std::mt19937_64& gen, unsigned n) {
    std::vector<unsigned> perm(n);
    std::iota(perm.begin(), perm.end(), 1U);
    std::shuffle(perm.begin(), perm.end(), gen);
    return perm;
}

}  // namespace qerr::oracle
