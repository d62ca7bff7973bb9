#pragma once

// Multilinear polynomials in ±1 variables.
//
// Variable i (1-based in the public API) carries the value x̂_i = (-1)^{x_i},
// so x̂_i² = 1 and every polynomial reduces to a multilinear one. Monomials
// are keyed by the bitmask of their variable set; ordering the keys
// numerically is exactly the colexicographic order on subsets.

#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qerr/errors.hpp"
#include "qerr/rational.hpp"

namespace qerr {

using Monomial = std::uint64_t;

inline constexpr unsigned kMaxVariables = 62;

inline Monomial monomial_of(std::span<const unsigned> vars_one_based) {
    Monomial m = 0;
    for (unsigned v : vars_one_based) {
        if (v == 0 || v > kMaxVariables) throw DomainError("variable index out of range");
        const Monomial bit = Monomial{1} << (v - 1);
        if (m & bit) throw DomainError("repeated variable in monomial");
        m |= bit;
    }
    return m;
}

inline std::vector<unsigned> variables_of(Monomial m) {
    std::vector<unsigned> out;
    for (unsigned i = 0; m; ++i, m >>= 1U)
        if (m & 1U) out.push_back(i + 1);
    return out;
}

/// A point of the hypercube {-1,+1}^n.
class SignVector {
public:
    explicit SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw DomainError("sign vector must have at least one entry");
        for (int e : entries_)
            if (e != 1 && e != -1) throw DomainError("sign vector entries must be +1 or -1");
    }

    /// Sign vector of the 0/1 string encoded by `bits` (bit i is x_{i+1}).
    static SignVector from_bits(std::uint64_t bits, unsigned n) {
        std::vector<int> e(n);
        for (unsigned i = 0; i < n; ++i) e[i] = (bits >> i) & 1U ? -1 : 1;
        return SignVector(std::move(e));
    }

    unsigned size() const { return static_cast<unsigned>(entries_.size()); }
    int operator[](unsigned i) const { return entries_[i]; }
    const std::vector<int>& entries() const { return entries_; }

    /// Number of -1 entries, i.e. the Hamming weight |x|.
    unsigned weight() const {
        unsigned w = 0;
        for (int e : entries_) w += e < 0;
        return w;
    }

    /// Bitmask of the -1 positions.
    Monomial negative_mask() const {
        Monomial m = 0;
        for (unsigned i = 0; i < size(); ++i)
            if (entries_[i] < 0) m |= Monomial{1} << i;
        return m;
    }

private:
    std::vector<int> entries_;
};

class MultilinearPoly {
public:
    explicit MultilinearPoly(unsigned n) : n_(n) {
        if (n > kMaxVariables) throw DomainError("too many variables");
    }

    static MultilinearPoly constant(unsigned n, const Rational& c) {
        MultilinearPoly p(n);
        p.add_term(0, c);
        return p;
    }

    /// The single variable x̂_i, 1-based.
    static MultilinearPoly variable(unsigned n, unsigned i) {
        if (i == 0 || i > n) throw DomainError("variable index out of range");
        MultilinearPoly p(n);
        p.add_term(Monomial{1} << (i - 1), 1);
        return p;
    }

    unsigned n() const { return n_; }
    const std::map<Monomial, Rational>& terms() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(Monomial m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? Rational{0} : it->second;
    }

    /// Adds c·x̂_S; cancelling terms are dropped.
    void add_term(Monomial m, const Rational& c) {
        if (m >> n_) throw DomainError("monomial uses a variable beyond n");
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    /// Largest monomial size; -1 for the zero polynomial.
    int degree() const {
        int d = -1;
        for (const auto& [m, c] : coeffs_) d = std::max(d, std::popcount(m));
        return d;
    }

    Rational eval(const SignVector& v) const {
        if (v.size() != n_) throw DimensionError("sign vector length does not match polynomial arity");
        const Monomial neg = v.negative_mask();
        Rational sum{0};
        for (const auto& [m, c] : coeffs_) {
            if (std::popcount(m & neg) & 1) sum -= c;
            else sum += c;
        }
        return sum;
    }

    MultilinearPoly& operator+=(const MultilinearPoly& o) {
        require_same_arity(o);
        for (const auto& [m, c] : o.coeffs_) add_term(m, c);
        return *this;
    }
    MultilinearPoly& operator-=(const MultilinearPoly& o) {
        require_same_arity(o);
        for (const auto& [m, c] : o.coeffs_) add_term(m, -c);
        return *this;
    }
    MultilinearPoly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [m, c] : coeffs_) c *= s;
        return *this;
    }

    friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) { return a += b; }
    friend MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b) { return a -= b; }
    friend MultilinearPoly operator*(MultilinearPoly a, const Rational& s) { return a *= s; }
    friend MultilinearPoly operator*(const Rational& s, MultilinearPoly a) { return a *= s; }
    friend MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b);

    friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;

    /// Relabels variables: variable i becomes variable perm[i-1] (both 1-based).
    MultilinearPoly permuted(std::span<const unsigned> perm) const {
        if (perm.size() != n_) throw DimensionError("permutation length does not match polynomial arity");
        MultilinearPoly out(n_);
        for (const auto& [m, c] : coeffs_) {
            Monomial image = 0;
            for (unsigned v : variables_of(m)) image |= Monomial{1} << (perm[v - 1] - 1);
            out.add_term(image, c);
        }
        return out;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : coeffs_) {
            if (!out.empty()) out += " + ";
            out += c.str();
            for (unsigned v : variables_of(m)) out += "*x" + std::to_string(v);
        }
        return out;
    }

private:
    void require_same_arity(const MultilinearPoly& o) const {
        if (o.n_ != n_) throw DimensionError("polynomials over different numbers of variables");
    }

    unsigned n_;
    std::map<Monomial, Rational> coeffs_;
};

/// Product reduced by x̂_i² = 1: monomials combine by symmetric difference.
inline MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
    a.require_same_arity(b);
    MultilinearPoly out(a.n_);
    for (const auto& [ma, ca] : a.coeffs_)
        for (const auto& [mb, cb] : b.coeffs_) out.add_term(ma ^ mb, ca * cb);
    return out;
}

inline Rational eval_multilinear(const MultilinearPoly& p, const SignVector& v) { return p.eval(v); }

inline MultilinearPoly multiply(const MultilinearPoly& p, const MultilinearPoly& q) { return p * q; }

/// S_m over the variables in `support` (a bitmask); S_0 = 1.
inline MultilinearPoly elementary_symmetric_on(unsigned n, Monomial support, unsigned m) {
    const auto vars = variables_of(support);
    if (m > vars.size()) throw DomainError("elementary symmetric degree exceeds variable count");
    MultilinearPoly out(n);
    // Walk all m-subsets of `vars` via an index combination.
    std::vector<unsigned> idx(m);
    for (unsigned i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        Monomial mono = 0;
        for (unsigned i : idx) mono |= Monomial{1} << (vars[i] - 1);
        out.add_term(mono, 1);
        int k = static_cast<int>(m) - 1;
        while (k >= 0 && idx[k] == vars.size() - m + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (unsigned j = k + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

inline MultilinearPoly elementary_symmetric(unsigned n, unsigned m) {
    if (n == 0) throw DomainError("n must be positive");
    if (m > n) throw DomainError("elementary symmetric degree m must lie in [0, n]");
    const Monomial all = n == 64 ? ~Monomial{0} : (Monomial{1} << n) - 1;
    return elementary_symmetric_on(n, all, m);
}

using IndexPair = std::pair<unsigned, unsigned>;

/// (x̂_{i1} - x̂_{j1})···(x̂_{ib} - x̂_{jb}) · Σ_m alpha[m]·S_m(x̂'), where x̂' are
/// the n - 2b variables outside the pairs. Indices are 1-based.
inline MultilinearPoly basis_poly(unsigned n, std::span<const IndexPair> pairs, std::span<const Rational> alpha) {
    if (n == 0) throw DomainError("n must be positive");
    if (2 * pairs.size() > n) throw DomainError("too many pairs for n variables");
    Monomial used = 0;
    for (auto [i, j] : pairs) {
        for (unsigned v : {i, j}) {
            if (v == 0 || v > n) throw DomainError("pair index out of range");
            const Monomial bit = Monomial{1} << (v - 1);
            if (used & bit) throw DomainError("pair indices overlap");
            used |= bit;
        }
    }
    const unsigned rest = n - 2 * static_cast<unsigned>(pairs.size());
    if (alpha.size() != rest + 1) throw DomainError("alpha must have n - 2b + 1 entries");

    const Monomial all = (Monomial{1} << n) - 1;
    MultilinearPoly out(n);
    for (unsigned m = 0; m <= rest; ++m)
        if (!alpha[m].is_zero()) out += elementary_symmetric_on(n, all & ~used, m) * alpha[m];
    for (auto [i, j] : pairs) out = out * (MultilinearPoly::variable(n, i) - MultilinearPoly::variable(n, j));
    return out;
}

}  // namespace qerr
