#pragma once

// Blekherman-form certificates for symmetrized squares.
//
// A certificate for q(s) over n variables with half-degree t states
//
//     q(s) = Σ_{j=0..t} σ_j(s) · Π_{0≤i<j} (s - i)(n - s - i),   s = 0..n,
//
// where each σ_j is a sum of squares of polynomials of degree ≤ t - j. The
// identity is only claimed on the hypercube, so verification compares both
// sides at the integer weights 0..n.
//
// Besides certificates this header carries the exact checks behind the
// decomposition argument: the all-pairs-mixed probability, symmetrized
// squares of irreducible basis polynomials, and the ρ² = cρ test for the
// sum of outer products over one irreducible subspace.

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qerr/errors.hpp"
#include "qerr/multilinear.hpp"
#include "qerr/rational.hpp"
#include "qerr/symmetrize.hpp"
#include "qerr/univariate.hpp"

namespace qerr {

/// A·s² + B·s + C, nonnegative on the reals: A ≥ 0, C ≥ 0, B² ≤ 4AC.
/// Equivalent to the PSD Gram matrix [[C, B/2], [B/2, A]] on (1, s), which
/// keeps witnesses rational when the explicit squares would need radicals.
struct GramQuadratic {
    Rational A, B, C;

    bool valid() const { return A.sign() >= 0 && C.sign() >= 0 && B * B <= Rational(4) * A * C; }
    UnivariatePoly polynomial() const { return UnivariatePoly({C, B, A}); }
    friend bool operator==(const GramQuadratic&, const GramQuadratic&) = default;
};

class SOSWitness {
public:
    static SOSWitness from_squares(std::vector<UnivariatePoly> squares) {
        if (squares.empty()) throw DomainError("SOS witness needs at least one square");
        return SOSWitness(std::move(squares));
    }
    static SOSWitness from_gram(GramQuadratic g) {
        if (!g.valid()) throw DomainError("Gram data is not positive semidefinite");
        return SOSWitness(std::move(g));
    }

    bool is_gram() const { return std::holds_alternative<GramQuadratic>(form_); }
    const GramQuadratic& gram() const { return std::get<GramQuadratic>(form_); }
    const std::vector<UnivariatePoly>& squares() const { return std::get<std::vector<UnivariatePoly>>(form_); }

    /// The represented polynomial Σ squares_i².
    UnivariatePoly polynomial() const {
        if (is_gram()) return gram().polynomial();
        UnivariatePoly out;
        for (const auto& sq : squares()) out += sq * sq;
        return out;
    }

    /// Largest degree among the squared polynomials (0 for constants and zero).
    int half_degree() const {
        if (is_gram()) return gram().A.is_zero() ? 0 : 1;
        int d = 0;
        for (const auto& sq : squares()) d = std::max(d, sq.degree());
        return d;
    }

    /// Multiplies every square by γ, so the represented polynomial scales by γ².
    SOSWitness scaled(const Rational& gamma) const {
        if (is_gram()) {
            const auto g2 = gamma * gamma;
            return SOSWitness(GramQuadratic{gram().A * g2, gram().B * g2, gram().C * g2});
        }
        auto sq = squares();
        for (auto& p : sq) p *= gamma;
        return SOSWitness(std::move(sq));
    }

private:
    explicit SOSWitness(std::vector<UnivariatePoly> s) : form_(std::move(s)) {}
    explicit SOSWitness(GramQuadratic g) : form_(std::move(g)) {}

    std::variant<std::vector<UnivariatePoly>, GramQuadratic> form_;
};

class DecompositionCertificate {
public:
    /// `terms[j]` is the SOS multiplier of the j-th weight; there must be t+1 of them.
    DecompositionCertificate(unsigned n, unsigned t, std::vector<std::optional<SOSWitness>> terms)
        : n_(n), t_(t), terms_(std::move(terms)) {
        if (n == 0) throw DomainError("certificate needs n >= 1");
        if (2 * t > n) throw DomainError("certificate needs t <= n/2");
        if (terms_.size() != t + 1) throw DomainError("certificate needs exactly t+1 term slots");
    }

    unsigned n() const { return n_; }
    unsigned t() const { return t_; }
    const std::vector<std::optional<SOSWitness>>& terms() const { return terms_; }

    DecompositionCertificate scaled(const Rational& gamma) const {
        auto out = terms_;
        for (auto& term : out)
            if (term) term = term->scaled(gamma);
        return {n_, t_, std::move(out)};
    }

private:
    unsigned n_;
    unsigned t_;
    std::vector<std::optional<SOSWitness>> terms_;
};

inline Rational evaluate_certificate(const DecompositionCertificate& cert, const Rational& s) {
    Rational total{0};
    for (unsigned j = 0; j <= cert.t(); ++j) {
        const auto& term = cert.terms()[j];
        if (!term) continue;
        total += term->polynomial()(s) * falling_factorial_weight(cert.n(), j)(s);
    }
    return total;
}

struct VerifyResult {
    bool ok = false;
    std::optional<unsigned> first_failing_s;
    std::string reason;
};

inline VerifyResult verify_certificate_detailed(const DecompositionCertificate& cert, const UnivariatePoly& q) {
    if (q.degree() > static_cast<int>(2 * cert.t()))
        throw DomainError("target degree exceeds 2t for this certificate");
    for (unsigned j = 0; j <= cert.t(); ++j) {
        const auto& term = cert.terms()[j];
        if (term && term->half_degree() > static_cast<int>(cert.t() - j))
            return {false, std::nullopt, "term j=" + std::to_string(j) + " exceeds half-degree t-j"};
    }
    for (unsigned s = 0; s <= cert.n(); ++s) {
        const Rational rs(static_cast<long>(s));
        if (evaluate_certificate(cert, rs) != q(rs))
            return {false, s, "certificate and target differ at s=" + std::to_string(s)};
    }
    return {true, std::nullopt, {}};
}

inline bool verify_certificate(const DecompositionCertificate& cert, const UnivariatePoly& q) {
    return verify_certificate_detailed(cert, q).ok;
}

namespace detail {

inline bool quadratic_nonnegative(const Rational& A, const Rational& B, const Rational& C) {
    if (A.is_zero()) return B.is_zero() && C.sign() >= 0;
    return A.sign() > 0 && C.sign() >= 0 && B * B <= Rational(4) * A * C;
}

/// Rational bracket [lo, hi] around √x with hi - lo ≤ width.
inline std::pair<Rational, Rational> sqrt_bracket(const Rational& x, const Rational& width) {
    Rational lo{0};
    Rational hi = x > Rational{1} ? x : Rational{1};
    const double guess = std::sqrt(x.to_double());
    if (std::isfinite(guess) && guess > 0) {
        // Start from a tight floating bracket when it is valid.
        const Rational g_lo = Rational(mpq_class(guess * (1 - 1e-12)));
        const Rational g_hi = Rational(mpq_class(guess * (1 + 1e-12)));
        if (g_lo * g_lo <= x && g_hi * g_hi >= x) {
            lo = g_lo;
            hi = g_hi;
        }
    }
    while (hi - lo > width) {
        const Rational mid = (lo + hi) / 2;
        if (mid * mid <= x) lo = mid;
        else hi = mid;
    }
    return {lo, hi};
}

}  // namespace detail

/// Searches λ ≥ 0 with q(s) - λ·s(n-s) nonnegative on the reals, for a
/// quadratic q. Writing q = As² + Bs + C, feasibility is
///     A + λ ≥ 0,  C ≥ 0,  (B - λn)² ≤ 4(A + λ)C,
/// whose boundary roots are λ = (Bn + 2C ± 2√(q(0)q(n))) / n². The smallest
/// feasible λ is returned when it is rational; otherwise a rational strictly
/// inside the feasible interval.
inline std::optional<Rational> find_lambda_deg2(const UnivariatePoly& q, unsigned n) {
    const Rational A = q.coeff(2), B = q.coeff(1), C = q.coeff(0);
    const Rational rn(static_cast<long>(n));
    auto feasible = [&](const Rational& lam) {
        return lam.sign() >= 0 && detail::quadratic_nonnegative(A + lam, B - lam * rn, C);
    };
    if (feasible(Rational{0})) return Rational{0};

    const Rational q0 = C, qn = q(rn);
    if (q0.sign() < 0 || qn.sign() < 0) return std::nullopt;
    const Rational centre = (B * rn + Rational(2) * C) / (rn * rn);
    const Rational scale = Rational(2) / (rn * rn);
    const Rational prod = q0 * qn;

    Rational root;
    if (exact_sqrt(prod, root)) {
        const Rational r1 = centre - scale * root, r2 = centre + scale * root;
        const Rational lo = std::max(r1, Rational{0});
        if (lo > r2) return std::nullopt;
        return feasible(lo) ? std::optional<Rational>(lo) : std::nullopt;
    }

    // Irrational endpoints, positive-length interval. Refine until a
    // rational strictly between max(r1, 0) and r2 is certified.
    Rational width{1, 1024};
    for (int iter = 0; iter < 256; ++iter, width /= 1024) {
        const auto [lo_s, hi_s] = detail::sqrt_bracket(prod, width);
        const Rational r1_hi = centre - scale * lo_s;
        const Rational r2_lo = centre + scale * lo_s;
        const Rational r2_hi = centre + scale * hi_s;
        if (r2_hi.sign() < 0) return std::nullopt;
        const Rational left = std::max(r1_hi, Rational{0});
        if (left < r2_lo) {
            const Rational lam = (left + r2_lo) / 2;
            if (feasible(lam)) return lam;
        }
    }
    throw InvariantError("lambda search failed to separate an irrational feasibility interval");
}

inline DecompositionCertificate certificate_from_lambda(const UnivariatePoly& q, unsigned n, const Rational& lambda) {
    const Rational rn(static_cast<long>(n));
    GramQuadratic rest{q.coeff(2) + lambda, q.coeff(1) - lambda * rn, q.coeff(0)};
    std::vector<std::optional<SOSWitness>> terms(2);
    if (!(rest.A.is_zero() && rest.B.is_zero() && rest.C.is_zero())) terms[0] = SOSWitness::from_gram(rest);
    if (!lambda.is_zero()) terms[1] = SOSWitness::from_gram({0, 0, lambda});
    return {n, 1, std::move(terms)};
}

/// Blekherman certificate with t = 1 for a quadratic q, if one exists.
inline std::optional<DecompositionCertificate> find_decomposition_deg2(const UnivariatePoly& q, unsigned n) {
    if (q.degree() > 2) throw DomainError("find_decomposition_deg2 needs degree(q) <= 2");
    if (n < 2) throw DomainError("the t = 1 form needs n >= 2");
    const auto lambda = find_lambda_deg2(q, n);
    if (!lambda) return std::nullopt;
    return certificate_from_lambda(q, n, *lambda);
}

/// Probability that b random disjoint pairs of a weight-s vector are all
/// mixed (one +1, one -1):
///     2^b · s(s-1)···(s-b+1) · (n-s)···(n-s-b+1) / (n(n-1)···(n-2b+1)).
inline Rational pr_all_pairs_mixed(unsigned n, unsigned s, unsigned b) {
    if (2 * b > n) throw DomainError("need 2b <= n");
    if (s > n) throw DomainError("need s <= n");
    if (s < b || n - s < b) return Rational{0};
    Integer num = Integer(1) << b;
    for (unsigned k = 0; k < b; ++k) num *= Integer(s - k) * Integer(n - s - k);
    Integer den = 1;
    for (unsigned k = 0; k < 2 * b; ++k) den *= Integer(n - k);
    return Rational(num, den);
}

inline constexpr unsigned kMaxPairEnumerationN = 10;

namespace detail {

/// Visits every ordered sequence of 2b distinct indices of [0, n).
template <class Visit>
void for_each_ordered_pairing(unsigned n, unsigned b, Visit&& visit) {
    std::vector<unsigned> chosen;
    chosen.reserve(2 * b);
    Monomial used = 0;
    auto rec = [&](auto&& self) -> void {
        if (chosen.size() == 2 * b) {
            visit(std::span<const unsigned>(chosen));
            return;
        }
        for (unsigned i = 0; i < n; ++i) {
            const Monomial bit = Monomial{1} << i;
            if (used & bit) continue;
            used |= bit;
            chosen.push_back(i);
            self(self);
            chosen.pop_back();
            used &= ~bit;
        }
    };
    rec(rec);
}

}  // namespace detail

/// Enumeration oracle for pr_all_pairs_mixed against the vector whose first
/// s entries are -1.
inline Rational pr_all_pairs_mixed_bruteforce(unsigned n, unsigned s, unsigned b) {
    if (2 * b > n) throw DomainError("need 2b <= n");
    if (s > n) throw DomainError("need s <= n");
    if (n > kMaxPairEnumerationN) throw BudgetError("pair enumeration limited to n <= 10");
    std::uint64_t good = 0, total = 0;
    detail::for_each_ordered_pairing(n, b, [&](std::span<const unsigned> idx) {
        ++total;
        bool all_mixed = true;
        for (unsigned k = 0; k < b && all_mixed; ++k) all_mixed = (idx[2 * k] < s) != (idx[2 * k + 1] < s);
        good += all_mixed;
    });
    return Rational(Integer(static_cast<unsigned long>(good)), Integer(static_cast<unsigned long>(total)));
}

/// symmetrize(basis_poly²), checked to vanish for s < b and s > n - b and to
/// be nonnegative at every integer weight.
inline UnivariatePoly symmetrize_basis_square(unsigned n, std::span<const IndexPair> pairs,
                                              std::span<const Rational> alpha) {
    const auto p = basis_poly(n, pairs, alpha);
    auto q = symmetrize(p * p);
    const auto b = static_cast<unsigned>(pairs.size());
    for (unsigned s = 0; s <= n; ++s) {
        const auto v = q(Rational(static_cast<long>(s)));
        if ((s < b || s > n - b) && !v.is_zero())
            throw InvariantError("symmetrized basis square does not vanish at s=" + std::to_string(s));
        if (v.sign() < 0) throw InvariantError("symmetrized basis square negative at s=" + std::to_string(s));
    }
    return q;
}

struct ProjectorCheck {
    Rational c;
    bool ok = false;
    std::size_t dimension = 0;  // number of monomials materialized
    std::size_t vectors = 0;    // number of outer products summed
};

inline constexpr unsigned kMaxProjectorN = 8;

/// Tests ρ² = cρ for ρ = Σ p pᵀ over the coefficient vectors of `polys`,
/// with c = tr(ρ²)/tr(ρ). Rows and columns are materialized for every
/// monomial of degree ≤ max degree(p).
inline ProjectorCheck outer_product_proportionality(std::span<const MultilinearPoly> polys) {
    ProjectorCheck out;
    out.vectors = polys.size();
    int degree = -1;
    for (const auto& p : polys) degree = std::max(degree, p.degree());
    if (degree < 0) {
        out.ok = true;  // ρ = 0
        return out;
    }
    const unsigned n = polys.front().n();

    std::vector<Monomial> basis;
    for (Monomial m = 0; m < (Monomial{1} << n); ++m)
        if (std::popcount(m) <= degree) basis.push_back(m);
    const std::size_t dim = basis.size();
    out.dimension = dim;
    auto index_of = [&](Monomial m) {
        return static_cast<std::size_t>(std::lower_bound(basis.begin(), basis.end(), m) - basis.begin());
    };

    std::vector<Rational> rho(dim * dim);
    for (const auto& p : polys) {
        if (p.n() != n) throw DimensionError("polynomials over different numbers of variables");
        std::vector<std::pair<std::size_t, Rational>> v;
        for (const auto& [m, c] : p.terms()) v.emplace_back(index_of(m), c);
        for (const auto& [i, ci] : v)
            for (const auto& [j, cj] : v) rho[i * dim + j] += ci * cj;
    }

    std::vector<Rational> rho2(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k) {
            const auto& a = rho[i * dim + k];
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < dim; ++j)
                if (!rho[k * dim + j].is_zero()) rho2[i * dim + j] += a * rho[k * dim + j];
        }

    Rational tr{0}, tr2{0};
    for (std::size_t i = 0; i < dim; ++i) {
        tr += rho[i * dim + i];
        tr2 += rho2[i * dim + i];
    }
    if (tr.is_zero()) throw InvariantError("nonzero sum of outer products with zero trace");
    out.c = tr2 / tr;
    out.ok = true;
    for (std::size_t i = 0; i < dim * dim && out.ok; ++i) out.ok = rho2[i] == out.c * rho[i];
    if (!out.ok) out.c = Rational{0};
    return out;
}

/// ρ summed over basis_poly for every ordered tuple of disjoint ordered
/// pairs. Each such sum spans one irreducible subspace, so ρ must be a
/// multiple of the projector onto it.
inline ProjectorCheck projector_proportionality_check(unsigned n, unsigned b, std::span<const Rational> alpha) {
    if (n > kMaxProjectorN) throw BudgetError("projector check limited to n <= 8");
    if (2 * b > n) throw DomainError("need 2b <= n");
    if (alpha.size() != n - 2 * b + 1) throw DomainError("alpha must have n - 2b + 1 entries");

    std::vector<MultilinearPoly> polys;
    detail::for_each_ordered_pairing(n, b, [&](std::span<const unsigned> idx) {
        std::vector<IndexPair> pairs;
        for (unsigned k = 0; k < b; ++k) pairs.emplace_back(idx[2 * k] + 1, idx[2 * k + 1] + 1);
        polys.push_back(basis_poly(n, pairs, alpha));
    });
    return outer_product_proportionality(polys);
}

}  // namespace qerr
