#pragma once

// Lower bound for AND_n: closed forms, the optimal constrained quadratic,
// exact feasibility checks, and two independent falsification oracles.
//
// Restricted to inputs of weight 0, n-1 and n, the acceptance probability of
// any one-query algorithm symmetrizes to
//
//     p(s) = Σ_i (a_i s + b_i)² + (n - s)s Σ_j c_j²,
//
// which is represented here by a Witness: the total quadratic As² + Bs + C
// together with λ = Σ c_j². The SOS part p(s) - λ·s(n-s) must be
// nonnegative on the reals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qerr/blekherman.hpp"
#include "qerr/errors.hpp"
#include "qerr/query_sim.hpp"
#include "qerr/rational.hpp"
#include "qerr/univariate.hpp"

namespace qerr {

struct Witness {
    Rational A, B, C;
    Rational lambda;

    UnivariatePoly polynomial() const { return UnivariatePoly({C, B, A}); }
    Rational operator()(const Rational& s) const { return (A * s + B) * s + C; }
    friend bool operator==(const Witness&, const Witness&) = default;
};

/// Constraint set 0 ≤ p(0) ≤ ε, 0 ≤ p(n-1) ≤ ε, 1-ε ≤ p(n) ≤ 1.
class FeasibilityInstance {
public:
    FeasibilityInstance(unsigned n, Rational epsilon) : n_(n), epsilon_(std::move(epsilon)) {
        if (n < 2) throw DomainError("feasibility instance needs n >= 2");
        if (epsilon_.sign() < 0 || epsilon_ > Rational(1, 2)) throw DomainError("epsilon must lie in [0, 1/2]");
    }
    unsigned n() const { return n_; }
    const Rational& epsilon() const { return epsilon_; }

private:
    unsigned n_;
    Rational epsilon_;
};

/// 1/2 - n/(n²+1).
inline Rational theoretical_lower_bound(unsigned n) { return theoretical_err(n); }

/// Best error of a degree-1 polynomial: 1/2 - 1/(4n-2).
inline Rational line_case_bound(unsigned n) {
    if (n < 2) throw DomainError("line case needs n >= 2");
    return Rational(1, 2) - Rational(1, 4L * n - 2);
}

/// Convex parabola with vertex at s ≤ 0: ε ≥ (n-1)² / (n² + (n-1)²).
inline Rational case_a_bound(unsigned n) {
    if (n < 2) throw DomainError("case a needs n >= 2");
    const Rational rn(static_cast<long>(n));
    const Rational m = rn - 1;
    return m * m / (rn * rn + m * m);
}

/// p(s) = a(s - (n-1)/2)² with a = 2/(n²+1); attains ε = 1/2 - n/(n²+1).
inline Witness optimal_witness(unsigned n) {
    if (n < 2) throw DomainError("optimal witness needs n >= 2");
    const Rational rn(static_cast<long>(n));
    const Rational a = Rational(2) / (rn * rn + 1);
    const Rational h = (rn - 1) / 2;
    return {a, -Rational(2) * a * h, a * h * h, Rational{0}};
}

/// λ ≥ 0 and p(s) - λ·s(n-s) nonnegative on the reals.
inline bool structurally_nonnegative(const Witness& w, unsigned n) {
    const Rational rn(static_cast<long>(n));
    return w.lambda.sign() >= 0 && detail::quadratic_nonnegative(w.A + w.lambda, w.B - w.lambda * rn, w.C);
}

inline bool check_feasible(const Witness& w, const FeasibilityInstance& inst) {
    if (!structurally_nonnegative(w, inst.n())) return false;
    const Rational& eps = inst.epsilon();
    const Rational rn(static_cast<long>(inst.n()));
    const Rational p0 = w(Rational{0}), pm = w(rn - 1), pn = w(rn);
    auto within = [](const Rational& v, const Rational& lo, const Rational& hi) { return lo <= v && v <= hi; };
    return within(p0, 0, eps) && within(pm, 0, eps) && within(pn, Rational{1} - eps, 1);
}

inline constexpr unsigned kMaxFalsifyN = 8;
inline constexpr unsigned kMaxGridResolution = 1000;

/// Deterministic grid search over
///     A = -2 + 4a/R,  B = -2n + 4n·b/R,  C = c/R,  λ = 2l/R,   a,b,c,l ∈ [0, R],
/// returning the first feasible point in lexicographic (a, b, c, l) order.
///
/// For fixed (A, B) the three interval constraints are linear in C, so the
/// admissible c form a range computed exactly. For fixed (A, B, C) the
/// admissible λ form an interval around the vertex (Bn + 2C)/n² of
/// (B - λn)² - 4(A + λ)C, so a grid λ exists iff one of the two grid points
/// next to the vertex (clamped to [0, 2]) is admissible.
inline std::optional<Witness> grid_falsify(unsigned n, const Rational& epsilon, unsigned resolution,
                                           bool unsafe_budget = false) {
    const FeasibilityInstance inst(n, epsilon);
    if (resolution == 0) throw DomainError("resolution must be positive");
    if (!unsafe_budget && (n > kMaxFalsifyN || resolution > kMaxGridResolution))
        throw BudgetError("grid falsification limited to n <= 8 and resolution <= 1000");

    const Rational R(static_cast<long>(resolution));
    const Rational rn(static_cast<long>(n));
    const Rational m = rn - 1;
    const Rational one{1};
    const long res = static_cast<long>(resolution);

    auto grid_A = [&](long a) { return Rational(-2) + Rational(4 * a, res); };
    auto grid_B = [&](long b) { return -Rational(2) * rn + Rational(4) * rn * Rational(b, res); };
    auto grid_lambda = [&](long l) { return Rational(2 * l, res); };

    for (long a = 0; a <= res; ++a) {
        const Rational A = grid_A(a);
        for (long b = 0; b <= res; ++b) {
            const Rational B = grid_B(b);
            const Rational u = (A * m + B) * m;     // p(n-1) - C
            const Rational v = (A * rn + B) * rn;   // p(n) - C
            const Rational lo = std::max({Rational{0}, -u, one - epsilon - v});
            const Rational hi = std::min({epsilon, epsilon - u, one - v});
            if (lo > hi) continue;
            const long c_lo = std::max(0L, (lo * R).ceil().get_si());
            const long c_hi = std::min(res, (hi * R).floor().get_si());
            for (long c = c_lo; c <= c_hi; ++c) {
                Witness w{A, B, Rational(c, res), Rational{0}};
                auto admissible = [&](long l) {
                    w.lambda = grid_lambda(l);
                    return structurally_nonnegative(w, n);
                };
                const Rational vertex_index = (B * rn + Rational(2) * w.C) / (rn * rn) * R / 2;
                const long l1 = std::clamp(vertex_index.floor().get_si(), 0L, res);
                const long l2 = std::clamp(vertex_index.ceil().get_si(), 0L, res);
                long found = -1;
                if (admissible(l1)) found = l1;
                else if (admissible(l2)) found = l2;
                if (found < 0) continue;
                long left = 0, right = found;  // smallest admissible l in [0, found]
                while (left < right) {
                    const long mid = left + (right - left) / 2;
                    if (admissible(mid)) right = mid;
                    else left = mid + 1;
                }
                w.lambda = grid_lambda(right);
                if (!check_feasible(w, inst)) throw InvariantError("grid search produced an infeasible witness");
                return w;
            }
        }
    }
    return std::nullopt;
}

inline constexpr unsigned kMaxSearchN = 8;

struct SearchOptions {
    /// Rank of the measurement operator M = clip(GᵀG). Rank one already
    /// contains an optimal algorithm: the coin of the EQUALITY algorithm is a
    /// scaled rank-one projector.
    unsigned rank = 1;
    /// Inverse temperatures of the log-sum-exp surrogate of the worst case.
    std::vector<double> betas{30.0, 300.0, 3e3, 3e4, 3e5, 3e6};
    std::size_t max_iterations_per_stage = 4000;
    double initial_step = 0.3;
};

struct SearchResult {
    double best_error = std::numeric_limits<double>::infinity();
    std::vector<double> psi;  // amplitudes over |0>, |1>, ..., |n+1>
    std::vector<double> measurement;  // row-major (n+2)x(n+2) operator M
};

namespace detail {

/// Worst-case error of the one-query EQUALITY_{n+1} algorithm with real
/// start state ψ on |0>..|n+1> and acceptance operator M (0 ⪯ M ⪯ I):
/// acceptance(x) = φ_xᵀ M φ_x, φ_x = O_x ψ.
class OneQueryModel {
public:
    OneQueryModel(unsigned n, unsigned rank) : n_(n), dim_(n + 2), rank_(rank) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n + 1)); ++mask) {
            const bool equal = mask == 0 || mask == (std::uint64_t{1} << (n + 1)) - 1;
            inputs_.push_back({mask, equal});
        }
    }

    std::size_t parameter_count() const { return dim_ + rank_ * dim_; }

    /// Per-input errors at the parameter point `x`; false if ψ = 0.
    bool errors(const double* x, std::vector<double>& out, SearchResult* export_to = nullptr) const {
        Eigen::VectorXd psi = Eigen::Map<const Eigen::VectorXd>(x, dim_);
        const double norm = psi.norm();
        if (!(norm > 1e-12)) return false;
        psi /= norm;
        Eigen::MatrixXd G = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            x + dim_, rank_, dim_);

        // Clip the spectrum of GᵀG into [0, 1]; keep only its range.
        std::vector<double> weights;
        std::vector<Eigen::VectorXd> dirs;
        if (rank_ == 1) {
            const Eigen::VectorXd g = G.row(0).transpose();
            const double gg = g.squaredNorm();
            if (gg > 0) {
                weights.push_back(std::min(1.0, gg));
                dirs.push_back(g / std::sqrt(gg));
            }
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G.transpose() * G);
            for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
                const double mu = eig.eigenvalues()[k];
                if (mu <= 0) continue;
                weights.push_back(std::min(1.0, mu));
                dirs.push_back(eig.eigenvectors().col(k));
            }
        }
        std::vector<Eigen::VectorXd> w;  // direction ∘ ψ
        for (const auto& d : dirs) w.push_back(d.cwiseProduct(psi));

        out.resize(inputs_.size());
        for (std::size_t k = 0; k < inputs_.size(); ++k) {
            const auto [mask, equal] = inputs_[k];
            double acc = 0;
            for (std::size_t r = 0; r < w.size(); ++r) {
                double amp = w[r][0];
                for (unsigned i = 0; i <= n_; ++i) amp += (mask >> i) & 1U ? -w[r][i + 1] : w[r][i + 1];
                acc += weights[r] * amp * amp;
            }
            out[k] = equal ? 1.0 - acc : acc;
        }

        if (export_to) {
            export_to->psi.assign(psi.data(), psi.data() + dim_);
            Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim_, dim_);
            for (std::size_t r = 0; r < dirs.size(); ++r) M += weights[r] * dirs[r] * dirs[r].transpose();
            export_to->measurement.resize(dim_ * dim_);
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) export_to->measurement[i * dim_ + j] = M(i, j);
        }
        return true;
    }

    double worst(const double* x) const {
        std::vector<double> e;
        if (!errors(x, e)) return 1.0;
        return *std::max_element(e.begin(), e.end());
    }

    double smoothed(const double* x, double beta) const {
        std::vector<double> e;
        if (!errors(x, e)) return 1.0;
        const double top = *std::max_element(e.begin(), e.end());
        double sum = 0;
        for (double v : e) sum += std::exp(beta * (v - top));
        return top + std::log(sum) / beta;
    }

private:
    struct Input {
        std::uint64_t mask;
        bool equal;
    };
    unsigned n_;
    std::size_t dim_;
    unsigned rank_;
    std::vector<Input> inputs_;
};

struct StageContext {
    const OneQueryModel* model;
    double beta;
};

inline double stage_objective(const gsl_vector* v, void* params) {
    const auto* ctx = static_cast<const StageContext*>(params);
    return ctx->model->smoothed(v->data, ctx->beta);
}

/// One Nelder–Mead run (GSL nmsimplex2) on the surrogate at inverse temperature beta.
inline void nelder_mead_stage(const OneQueryModel& model, double beta, double step, std::size_t max_iter,
                              std::vector<double>& x) {
    const std::size_t dim = x.size();
    StageContext ctx{&model, beta};
    gsl_multimin_function fn{&stage_objective, dim, &ctx};

    gsl_vector* start = gsl_vector_alloc(dim);
    gsl_vector* steps = gsl_vector_alloc(dim);
    for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(start, i, x[i]);
    gsl_vector_set_all(steps, step);
    gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
    gsl_multimin_fminimizer_set(solver, &fn, start, steps);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-10) == GSL_SUCCESS) break;
    }
    for (std::size_t i = 0; i < dim; ++i) x[i] = gsl_vector_get(solver->x, i);

    gsl_multimin_fminimizer_free(solver);
    gsl_vector_free(steps);
    gsl_vector_free(start);
}

}  // namespace detail

/// Minimizes the worst-case error over the one-query model by derivative-free
/// search: seeded random restarts, each annealing a log-sum-exp surrogate of
/// the worst case through `options.betas` with Nelder–Mead. The surrogate
/// overestimates the max by at most (n+1)·ln2/β; the returned value is the
/// true worst case at the best point found.
inline SearchResult numeric_min_error_search_detailed(unsigned n, unsigned restarts, std::uint64_t seed,
                                                      const SearchOptions& options = {},
                                                      bool unsafe_budget = false) {
    if (n < 1) throw DomainError("search needs n >= 1");
    if (restarts == 0) throw DomainError("restarts must be positive");
    if (options.rank == 0) throw DomainError("measurement rank must be positive");
    if (!unsafe_budget && n > kMaxSearchN) throw BudgetError("numeric search limited to n <= 8");

    gsl_error_handler_t* previous = gsl_set_error_handler_off();
    const detail::OneQueryModel model(n, options.rank);
    std::mt19937_64 gen(seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

    SearchResult best;
    std::vector<double> x(model.parameter_count());
    std::vector<double> best_x;
    for (unsigned r = 0; r < restarts; ++r) {
        for (auto& v : x) v = uniform();
        double step = options.initial_step;
        for (double beta : options.betas) {
            detail::nelder_mead_stage(model, beta, step, options.max_iterations_per_stage, x);
            step = std::max(step * 0.3, 1e-4);
            const double value = model.worst(x.data());
            if (value < best.best_error) {
                best.best_error = value;
                best_x = x;
            }
        }
    }
    gsl_set_error_handler(previous);

    std::vector<double> scratch;
    model.errors(best_x.data(), scratch, &best);
    return best;
}

inline double numeric_min_error_search(unsigned n, unsigned restarts, std::uint64_t seed) {
    return numeric_min_error_search_detailed(n, restarts, seed).best_error;
}

}  // namespace qerr
