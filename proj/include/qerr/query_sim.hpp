#pragma once

// The single-query EQUALITY algorithm and its AND reduction.
//
// The algorithm works in the (n+1)-dimensional query space |1>..|n+1>:
//
//   1. start in the uniform superposition,
//   2. query: |i> -> (-1)^{x_i} |i>,
//   3. apply F|i> = (1/√(n+1)) Σ_j ω^{(i-1)(j-1)} |j>, ω = e^{2πi/(n+1)},
//   4. measure; on |1> output 1 with probability 1/2 + n/(n²+1), else output 0.
//
// Only the query register is simulated. The general model's output and
// workspace registers carry no information here: the post-measurement coin
// is classical, so its effect is folded exactly into the outcome
// distribution instead of being simulated.
//
// The |1> amplitude after step 3 is the zero-frequency component,
// sign_sum(x)/(n+1) with sign_sum(x) = Σ (-1)^{x_i}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qerr/errors.hpp"
#include "qerr/rational.hpp"

namespace qerr {

/// A 0/1 input string x_1..x_len.
class BitInput {
public:
    explicit BitInput(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        if (bits_.empty()) throw DomainError("bit input must be nonempty");
        for (auto b : bits_)
            if (b > 1) throw DomainError("bits must be 0 or 1");
    }

    static BitInput parse(std::string_view text) {
        std::vector<std::uint8_t> bits;
        for (char ch : text) {
            if (ch != '0' && ch != '1') throw DomainError("malformed bit string '" + std::string(text) + "'");
            bits.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
        return BitInput(std::move(bits));
    }

    /// Bit i of `mask` becomes x_{i+1}.
    static BitInput from_mask(std::uint64_t mask, unsigned length) {
        std::vector<std::uint8_t> bits(length);
        for (unsigned i = 0; i < length; ++i) bits[i] = (mask >> i) & 1U;
        return BitInput(std::move(bits));
    }

    unsigned length() const { return static_cast<unsigned>(bits_.size()); }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    int sign_sum() const {
        int s = 0;
        for (auto b : bits_) s += b ? -1 : 1;
        return s;
    }

    bool all_equal() const {
        for (auto b : bits_)
            if (b != bits_.front()) return false;
        return true;
    }
    bool all_ones() const { return all_equal() && bits_.front() == 1; }

    BitInput appended(std::uint8_t bit) const {
        auto b = bits_;
        b.push_back(bit);
        return BitInput(std::move(b));
    }

    std::string str() const {
        std::string s;
        for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
        return s;
    }

private:
    std::vector<std::uint8_t> bits_;
};

struct OutcomeDistribution {
    Rational p_output1;
    Rational p_output0;
};

struct StateVector {
    std::vector<std::complex<double>> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
    double norm_squared() const {
        double t = 0;
        for (const auto& a : amplitudes) t += std::norm(a);
        return t;
    }
};

/// err(AND_n) = err(EQUALITY_{n+1}) = 1/2 - n/(n²+1).
inline Rational theoretical_err(unsigned n) {
    if (n == 0) throw DomainError("n must be positive");
    const Rational rn(static_cast<long>(n));
    return Rational(1, 2) - rn / (rn * rn + 1);
}

/// Classical one-query errors: {errc(EQUALITY_n), errc(AND_n)} = {1/2, 1/2 - 1/(4n-2)}.
inline std::pair<Rational, Rational> classical_reference(unsigned n) {
    if (n == 0) throw DomainError("n must be positive");
    return {Rational(1, 2), Rational(1, 2) - Rational(1, 4L * n - 2)};
}

/// Probability that the coin outputs 1 after |1> is measured.
inline Rational coin_bias(unsigned n) {
    const Rational rn(static_cast<long>(n));
    return Rational(1, 2) + rn / (rn * rn + 1);
}

/// Probability of output 1 on an EQUALITY_{n+1} input of length n+1.
inline Rational eq_accept_probability(const BitInput& x) {
    if (x.length() < 2) throw DomainError("EQUALITY input needs length >= 2");
    const unsigned n = x.length() - 1;
    const Rational amp(static_cast<long>(x.sign_sum()), static_cast<long>(n + 1));
    return amp * amp * coin_bias(n);
}

inline OutcomeDistribution eq_distribution(const BitInput& x) {
    auto p1 = eq_accept_probability(x);
    return {p1, Rational{1} - p1};
}

inline Rational eq_error_probability(const BitInput& x) {
    const auto p1 = eq_accept_probability(x);
    return x.all_equal() ? Rational{1} - p1 : p1;
}

inline constexpr unsigned kMaxExhaustiveLength = 26;

struct WorstCase {
    Rational error;
    std::vector<BitInput> maximizers;
};

/// Exhaustive worst case over all 2^len EQUALITY inputs.
inline WorstCase worst_case_eq(unsigned len) {
    if (len < 2) throw DomainError("EQUALITY input needs length >= 2");
    if (len > kMaxExhaustiveLength) throw BudgetError("exhaustive sweep over 2^" + std::to_string(len) + " inputs");
    WorstCase out{Rational{-1}, {}};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
        const auto x = BitInput::from_mask(mask, len);
        const auto e = eq_error_probability(x);
        if (e > out.error) {
            out.error = e;
            out.maximizers.clear();
        }
        if (e == out.error) out.maximizers.push_back(x);
    }
    return out;
}

inline Rational worst_case_error_eq(unsigned len) { return worst_case_eq(len).error; }

/// AND_n(x) = EQUALITY_{n+1}(x, 1).
inline Rational and_accept_probability(const BitInput& x) { return eq_accept_probability(x.appended(1)); }

inline Rational and_error_probability(const BitInput& x) {
    const auto p1 = and_accept_probability(x);
    return x.all_ones() ? Rational{1} - p1 : p1;
}

/// Exhaustive worst case of the reduced algorithm over all 2^n AND inputs.
inline WorstCase worst_case_and(unsigned n) {
    if (n < 1) throw DomainError("AND needs n >= 1");
    if (n > kMaxExhaustiveLength) throw BudgetError("exhaustive sweep over 2^" + std::to_string(n) + " inputs");
    WorstCase out{Rational{-1}, {}};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto x = BitInput::from_mask(mask, n);
        const auto e = and_error_probability(x);
        if (e > out.error) {
            out.error = e;
            out.maximizers.clear();
        }
        if (e == out.error) out.maximizers.push_back(x);
    }
    return out;
}

/// Floating-point state after the query and the Fourier transform.
/// amplitudes[k] is the amplitude of |k+1>.
inline StateVector simulate_state(const BitInput& x) {
    if (x.length() < 2) throw DomainError("EQUALITY input needs length >= 2");
    const std::size_t dim = x.length();
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dim));

    std::vector<std::complex<double>> after_query(dim);
    for (std::size_t i = 0; i < dim; ++i) after_query[i] = x.bits()[i] ? -inv_sqrt : inv_sqrt;

    StateVector out{std::vector<std::complex<double>>(dim)};
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            // (i*j) mod dim keeps the phase argument small
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((i * j) % dim) / static_cast<double>(dim);
            out.amplitudes[j] += after_query[i] * std::polar(inv_sqrt, angle);
        }
    }
    return out;
}

/// Probability of measuring |1> in the simulated state.
inline double simulated_first_state_probability(const BitInput& x) {
    return std::norm(simulate_state(x).amplitudes.front());
}

/// Exact probability of measuring |1>: (sign_sum/(n+1))².
inline Rational exact_first_state_probability(const BitInput& x) {
    const Rational amp(static_cast<long>(x.sign_sum()), static_cast<long>(x.length()));
    return amp * amp;
}

struct SampleCounts {
    std::uint64_t output1 = 0;
    std::uint64_t output0 = 0;
};

/// Draws `shots` outcomes with the given probability of output 1. Each draw
/// is a 53-bit dyadic u in [0,1) from a seeded mt19937_64, and the outcome is
/// 1 iff u < p, compared exactly.
inline SampleCounts sample_bernoulli(const Rational& p_output1, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw DomainError("shots must be positive");
    std::mt19937_64 gen(seed);
    const Integer two53 = Integer(1) << 53;
    SampleCounts counts;
    for (std::uint64_t k = 0; k < shots; ++k) {
        const Integer draw(static_cast<unsigned long>(gen() >> 11));
        if (Rational(draw, two53) < p_output1) ++counts.output1;
        else ++counts.output0;
    }
    return counts;
}

/// Seeded samples of the EQUALITY algorithm's output on x.
inline SampleCounts sample(const BitInput& x, std::uint64_t shots, std::uint64_t seed) {
    return sample_bernoulli(eq_accept_probability(x), shots, seed);
}

}  // namespace qerr
