#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "qerr/rational.hpp"

namespace qerr {

/// Exact polynomial in one variable s; coeffs()[k] multiplies s^k.
class UnivariatePoly {
public:
    UnivariatePoly() = default;
    UnivariatePoly(std::initializer_list<Rational> c) : c_(c) { trim(); }
    explicit UnivariatePoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

    static UnivariatePoly constant(const Rational& c) { return UnivariatePoly({c}); }
    /// The monomial s.
    static UnivariatePoly s() { return UnivariatePoly({0, 1}); }

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational{0}; }

    Rational operator()(const Rational& x) const {
        Rational acc{0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UnivariatePoly& operator+=(const UnivariatePoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
        trim();
        return *this;
    }
    UnivariatePoly& operator-=(const UnivariatePoly& o) { return *this += o * Rational{-1}; }
    UnivariatePoly& operator*=(const Rational& s) {
        for (auto& c : c_) c *= s;
        trim();
        return *this;
    }

    friend UnivariatePoly operator+(UnivariatePoly a, const UnivariatePoly& b) { return a += b; }
    friend UnivariatePoly operator-(UnivariatePoly a, const UnivariatePoly& b) { return a -= b; }
    friend UnivariatePoly operator*(UnivariatePoly a, const Rational& s) { return a *= s; }
    friend UnivariatePoly operator*(const Rational& s, UnivariatePoly a) { return a *= s; }
    friend UnivariatePoly operator*(const UnivariatePoly& a, const UnivariatePoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        return UnivariatePoly(std::move(out));
    }

    friend bool operator==(const UnivariatePoly&, const UnivariatePoly&) = default;

    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += c_[k].str();
            if (k >= 1) out += "*s";
            if (k >= 2) out += "^" + std::to_string(k);
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// The unique polynomial of degree < values.size() with p(k) = values[k],
/// built from forward differences: p(s) = Σ_k Δ^k p(0) · C(s, k).
inline UnivariatePoly interpolate_at_naturals(std::span<const Rational> values) {
    std::vector<Rational> diff(values.begin(), values.end());
    UnivariatePoly out;
    UnivariatePoly falling = UnivariatePoly::constant(1);  // s(s-1)...(s-k+1)
    Integer k_fact = 1;
    for (std::size_t k = 0; k < diff.size(); ++k) {
        if (k > 0) {
            k_fact *= static_cast<unsigned long>(k);
            falling = falling * UnivariatePoly({-Rational(static_cast<long>(k - 1)), 1});
        }
        out += falling * (diff[0] / Rational(k_fact));
        for (std::size_t i = 0; i + 1 < diff.size() - k; ++i) diff[i] = diff[i + 1] - diff[i];
    }
    return out;
}

}  // namespace qerr
