#pragma once

// Exact rational numbers backed by GMP.
//
// Every value is kept canonical: lowest terms, positive denominator. The
// wrapper exists so the rest of the library never touches mpq_t directly and
// so that parsing/printing follows one convention ("p/q" or "p").

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "qerr/errors.hpp"

namespace qerr {

using Integer = mpz_class;

class Rational {
public:
    Rational() = default;
    Rational(int v) : q_(v) {}  // NOLINT: implicit on purpose, mirrors int literals
    Rational(long v) : q_(v) {}
    Rational(long long v) : q_(Integer(std::to_string(v))) {}
    Rational(unsigned v) : q_(v) {}
    Rational(unsigned long v) : q_(v) {}
    Rational(const Integer& v) : q_(v) {}
    Rational(const Integer& num, const Integer& den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Parses "p", "-p", "p/q". Whitespace is not accepted.
    static Rational parse(std::string_view text) {
        auto bad = [&] { return DomainError("malformed rational '" + std::string(text) + "'"); };
        if (text.empty()) throw bad();
        auto valid_int = [](std::string_view s, bool allow_sign) {
            std::size_t i = 0;
            if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) ++i;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (s[i] < '0' || s[i] > '9') return false;
            return true;
        };
        auto strip_plus = [](std::string_view s) {
            return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
        };
        const auto slash = text.find('/');
        if (slash == std::string_view::npos) {
            if (!valid_int(text, true)) throw bad();
            return Rational(Integer(strip_plus(text)));
        }
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!valid_int(num, true) || !valid_int(den, false)) throw bad();
        Integer d(std::string{den});
        if (d == 0) throw bad();
        return Rational(Integer(strip_plus(num)), d);
    }

    Integer numerator() const { return q_.get_num(); }
    Integer denominator() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    double to_double() const { return q_.get_d(); }

    /// "p" for integers, "p/q" otherwise.
    std::string str() const {
        if (is_integer()) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    /// Decimal rendering with `places` digits after the point, rounded to
    /// nearest with ties away from zero.
    std::string decimal(unsigned places = 12) const {
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
        Integer num = abs(q_.get_num()) * scale;
        const Integer& den = q_.get_den();
        Integer quot, rem;
        mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (2 * rem >= den) quot += 1;
        std::string digits = quot.get_str();
        if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
        std::string out;
        if (sign() < 0 && quot != 0) out.push_back('-');
        out += digits.substr(0, digits.size() - places);
        if (places > 0) {
            out.push_back('.');
            out += digits.substr(digits.size() - places);
        }
        return out;
    }

    Integer floor() const {
        Integer r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    Integer ceil() const {
        Integer r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw DomainError("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational pow(Rational base, unsigned exp) {
    Rational out{1};
    while (exp) {
        if (exp & 1U) out *= base;
        base *= base;
        exp >>= 1U;
    }
    return out;
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

/// Exact square root if `r` is the square of a rational.
inline bool exact_sqrt(const Rational& r, Rational& out) {
    if (r.sign() < 0) return false;
    const Integer num = r.numerator(), den = r.denominator();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return false;
    Integer a, b;
    mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
    out = Rational(a, b);
    return true;
}

}  // namespace qerr

template <>
struct std::hash<qerr::Rational> {
    std::size_t operator()(const qerr::Rational& r) const { return std::hash<std::string>{}(r.str()); }
};
