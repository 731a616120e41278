#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "diophant/errors.hpp"

namespace diophant {

// Exact reduced fraction. Invariants: gcd(|num|, den) = 1, den >= 1, sign on
// the numerator, zero is 0/1. mpq_class keeps exactly this canonical form.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}                      // NOLINT: implicit from integers is wanted
    Rational(const mpz_class& n) : v_(n) {}          // NOLINT
    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational abs() const { return v_ < 0 ? -*this : *this; }
    Rational reciprocal() const {
        if (is_zero()) throw std::domain_error("Rational: reciprocal of zero");
        return Rational(mpq_class(1) / v_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational: division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    // Bit length of the reduced denominator.
    std::size_t den_bits() const { return mpz_sizeinbase(v_.get_den().get_mpz_t(), 2); }

    double to_double() const { return v_.get_d(); }

    // "p/q", or plain "p" for integers.
    std::string str() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    // Accepts "p", "p/q", and decimal literals like "-12.75".
    static std::optional<Rational> parse(std::string_view text);

private:
    mpq_class v_;
};

inline std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::string s(text);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0) return std::nullopt;
        if (den.set_str(s.substr(slash + 1), 10) != 0) return std::nullopt;
        if (den == 0) return std::nullopt;
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpz_class num;
        if (num.set_str(s, 10) != 0) return std::nullopt;
        return Rational(num);
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
    mpz_class num;
    if (num.set_str(digits, 10) != 0) return std::nullopt;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
    return Rational(num, den);
}

// Canonicalizing constructor exposed as a free function; the name mirrors
// library-wide usage in tests and the CLI.
inline Rational make_rational(const mpz_class& num, const mpz_class& den) { return Rational(num, den); }
inline Rational make_rational(long num, long den) { return Rational(num, den); }

} // namespace diophant
