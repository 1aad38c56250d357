#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <sstream>
#include <string>

#include "urntubes/error.hpp"

namespace urntubes {

using BigInt = boost::multiprecision::cpp_int;

/// Exact fraction over arbitrary-precision integers. Canonical form is
/// maintained after every operation: positive denominator, gcd(|num|, den) = 1.
/// This is the only number type in the core; floating point appears only in
/// display annotations.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(int n) : value_(n) {}
    Rational(long long n) : value_(n) {}
    Rational(const BigInt& n) : value_(n) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) {
            throw DomainError("rational: zero denominator");
        }
        value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den)
                         : boost::multiprecision::cpp_rational(num, den);
    }

    BigInt num() const { return boost::multiprecision::numerator(value_); }
    BigInt den() const { return boost::multiprecision::denominator(value_); }

    bool is_zero() const { return value_ == 0; }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.value_ == 0) throw DomainError("rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(0) - a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    /// Display-only approximation; never feeds back into computation.
    double approx() const { return value_.convert_to<double>(); }

    /// "num/den", or just "num" for integers.
    std::string str() const {
        std::ostringstream os;
        os << num();
        if (den() != 1) os << '/' << den();
        return os.str();
    }

    /// Decimal approximation rounded to `digits` significant digits,
    /// for display only.
    std::string decimal(int digits = 12) const {
        std::ostringstream os;
        os.precision(digits);
        os << approx();
        return os.str();
    }

private:
    boost::multiprecision::cpp_rational value_;
};

inline Rational pow(const Rational& base, long long e) {
    if (e < 0) {
        if (base.is_zero()) throw DomainError("rational pow: zero to a negative power");
        return Rational(1) / pow(base, -e);
    }
    Rational r(1);
    for (long long i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace urntubes
