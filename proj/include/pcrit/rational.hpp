// Exact scalar arithmetic.
//
// Everything topological in this library is computed over exact fields:
//   - Rational:       arbitrary-precision rationals (boost::multiprecision).
//   - GaussRational:  Q(i), used for central charges.
//   - ExtScalar:      the real quadratic extension Q(tau) with tau^2 rational,
//                     tau >= 0.  Deformed-equation coefficients live here with
//                     tau = 1/|Z| for a Gaussian-rational central charge Z, so
//                     numerical invariants keep exact signs.  If tau^2 happens
//                     to be a perfect square the value collapses to a rational,
//                     which keeps equality and sign tests honest.
//
// Printing convention: "num/den" in lowest terms, "num" when den == 1.
// Parsing accepts both forms (and rejects anything else).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "pcrit/error.hpp"

namespace pcrit {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int factorial(int k) {
    if (k < 0) throw Error(ErrorCode::OutOfRange, "factorial of negative integer");
    Int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int b = 1;
    for (int i = 0; i < k; ++i) { b *= (n - i); b /= (i + 1); }
    return b;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Strict parser for "[+-]?digits" or "[+-]?digits/[+-]?digits".
inline Rational parse_rational(const std::string& s) {
    auto fail = [&]() -> Rational {
        throw InputError("bad rational literal '" + s + "' (expected num or num/den)");
    };
    auto parse_int = [&](const std::string& t) -> Int {
        if (t.empty()) fail();
        std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (i == t.size()) fail();
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') fail();
        return Int(t[0] == '+' ? t.substr(1) : t);  // cpp_int rejects a leading '+'
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw InputError("bad rational literal '" + s + "' (zero denominator)");
    return Rational(num, den);
}

inline std::string rational_to_string(const Rational& q) {
    const Int num = boost::multiprecision::numerator(q);
    const Int den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline int sign(const Rational& q) {
    if (q > 0) return 1;
    if (q < 0) return -1;
    return 0;
}

// Exact square root of a non-negative rational, when one exists.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    const Int num = boost::multiprecision::numerator(q);
    const Int den = boost::multiprecision::denominator(q);
    const Int sn = boost::multiprecision::sqrt(num);
    const Int sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return std::nullopt;
    return Rational(sn, sd);
}

// ---------------------------------------------------------------------------
// Q(i)

struct GaussRational {
    Rational re{0};
    Rational im{0};

    GaussRational() = default;
    GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit GaussRational(const Rational& r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    GaussRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    GaussRational operator+(const GaussRational& o) const { return {re + o.re, im + o.im}; }
    GaussRational operator-(const GaussRational& o) const { return {re - o.re, im - o.im}; }
    GaussRational operator-() const { return {-re, -im}; }
    GaussRational operator*(const GaussRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussRational operator*(const Rational& s) const { return {re * s, im * s}; }
    bool operator==(const GaussRational& o) const { return re == o.re && im == o.im; }

    // Multiply by i^k.
    GaussRational times_i_pow(int k) const {
        int r = ((k % 4) + 4) % 4;
        switch (r) {
            case 0: return *this;
            case 1: return {-im, re};
            case 2: return {-re, -im};
            default: return {im, -re};
        }
    }
};

inline std::string gauss_to_string(const GaussRational& z) {
    return rational_to_string(z.re) + (z.im >= 0 ? " + " : " - ") +
           rational_to_string(boost::multiprecision::abs(z.im)) + "i";
}

// ---------------------------------------------------------------------------
// Q(tau), tau = sqrt(tau2) >= 0 with tau2 rational and non-negative.
//
// A value is a + b*tau.  Arithmetic combines values with matching tau2; a pure
// rational (b == 0) is compatible with any extension.  Construction collapses
// perfect-square extensions so that representation — hence operator== — is
// canonical.

class ExtScalar {
public:
    ExtScalar() = default;
    ExtScalar(const Rational& a) : a_(a) {}                     // NOLINT(google-explicit-constructor)
    ExtScalar(int a) : a_(a) {}                                 // NOLINT(google-explicit-constructor)

    static ExtScalar with_root(const Rational& a, const Rational& b, const Rational& tau2) {
        if (tau2 < 0) throw Error(ErrorCode::InternalError, "negative tau^2 in quadratic extension");
        ExtScalar x;
        x.a_ = a;
        x.b_ = b;
        x.tau2_ = tau2;
        x.collapse();
        return x;
    }

    const Rational& rational_part() const { return a_; }
    const Rational& root_part() const { return b_; }
    const Rational& tau2() const { return tau2_; }
    bool is_rational() const { return b_ == 0; }

    Rational rational_value() const {
        if (!is_rational())
            throw Error(ErrorCode::InternalError, "irrational value where a rational was required");
        return a_;
    }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    ExtScalar operator-() const { return with_root(-a_, -b_, tau2_); }

    ExtScalar operator+(const ExtScalar& o) const {
        Rational t2 = merge_tau2(o);
        return with_root(a_ + o.a_, b_ + o.b_, t2);
    }
    ExtScalar operator-(const ExtScalar& o) const { return *this + (-o); }

    ExtScalar operator*(const ExtScalar& o) const {
        Rational t2 = merge_tau2(o);
        // (a + b t)(c + d t) = (ac + bd t^2) + (ad + bc) t
        return with_root(a_ * o.a_ + b_ * o.b_ * t2, a_ * o.b_ + b_ * o.a_, t2);
    }

    ExtScalar& operator+=(const ExtScalar& o) { *this = *this + o; return *this; }
    ExtScalar& operator-=(const ExtScalar& o) { *this = *this - o; return *this; }
    ExtScalar& operator*=(const ExtScalar& o) { *this = *this * o; return *this; }

    // Exact sign of a + b*tau with tau = sqrt(tau2) >= 0.
    int sign() const {
        const int sa = pcrit::sign(a_);
        const int sb = pcrit::sign(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Opposite signs: compare |a| against |b|*tau by squaring.
        const Rational lhs = a_ * a_;
        const Rational rhs = b_ * b_ * tau2_;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sa : sb;
    }

    bool operator==(const ExtScalar& o) const { return (*this - o).is_zero(); }
    bool operator!=(const ExtScalar& o) const { return !(*this == o); }
    bool operator<(const ExtScalar& o) const { return (*this - o).sign() < 0; }
    bool operator>(const ExtScalar& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const ExtScalar& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const ExtScalar& o) const { return (*this - o).sign() >= 0; }

    double to_double() const {
        double v = pcrit::to_double(a_);
        if (b_ != 0) v += pcrit::to_double(b_) * std::sqrt(pcrit::to_double(tau2_));
        return v;
    }

private:
    // tau2_ is meaningful only while b_ != 0; a pure rational carries tau2_ = 0.
    Rational a_{0};
    Rational b_{0};
    Rational tau2_{0};

    void collapse() {
        if (b_ == 0) { tau2_ = 0; return; }
        if (auto r = exact_sqrt(tau2_)) {
            a_ += b_ * *r;
            b_ = 0;
            tau2_ = 0;
        }
    }

    Rational merge_tau2(const ExtScalar& o) const {
        if (b_ == 0) return o.tau2_;
        if (o.b_ == 0) return tau2_;
        if (tau2_ != o.tau2_)
            throw Error(ErrorCode::InternalError,
                        "mixing values from different quadratic extensions");
        return tau2_;
    }
};

inline std::string ext_to_string(const ExtScalar& x) {
    if (x.is_rational()) return rational_to_string(x.rational_part());
    std::string s;
    if (x.rational_part() != 0) s += rational_to_string(x.rational_part()) + " + ";
    s += "(" + rational_to_string(x.root_part()) + ")*sqrt(" +
         rational_to_string(x.tau2()) + ")";
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const ExtScalar& x) {
    return os << ext_to_string(x);
}

// Scalar-concept helpers used by the templated class algebra.
inline bool scalar_is_zero(const Rational& q) { return q == 0; }
inline bool scalar_is_zero(const ExtScalar& x) { return x.is_zero(); }

} // namespace pcrit
