#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace bdiv {

// Exact rational number. Always normalized: gcd(num, den) = 1, den > 0.
// The entire computational core works over these; there is no floating-point
// path anywhere.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
    Rat(long num, long den);
    explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    // Accepts "p/q" or "n" with an optional leading minus. Throws InputError.
    static Rat parse(std::string_view text);

    // Canonical serialization: "p/q", or "n" when the denominator is 1.
    std::string str() const;

    const mpq_class& raw() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rat abs() const { return Rat(mpq_class(::abs(v_))); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

    friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) == 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) != 0; }
    friend bool operator<(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const Rat& a, const Rat& b) { return cmp(a.v_, b.v_) >= 0; }

private:
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace bdiv
