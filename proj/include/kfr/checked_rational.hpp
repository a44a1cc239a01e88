#pragma once

// Fixed-width exact rational: 64-bit numerator and denominator, always reduced,
// denominator positive. Any operation whose exact result does not fit throws
// RationalOverflow instead of wrapping, so callers can retry with mpq_class.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace kfr {

class RationalOverflow : public std::overflow_error {
public:
    RationalOverflow() : std::overflow_error("64-bit rational overflow") {}
};

class CheckedRational {
public:
    constexpr CheckedRational() = default;
    constexpr CheckedRational(int value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    constexpr CheckedRational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
    CheckedRational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den == 0) throw std::domain_error("zero denominator");
        normalize();
    }

    /// Throws RationalOverflow when `q` does not fit.
    static CheckedRational from_mpq(const mpq_class& q) {
        if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw RationalOverflow();
        CheckedRational r;
        r.num_ = q.get_num().get_si();
        r.den_ = q.get_den().get_si();
        return r;
    }
    mpq_class to_mpq() const {
        mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
        return q;
    }

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    CheckedRational operator-() const {
        if (num_ == INT64_MIN) throw RationalOverflow();
        CheckedRational r = *this;
        r.num_ = -num_;
        return r;
    }

    CheckedRational& operator+=(const CheckedRational& o) { return add(o.num_, o.den_); }
    CheckedRational& operator-=(const CheckedRational& o) {
        if (o.num_ == INT64_MIN) throw RationalOverflow();
        return add(-o.num_, o.den_);
    }
    CheckedRational& operator*=(const CheckedRational& o) {
        std::int64_t g1 = gcd(num_, o.den_);
        std::int64_t g2 = gcd(o.num_, den_);
        num_ = mul(num_ / g1, o.num_ / g2);
        den_ = mul(den_ / g2, o.den_ / g1);
        return *this;
    }
    CheckedRational& operator/=(const CheckedRational& o) {
        if (o.num_ == 0) throw std::domain_error("division by zero");
        CheckedRational inv;
        inv.num_ = o.den_;
        inv.den_ = o.num_;
        if (inv.den_ < 0) {
            if (inv.den_ == INT64_MIN || inv.num_ == INT64_MIN) throw RationalOverflow();
            inv.den_ = -inv.den_;
            inv.num_ = -inv.num_;
        }
        return *this *= inv;
    }

    friend CheckedRational operator+(CheckedRational a, const CheckedRational& b) { return a += b; }
    friend CheckedRational operator-(CheckedRational a, const CheckedRational& b) { return a -= b; }
    friend CheckedRational operator*(CheckedRational a, const CheckedRational& b) { return a *= b; }
    friend CheckedRational operator/(CheckedRational a, const CheckedRational& b) { return a /= b; }

    friend bool operator==(const CheckedRational& a, const CheckedRational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const CheckedRational& a, const CheckedRational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator>(const CheckedRational& a, const CheckedRational& b) { return b < a; }
    friend bool operator<=(const CheckedRational& a, const CheckedRational& b) { return !(b < a); }
    friend bool operator>=(const CheckedRational& a, const CheckedRational& b) { return !(a < b); }

private:
    static std::int64_t gcd(std::int64_t a, std::int64_t b) {
        // std::gcd on INT64_MIN is undefined; those values overflow elsewhere anyway.
        if (a == INT64_MIN || b == INT64_MIN) throw RationalOverflow();
        std::int64_t g = std::gcd(a, b);
        return g == 0 ? 1 : g;
    }
    static std::int64_t mul(std::int64_t a, std::int64_t b) {
        std::int64_t out;
        if (__builtin_mul_overflow(a, b, &out)) throw RationalOverflow();
        return out;
    }
    static std::int64_t plus(std::int64_t a, std::int64_t b) {
        std::int64_t out;
        if (__builtin_add_overflow(a, b, &out)) throw RationalOverflow();
        return out;
    }

    CheckedRational& add(std::int64_t onum, std::int64_t oden) {
        std::int64_t g = gcd(den_, oden);
        std::int64_t a_den = den_ / g;
        std::int64_t b_den = oden / g;
        std::int64_t n = plus(mul(num_, b_den), mul(onum, a_den));
        std::int64_t g2 = gcd(n, g);
        num_ = n / g2;
        den_ = mul(a_den, oden / g2);
        return *this;
    }

    void normalize() {
        if (den_ < 0) {
            if (den_ == INT64_MIN || num_ == INT64_MIN) throw RationalOverflow();
            den_ = -den_;
            num_ = -num_;
        }
        std::int64_t g = gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace kfr
