#pragma once

#include <cstdint>
#include <compare>
#include <memory>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "ashg/errors.hpp"

namespace ashg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact signed rational. Values that fit in 64 bits are kept inline;
/// anything larger transparently promotes to arbitrary precision.
/// Always stored reduced with a positive denominator.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : num_(v), den_(1) {}            // NOLINT(google-explicit-constructor)

    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw input_error("rational with zero denominator");
        assign_i128(static_cast<I128>(num), static_cast<I128>(den));
    }

    static Rational from_big(BigInt num, BigInt den) {
        if (den == 0) throw input_error("rational with zero denominator");
        Rational r;
        r.assign_big(std::move(num), std::move(den));
        return r;
    }

    /// Parses "a/b" or "a"; digits may exceed 64 bits. The denominator,
    /// when present, must be positive.
    static Rational parse(std::string_view s) {
        auto slash = s.find('/');
        std::string_view ns = s.substr(0, slash);
        BigInt n = parse_int(ns);
        if (slash == std::string_view::npos) return from_big(std::move(n), 1);
        std::string_view ds = s.substr(slash + 1);
        BigInt d = parse_int(ds);
        if (d <= 0) throw input_error("rational denominator must be positive: '" + std::string(s) + "'");
        return from_big(std::move(n), std::move(d));
    }

    /// Canonical serialization, always "num/den" (e.g. "3/1", "-1/2").
    std::string str() const {
        if (!big_) return std::to_string(num_) + "/" + std::to_string(den_);
        return big_->num.str() + "/" + big_->den.str();
    }

    bool is_zero() const { return big_ ? big_->num == 0 : num_ == 0; }
    int sign() const {
        if (big_) return big_->num == 0 ? 0 : (big_->num < 0 ? -1 : 1);
        return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1);
    }

    bool fits_int64() const { return !big_; }
    std::int64_t num64() const {
        if (big_) throw input_error("rational numerator exceeds 64 bits");
        return num_;
    }
    std::int64_t den64() const {
        if (big_) throw input_error("rational denominator exceeds 64 bits");
        return den_;
    }
    BigInt numerator() const { return big_ ? big_->num : BigInt(num_); }
    BigInt denominator() const { return big_ ? big_->den : BigInt(den_); }

    Rational operator-() const {
        Rational r;
        if (!big_) {
            r.assign_i128(-static_cast<I128>(num_), static_cast<I128>(den_));
        } else {
            r.assign_big(-big_->num, big_->den);
        }
        return r;
    }

    Rational& operator+=(const Rational& o) {
        if (!big_ && !o.big_) {
            if (den_ == 1 && o.den_ == 1) {
                // Common case in restricted games: integers.
                I128 n = static_cast<I128>(num_) + o.num_;
                if (fits64(n)) { num_ = static_cast<std::int64_t>(n); return *this; }
                assign_i128(n, 1);
                return *this;
            }
            I128 n = static_cast<I128>(num_) * o.den_ + static_cast<I128>(o.num_) * den_;
            I128 d = static_cast<I128>(den_) * o.den_;
            assign_i128(n, d);
            return *this;
        }
        BigInt an = numerator(), ad = denominator();
        assign_big(an * o.denominator() + o.numerator() * ad, ad * o.denominator());
        return *this;
    }

    Rational& operator-=(const Rational& o) { return *this += -o; }

    Rational& operator*=(const Rational& o) {
        if (!big_ && !o.big_) {
            I128 n = static_cast<I128>(num_) * o.num_;
            I128 d = static_cast<I128>(den_) * o.den_;
            assign_i128(n, d);
            return *this;
        }
        assign_big(numerator() * o.numerator(), denominator() * o.denominator());
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        return a.numerator() == b.numerator() && a.denominator() == b.denominator();
    }

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            I128 l = static_cast<I128>(a.num_) * b.den_;
            I128 r = static_cast<I128>(b.num_) * a.den_;
            return l < r ? std::strong_ordering::less
                 : l > r ? std::strong_ordering::greater
                         : std::strong_ordering::equal;
        }
        BigInt l = a.numerator() * b.denominator();
        BigInt r = b.numerator() * a.denominator();
        return l < r ? std::strong_ordering::less
             : l > r ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using I128 = __int128;
    using U128 = unsigned __int128;

    struct Big {
        BigInt num;
        BigInt den;  // > 0, gcd(|num|, den) == 1
    };

    static bool fits64(I128 v) {
        return v >= static_cast<I128>(INT64_MIN) && v <= static_cast<I128>(INT64_MAX);
    }

    static U128 abs128(I128 v) { return v < 0 ? -static_cast<U128>(v) : static_cast<U128>(v); }

    static U128 gcd128(U128 a, U128 b) {
        while (b != 0) {
            U128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static BigInt big_from_i128(I128 v) {
        bool neg = v < 0;
        U128 u = abs128(v);
        BigInt r = static_cast<std::uint64_t>(u >> 64);
        r <<= 64;
        r += static_cast<std::uint64_t>(u);
        return neg ? -r : r;
    }

    void assign_i128(I128 n, I128 d) {
        if (d < 0) { n = -n; d = -d; }
        if (n == 0) { num_ = 0; den_ = 1; big_.reset(); return; }
        U128 g = gcd128(abs128(n), abs128(d));
        U128 un = abs128(n) / g, ud = abs128(d) / g;
        I128 rn = n < 0 ? -static_cast<I128>(un) : static_cast<I128>(un);
        I128 rd = static_cast<I128>(ud);
        if (fits64(rn) && fits64(rd)) {
            num_ = static_cast<std::int64_t>(rn);
            den_ = static_cast<std::int64_t>(rd);
            big_.reset();
        } else {
            assign_big(big_from_i128(rn), big_from_i128(rd));
        }
    }

    void assign_big(BigInt n, BigInt d) {
        if (d < 0) { n = -n; d = -d; }
        BigInt g = boost::multiprecision::gcd(n < 0 ? BigInt(-n) : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n >= INT64_MIN && n <= INT64_MAX && d <= INT64_MAX) {
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            big_.reset();
        } else {
            num_ = 0;
            den_ = 1;
            big_ = std::make_shared<const Big>(Big{std::move(n), std::move(d)});
        }
    }

    static BigInt parse_int(std::string_view s) {
        if (s.empty()) throw input_error("empty rational component");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw input_error("malformed rational: '" + std::string(s) + "'");
        for (std::size_t j = i; j < s.size(); ++j) {
            if (s[j] < '0' || s[j] > '9')
                throw input_error("malformed rational: '" + std::string(s) + "'");
        }
        return BigInt(std::string(s));
    }

    std::int64_t num_, den_;
    std::shared_ptr<const Big> big_;
};

}  // namespace ashg
