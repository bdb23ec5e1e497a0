#pragma once

// Exact cost arithmetic: rationals plus a greatest element +inf that is
// absorbing for addition.  Infinite cost marks a forbidden assignment, so
// min-plus evaluation never needs a special case for infeasibility.

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace optiterm {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                       i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                       i128(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "n", "n/d", and decimal "n.ddd" forms, optionally signed.
    static Rational parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("empty rational literal");
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
            if (frac.empty() || frac.size() > 18)
                throw std::invalid_argument("bad decimal literal: '" + s + "'");
            std::int64_t den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            bool neg = !whole.empty() && whole[0] == '-';
            std::int64_t w = whole.empty() || whole == "-" || whole == "+"
                                 ? 0
                                 : parse_int(whole);
            std::int64_t f = parse_int(frac);
            if (f < 0) throw std::invalid_argument("bad decimal literal: '" + s + "'");
            i128 num = i128(w < 0 || neg ? -1 : 1) * (i128(w < 0 ? -w : w) * den + f);
            return from128(num, den);
        }
        return Rational(parse_int(s));
    }

private:
    using i128 = __int128;

    void normalize() {
        if (den_ == 0) throw std::invalid_argument("zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    static Rational from128(i128 n, i128 d) {
        if (d == 0) throw std::invalid_argument("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        if (r.num_ == 0) r.den_ = 1;
        return r;
    }

    static std::int64_t parse_int(const std::string& s) {
        std::size_t pos = 0;
        long long v;
        try {
            v = std::stoll(s, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad integer literal: '" + s + "'");
        }
        if (pos != s.size()) throw std::invalid_argument("bad integer literal: '" + s + "'");
        return v;
    }

    std::int64_t num_, den_;
};

// Rational extended with +inf; addition saturates, min is total.
class ExtCost {
public:
    ExtCost() : inf_(false), val_(0) {}
    ExtCost(const Rational& v) : inf_(false), val_(v) {}
    ExtCost(std::int64_t v) : inf_(false), val_(v) {}

    static ExtCost infinity() {
        ExtCost c;
        c.inf_ = true;
        return c;
    }

    bool is_infinite() const { return inf_; }
    const Rational& value() const {
        if (inf_) throw std::logic_error("value() on infinite cost");
        return val_;
    }

    friend ExtCost operator+(const ExtCost& a, const ExtCost& b) {
        if (a.inf_ || b.inf_) return infinity();
        return ExtCost(a.val_ + b.val_);
    }

    friend bool operator==(const ExtCost& a, const ExtCost& b) {
        if (a.inf_ != b.inf_) return false;
        return a.inf_ || a.val_ == b.val_;
    }
    friend bool operator!=(const ExtCost& a, const ExtCost& b) { return !(a == b); }
    friend bool operator<(const ExtCost& a, const ExtCost& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.val_ < b.val_;
    }
    friend bool operator<=(const ExtCost& a, const ExtCost& b) { return !(b < a); }
    friend bool operator>(const ExtCost& a, const ExtCost& b) { return b < a; }
    friend bool operator>=(const ExtCost& a, const ExtCost& b) { return !(a < b); }

    std::string str() const { return inf_ ? "inf" : val_.str(); }

    // "inf" (any case) or a rational literal.
    static ExtCost parse(const std::string& s) {
        if (s == "inf" || s == "INF" || s == "Inf" || s == "infinity") return infinity();
        return ExtCost(Rational::parse(s));
    }

private:
    bool inf_;
    Rational val_;
};

inline ExtCost min(const ExtCost& a, const ExtCost& b) { return b < a ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const ExtCost& c) { return os << c.str(); }

}  // namespace optiterm
