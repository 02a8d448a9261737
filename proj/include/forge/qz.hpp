#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace forge {

// An element of Q/Z, stored as a reduced fraction num/den with 0 <= num < den.
// Used for braiding phases and 2-cocycle values on finite abelian groups,
// written additively (the phase exp(2*pi*i*num/den) is never materialized).
struct QZ {
    std::int64_t num = 0;
    std::int64_t den = 1;

    QZ() = default;

    QZ(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("QZ: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        n %= d;
        if (n < 0) n += d;
        const std::int64_t g = std::gcd(n, d);
        num = n / (g == 0 ? 1 : g);
        den = d / (g == 0 ? 1 : g);
        if (num == 0) den = 1;
    }

    static QZ zero() { return QZ(); }
    static QZ half() { return QZ(1, 2); }

    bool is_zero() const { return num == 0; }

    // Additive order: the least k >= 1 with k*x = 0.
    std::int64_t order() const { return den; }

    friend QZ operator+(const QZ& a, const QZ& b) {
        return QZ(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend QZ operator-(const QZ& a, const QZ& b) {
        return QZ(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend QZ operator*(std::int64_t k, const QZ& a) { return QZ(k * a.num, a.den); }

    QZ& operator+=(const QZ& o) { return *this = *this + o; }
    QZ& operator-=(const QZ& o) { return *this = *this - o; }

    friend bool operator==(const QZ& a, const QZ& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const QZ& a, const QZ& b) { return !(a == b); }
    friend bool operator<(const QZ& a, const QZ& b) {
        return a.num * b.den < b.num * a.den;
    }

    std::string to_string() const {
        if (num == 0) return "0";
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // Parses a multiplicative phase token: "+1"/"1" -> 0, "-1" -> 1/2.
    // Finer roots of unity are rejected; everything in scope is a sign.
    static QZ from_sign_token(const std::string& tok) {
        if (tok == "+1" || tok == "1") return QZ::zero();
        if (tok == "-1") return QZ::half();
        throw std::invalid_argument("QZ: phase token must be +1 or -1, got '" + tok + "'");
    }

    std::string to_sign_token() const {
        if (is_zero()) return "+1";
        if (*this == half()) return "-1";
        return "exp(2*pi*i*" + to_string() + ")";
    }
};

}  // namespace forge
