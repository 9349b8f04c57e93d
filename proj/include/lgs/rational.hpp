#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "lgs/error.hpp"

namespace lgs {

// Exact non-negative rational for hypothesis bases and expansion ratios.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) fail(errc::parameter, "rational", "zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

    bool positive() const { return num > 0; }

    // value^k >= count, exactly
    bool pow_at_least(int k, long long count) const {
        __int128 lhs = 1, rhs = 1;
        for (int i = 0; i < k; ++i) {
            lhs *= num;
            rhs *= den;
            if (lhs > (__int128)4 * 1000000000000000000LL) {
                // numerator overflow-safe early exit: bound is astronomically large
                return true;
            }
        }
        return lhs >= rhs * (__int128)count;
    }

    // a*num >= b*den  i.e.  num/den >= b/a ... used as: lhs >= ratio * rhs
    static bool ge_scaled(long long lhs, const Rational& ratio, long long rhs) {
        return (__int128)lhs * ratio.den >= (__int128)ratio.num * rhs;
    }

    // Nearest rational with bounded denominator (continued fractions).
    static Rational approximate(double x, long long max_den = 1000000) {
        if (x < 0) fail(errc::parameter, "rational", "negative value");
        long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        double v = x;
        for (int it = 0; it < 64; ++it) {
            long long a = static_cast<long long>(v);
            long long p2 = a * p1 + p0, q2 = a * q1 + q0;
            if (q2 > max_den) break;
            p0 = p1; q0 = q1; p1 = p2; q1 = q2;
            double frac = v - static_cast<double>(a);
            if (frac < 1e-15) break;
            v = 1.0 / frac;
        }
        if (q1 == 0) return Rational(static_cast<long long>(x), 1);
        return Rational(p1, q1);
    }
};

} // namespace lgs
