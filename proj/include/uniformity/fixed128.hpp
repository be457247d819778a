#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace unif {

using u128 = unsigned __int128;

// Fraction in [0, 1) held as a 128-bit fixed-point value: x = bits / 2^128.
// frac(n*x) is exact modular arithmetic, so Kronecker orbits carry no
// accumulated rounding for any index that fits in 64 bits.
struct Frac128 {
    u128 bits = 0;

    static Frac128 from_double(double x); // reduces x mod 1 first
    double to_double() const;
    // hi + lo double pair, |lo| <= 2^-64.
    std::pair<double, double> to_double_pair() const;
};

// frac(n * a) for unsigned n.
Frac128 frac_mul(Frac128 a, std::uint64_t n);
// frac(k * a) for signed k.
Frac128 frac_mul_signed(Frac128 a, std::int64_t k);
// frac(a + b); wrap-around addition.
inline Frac128 frac_add(Frac128 a, Frac128 b) { return {static_cast<u128>(a.bits + b.bits)}; }

// Distance from the fraction to the nearest integer, in [0, 1/2].
double dist_nearest_int(Frac128 f);

// Fractional parts of theta^1..theta^{degree-1} where theta is the unique
// real root in (1, 2) of x^degree = x + 1. degree = 2 gives the golden
// ratio, 3 the plastic number, 4 its quartic analogue. Computed by
// fixed-point bisection to ~2^-120.
std::vector<Frac128> algebraic_power_fracs(int degree);

} // namespace unif
