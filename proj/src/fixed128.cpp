#include "uniformity/fixed128.hpp"

#include "uniformity/errors.hpp"

#include <cmath>

namespace unif {

namespace {

// High 128 bits of a 128x128 product, via 64-bit limbs.
u128 mulhi128(u128 a, u128 b) {
    const std::uint64_t a0 = static_cast<std::uint64_t>(a);
    const std::uint64_t a1 = static_cast<std::uint64_t>(a >> 64);
    const std::uint64_t b0 = static_cast<std::uint64_t>(b);
    const std::uint64_t b1 = static_cast<std::uint64_t>(b >> 64);

    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;

    // carry of the middle column
    const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
    return p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
}

} // namespace

Frac128 Frac128::from_double(double x) {
    if (!std::isfinite(x)) throw SpecError("Frac128: non-finite input");
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    // split so both halves convert exactly
    const double hi = std::floor(r * 0x1p64);
    const double lo = r * 0x1p64 - hi;
    u128 bits = static_cast<u128>(static_cast<std::uint64_t>(hi)) << 64;
    bits += static_cast<u128>(static_cast<std::uint64_t>(lo * 0x1p64));
    return {bits};
}

double Frac128::to_double() const {
    const auto [hi, lo] = to_double_pair();
    return hi + lo;
}

std::pair<double, double> Frac128::to_double_pair() const {
    const std::uint64_t hi = static_cast<std::uint64_t>(bits >> 64);
    const std::uint64_t lo = static_cast<std::uint64_t>(bits);
    return {static_cast<double>(hi) * 0x1p-64, static_cast<double>(lo) * 0x1p-128};
}

Frac128 frac_mul(Frac128 a, std::uint64_t n) {
    // (n * a.bits) mod 2^128
    const u128 lo = static_cast<u128>(n) * static_cast<std::uint64_t>(a.bits);
    const u128 hi = static_cast<u128>(n) * static_cast<std::uint64_t>(a.bits >> 64);
    return {static_cast<u128>(lo + (hi << 64))};
}

Frac128 frac_mul_signed(Frac128 a, std::int64_t k) {
    if (k >= 0) return frac_mul(a, static_cast<std::uint64_t>(k));
    const Frac128 pos = frac_mul(a, static_cast<std::uint64_t>(-(k + 1)) + 1);
    return {static_cast<u128>(0) - pos.bits};
}

double dist_nearest_int(Frac128 f) {
    const u128 other = static_cast<u128>(0) - f.bits;
    const u128 d = f.bits < other ? f.bits : other;
    return Frac128{d}.to_double();
}

std::vector<Frac128> algebraic_power_fracs(int degree) {
    if (degree < 2 || degree > 4) throw SpecError("algebraic_power_fracs: degree must be 2, 3 or 4");

    // Q4.124 fixed point on [1, 2]; x^degree - x - 1 is increasing there.
    constexpr int kFracBits = 124;
    const auto mul_q = [](u128 a, u128 b) -> u128 {
        // (a * b) >> 124 with a 256-bit intermediate
        const u128 hi = mulhi128(a, b);
        const std::uint64_t a0 = static_cast<std::uint64_t>(a);
        const std::uint64_t b0 = static_cast<std::uint64_t>(b);
        const u128 lo = static_cast<u128>(a0) * b0 +
                        ((static_cast<u128>(static_cast<std::uint64_t>(a >> 64)) * b0) << 64) +
                        ((static_cast<u128>(a0) * static_cast<std::uint64_t>(b >> 64)) << 64);
        return (hi << (128 - kFracBits)) | (lo >> kFracBits);
    };

    const u128 one = static_cast<u128>(1) << kFracBits;
    u128 lo = one;            // 1.0
    u128 hi = one << 1;       // 2.0
    for (int it = 0; it < 130; ++it) {
        const u128 mid = lo + ((hi - lo) >> 1);
        u128 p = mid;
        for (int j = 1; j < degree; ++j) p = mul_q(p, mid);
        // sign of p - mid - one
        if (p >= mid + one)
            hi = mid;
        else
            lo = mid;
    }
    const u128 theta = lo + ((hi - lo) >> 1);

    std::vector<Frac128> out;
    u128 p = theta;
    for (int j = 1; j < degree; ++j) {
        if (j > 1) p = mul_q(p, theta);
        // fractional part: drop integer bits, rescale Q4.124 -> Q0.128
        const u128 frac = p & (one - 1);
        out.push_back(Frac128{static_cast<u128>(frac << (128 - kFracBits))});
    }
    return out;
}

} // namespace unif
