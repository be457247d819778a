#pragma once

#include "uniformity/fixed128.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace unif {

// Distance from x to the nearest integer, in [0, 1/2].
double dist_nearest_int(double x);

// Partial quotients [a0; a1, a2, ...] of x. Stops early when the remainder
// is an integer to working precision (rational inputs get their finite
// expansion).
std::vector<long long> continued_fraction(double x, int max_terms);

// Convergent p/q from partial quotients.
std::pair<long long, long long> convergent(std::span<const long long> quotients);

// Finite-box evidence that alpha is badly approximable.
//   simultaneous_floor = min_{1<=q<=K} q^{1/d} max_j ||alpha_j q||
//   linear_form_floor  = min_{0<||k||_inf<=K} ||k||_inf^d ||<k, alpha>||
// Both floors are exact minima over the searched box (alpha held in 128-bit
// fixed point) and are nonincreasing in K.
struct BadnessCertificate {
    std::vector<double> alpha;
    std::uint32_t search_radius = 0;
    double simultaneous_floor = 0.0;
    double linear_form_floor = 0.0;
    std::vector<long long> argmin_k;

    std::string to_json() const;
    static BadnessCertificate from_json(const std::string& text);
};

BadnessCertificate linear_form_badness(const std::vector<Frac128>& alpha, std::uint32_t K);
BadnessCertificate linear_form_badness(const std::vector<double>& alpha, std::uint32_t K);
// Serial reference for the box scan.
BadnessCertificate linear_form_badness_serial(const std::vector<Frac128>& alpha, std::uint32_t K);

// ||<k, alpha>|| computed exactly in 128-bit fixed point.
double linear_form_dist(const std::vector<Frac128>& alpha, std::span<const long long> k);

// Geometric-series bound min(1, (2/N)/||<k, alpha>||) for the modulus of
// the N-point Kronecker exponential sum at frequency k; returns 1 when
// <k, alpha> is an integer.
double geometric_sum_bound(const std::vector<Frac128>& alpha, std::span<const long long> k, std::uint64_t N);

} // namespace unif
