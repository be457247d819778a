#pragma once

#include "uniformity/fixed128.hpp"
#include "uniformity/spectrum.hpp"
#include "uniformity/torus.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace unif {

enum class FormulaId { heat_w2, peyre_1d, random_walk, lattice_sum };

std::string formula_id_name(FormulaId id);
FormulaId formula_id_from_name(const std::string& name);

// A computed bound together with its certificates. For sqrt-form bounds the
// truncation tail lives in the squared domain: value = sqrt(partial + tail).
// t_star is 0 when no heat parameter applies.
struct BoundReport {
    double value = 0.0;
    double t_star = 0.0;
    double truncation_tail = 0.0;
    std::string t_grid;
    FormulaId formula_id = FormulaId::heat_w2;
    std::string source;

    std::string to_json() const;
    static BoundReport from_json(const std::string& text);
};

// (1/N) sum_n exp(2 pi i <k, x_n>); k = 0 returns 1. Deterministic blocked
// reduction; |result| <= 1 + eps for any point set.
std::complex<double> exponential_sum(const PointSet& ps, std::span<const long long> k);
std::complex<double> exponential_sum_serial(const PointSet& ps, std::span<const long long> k);

// All coefficients over the box [-L, L]^d. Computes the lexicographically
// positive half and mirrors the conjugates.
Spectrum build_spectrum(const PointSet& ps, std::uint32_t L);
Spectrum build_spectrum_serial(const PointSet& ps, std::uint32_t L);

// Certified Kronecker spectrum from the geometric-series bound
// min(1, (2/N) / ||<k, alpha>||), no point generation involved.
Spectrum kronecker_bound_spectrum(const std::vector<Frac128>& alpha, std::uint64_t N, std::uint32_t L);

// F = (sum_{k != 0} |mu(k)|^2 / k^2)^{1/2}, d = 1 only; the tail beyond the
// cutoff is certified via |mu| <= outside_bound.
BoundReport zinterhof_diaphony(const Spectrum& spec);

// (sum_{k != 0} e^{-|k|^2 t} |mu(k)|^2 / |k|^2 + tail)^{1/2}; finite for
// every t > 0 in every dimension.
double heat_diaphony(const Spectrum& spec, double t);
// the certified squared-domain tail used by heat_diaphony
double heat_diaphony_tail(const Spectrum& spec, double t);

// min over the t grid of c_smooth * sqrt(t) + heat_diaphony(spec, t).
BoundReport w2_upper_bound(const Spectrum& spec, std::span<const double> t_grid, double c_smooth = 1.0);

// 40-point log grid on [N^-2, 1].
std::vector<double> default_t_grid(std::uint64_t N, int points = 40);

// sum_{k != 0} e^{-|k|^2 t} |k|^m over Z^d, converged: the cutoff is
// auto-extended until the certified remainder drops below 1e-12.
double gaussian_lattice_sum(int m, int d, double t, std::uint32_t L);
double gaussian_lattice_sum_serial(int m, int d, double t, std::uint32_t L);

// Rigorous constant C(d) with #{k in Z^d : l <= |k| < l+1} <= C(d) l^{d-1}
// for every l >= 1, from disjoint unit cubes inside the covering annulus.
double lattice_shell_constant(int d);

// Certified upper bound on sum_{|k| > L} e^{-|k|^2 t} |k|^m via the shell
// constant and closed-form integral comparisons.
double gaussian_lattice_tail(int m, int d, double t, double L);

// W2 bound for the +-alpha random walk after `steps` steps:
// sqrt(sum_{l != 0} cos(2 pi l alpha)^{2 steps} / l^2 + 2/L).
BoundReport random_walk_w2_bound(double alpha, std::uint64_t steps, std::uint64_t cutoff);

} // namespace unif
