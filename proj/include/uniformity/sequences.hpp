#pragma once

#include "uniformity/fixed128.hpp"
#include "uniformity/spectrum.hpp"
#include "uniformity/torus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace unif {

enum class SeqKind { kronecker, van_der_corput, quadratic_residues, regular_grid, random_uniform };

// Parameters of a point construction. The CLI grammar is
// "kind:key=value,key=value", e.g. "kronecker:d=2,alpha=auto",
// "vdc:base=2", "qr:p=101", "grid:d=2,m=3", "random:d=2,seed=7".
struct SequenceSpec {
    SeqKind kind = SeqKind::van_der_corput;
    int dim = 1;
    std::vector<double> alpha;  // kronecker; empty + alpha_auto selects the vetted vector
    bool alpha_auto = false;
    std::uint64_t base = 2;     // van der Corput
    std::uint64_t prime = 0;    // quadratic residues
    std::uint64_t side = 0;     // regular grid, N = side^d
    std::uint64_t seed = 0;     // random uniform
    bool seed_set = false;

    void validate() const;                       // throws SpecError
    std::string label() const;
    static SequenceSpec parse(const std::string& text);
    // resolved Kronecker direction vector at fixed-point precision
    std::vector<Frac128> kronecker_alpha() const;
};

// Generate points with 1-based indices n_start .. n_start+n_count-1.
// Deterministic; kronecker and van_der_corput are prefix-stable.
PointSet generate(const SequenceSpec& spec, std::uint64_t n_start, std::uint64_t n_count);

// N-point realization of the construction: prefixes for infinite
// sequences, m = N^{1/d} for grids (must be exact), p = N for quadratic
// residues (must match the spec or be prime when the spec leaves p unset).
PointSet generate_n(const SequenceSpec& spec, std::uint64_t N);

// Vetted badly approximable direction vectors: d=1 golden ratio, d=2
// powers of the plastic number (x^3 = x + 1), d=3 powers of the root of
// x^4 = x + 1. Certified numerically via linear_form_badness.
std::vector<double> badly_approximable_alpha(int d);
std::vector<Frac128> badly_approximable_alpha_frac(int d);

// Base-r radical inverse of n (exact integer digit reversal).
double radical_inverse(std::uint64_t n, std::uint64_t base);

// Spectrum of the two-step random walk measure after `steps` steps:
// mu-hat(l) = cos(2 pi l alpha)^steps over l in [-L, L].
Spectrum random_walk_measure_spectrum(double alpha, std::uint64_t steps, std::uint32_t cutoff);

} // namespace unif
