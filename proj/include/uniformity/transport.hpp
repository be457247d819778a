#pragma once

#include "uniformity/torus.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace unif {

struct PlanEntry {
    int i = 0;
    int j = 0;
    double mass = 0.0;
};

// A coupling between two discrete measures with its transport cost
// (cost = sum mass * d(x_i, y_j)^p, before the 1/p root).
struct TransportPlan {
    int rows = 0;
    int cols = 0;
    std::vector<PlanEntry> entries;
    double cost = 0.0;
    double p = 1.0;

    // marginal + cost recomputation check against the generating measures
    void validate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) const;
    double distance() const; // cost^(1/p)

    void write_csv(std::ostream& os) const; // i,j,mass
    static TransportPlan read_csv(std::istream& is);
};

struct W2Bracket {
    enum class Method { exact_simplex, entropic };
    double lower = 0.0;
    double upper = 0.0;
    int grid_resolution = 0;
    Method method = Method::exact_simplex;

    std::string to_json() const;
    static W2Bracket from_json(const std::string& text);
};

// Exact W1 between a discrete measure on the circle and Lebesgue:
// min over c of the integral of |F_mu(x) - x - c|, c a weighted median.
double w1_circle_exact(const EmpiricalMeasure& mu);

// Exact semidiscrete quadratic cost on the circle. Sorted atoms receive
// contiguous arcs of their own mass; the single free parameter is a global
// arc shift whose piecewise-smooth cost is minimized exactly over all
// breakpoints and interior stationary points.
double w2_circle_exact(const EmpiricalMeasure& mu);

// Exact discrete-discrete W_p oracle (network simplex). Guard:
// rows * cols <= 4e6.
TransportPlan wp_discrete_oracle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p);

// Bracket for W2(mu, dx) on the 2-torus via an M x M cell-center
// discretization of Lebesgue: |W2(mu, dx) - W2(mu, grid)| <= delta with
// delta = sqrt(d/12)/M. exact_simplex brackets are rigorous; entropic ones
// are labeled heuristic and never enter acceptance checks.
W2Bracket w2_torus_bracket(const EmpiricalMeasure& mu, int M,
                           W2Bracket::Method method = W2Bracket::Method::exact_simplex);

// Ball-packing lower bound on W1 (hence W2) against Lebesgue for any
// N-point measure: max over eps of (1 - omega_d eps^d) eps N^{-1/d}.
double packing_lower_bound(std::uint64_t N, int d);

struct Discrepancy1D {
    double anchored_star = 0.0; // intervals [0, x)
    double extreme = 0.0;       // all arcs; the value N^-1 <= D <= 1 refers to this
};

// Exact interval discrepancies from the sorted-points formulas.
Discrepancy1D interval_discrepancy_1d(const PointSet& ps);
// Extreme (all-arcs) discrepancy; the primary D_N figure.
double star_discrepancy_1d(const PointSet& ps);

} // namespace unif
