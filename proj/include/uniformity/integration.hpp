#pragma once

#include "uniformity/sequences.hpp"
#include "uniformity/torus.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace unif {

// Registered test-function families with exact pointwise evaluation and
// analytic gradient norms wherever a closed form exists.
//   trig:    cos(2 pi <k, x>)
//   product: prod_j cos(2 pi k_j x_j)
//   bump:    height * (1 - |x - c|/radius)^3 inside the ball, 0 outside
//   extremal: min(eps, distance to the nearest atom)
struct TestFunction {
    enum class Family { trig_monomial, product_cosine, bump, extremal };

    Family family = Family::trig_monomial;
    int dim = 1;
    std::vector<long long> freq;          // trig / product
    std::vector<double> center;           // bump
    double radius = 0.0, height = 0.0;    // bump
    std::optional<PointSet> atoms;        // extremal
    double eps = 0.0;                     // extremal
    bool eps_relative = false;            // eps scales with N^{-1/d} in studies

    static TestFunction trig(std::vector<long long> k);
    static TestFunction product(std::vector<long long> k);
    static TestFunction make_bump(std::vector<double> c, double radius, double height);
    static TestFunction extremal_fn(PointSet atoms, double eps);
    static TestFunction parse(const std::string& text, int dim);

    double operator()(std::span<const double> x) const;
    double gradient_norm(std::span<const double> x) const; // a.e. value
    std::string label() const;

    // Analytic stats where closed forms exist, tensor midpoint quadrature
    // (documented O(1/resolution) for the piecewise-smooth families)
    // otherwise. grad_inf and true integrals are analytic for every family
    // except overlapping extremal atoms.
    GradientStats stats(int resolution = 1024) const;
};

GradientStats eval_function_stats(const TestFunction& f, int resolution = 1024);

// |integral f - (1/N) sum f(x_k)|, compensated.
double qmc_error(const TestFunction& f, const PointSet& ps);

// c * Linf^{(d-1)/d} * Lx^{1/d} * N^{-1/d}; the Hoelder-refined form shared
// by the L2 and L1 bounds (any d >= 1).
double holder_refined_bound(double grad_inf, double grad_lx, std::uint64_t N, int d, double c = 1.0);

// L2-refined integration bound (badly approximable Kronecker sampling).
// Requires d >= 2; falls back to the classical form when L2 = Linf.
double l2_refined_bound(const GradientStats& s, std::uint64_t N, int d, double c = 1.0);

// L1-refined grid bound; N must be a perfect d-th power.
double l1_refined_bound(const GradientStats& s, std::uint64_t N, int d, double c = 1.0);

// classical Lipschitz form c * Linf * N^{-1/d}
double classic_bound(const GradientStats& s, std::uint64_t N, int d, double c = 1.0);

// Cell-local L1 refinement over the m^d grid cells:
// (c * Linf^{(d-1)/d} / N) * sum_B (L1 of |grad f| over B)^{1/d}.
// Never exceeds l1_refined_bound.
double local_l1_bound(const TestFunction& f, int m, int d, double c = 1.0);

// Both sides of the centered Poincare-type inequality: f shifted so the
// domain center is a zero, lhs = |integral|, rhs = Linf^{(d-1)/d} L1^{1/d}.
std::pair<double, double> centered_poincare_check(const TestFunction& f, int d);

struct ErrorRecord {
    std::uint64_t N = 0;
    double measured = 0.0;
    double classic = 0.0;
    double l2_refined = 0.0;
    double l1_refined = 0.0;  // NaN when N is not a perfect d-th power
    double local_l1 = 0.0;    // NaN unless grid sampling with d <= 2
    double l1_form_ratio = 0.0; // exploratory: measured / L1-form bound
};

// CSV columns: N,measured,classic,l2_refined,l1_refined,local_l1,l1_form_ratio
std::string error_records_csv(std::span<const ErrorRecord> recs);
std::vector<ErrorRecord> error_records_from_csv(const std::string& text);
std::string error_records_json(std::span<const ErrorRecord> recs);

// One record per N; bounds stored with c = 1. The extremal family is re-
// anchored on each generated point set, with eps scaled by N^{-1/d} when
// eps_relative is set.
std::vector<ErrorRecord> run_error_study(const SequenceSpec& spec, const TestFunction& f,
                                         std::span<const std::uint64_t> n_list);

} // namespace unif
