// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances and calibration constants are fixed here, in
// code; recalibrating them requires editing this file deliberately.

#include "uniformity/integration.hpp"
#include "uniformity/numtheory.hpp"
#include "uniformity/parallel.hpp"
#include "uniformity/records.hpp"
#include "uniformity/sequences.hpp"
#include "uniformity/spectral.hpp"
#include "uniformity/transport.hpp"

#include "support/oracle_lp.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace unif;

namespace {

// ---- frozen constants (recorded from the first certified run) ----
constexpr double kSmoothingConstant = 1.0;   // c_smooth of the spectral bound
constexpr double kQrConstant = 0.2950;       // W2 * sqrt(p) ceiling, observed max 0.29009
constexpr double kPlasticFloor = 0.0795956;  // d=2 linear-form floor at K = 1000
constexpr double kCalKron2 = 0.32;           // measured/L2-refined, kronecker d=2 (max 0.2351)
constexpr double kCalGrid2 = 0.75;           // measured/L1-refined, grid d=2 (max 0.5583)
constexpr double kCalKron1 = 0.32;           // d=1 L2-form variant (max 0.2332)
constexpr double kCalGrid1 = 0.60;           // d=1 L1-form variant (max 0.4500)
constexpr double kOptimalityFloor = 0.40;    // measured/L1-refined lower bound, extremal family
constexpr double kGrahamFloor = 0.065;       // min W2 * N / sqrt(log2 N), van der Corput

int failures = 0;
std::vector<std::string> notes;

struct WassersteinRegistry {
    struct Row {
        double value;
        std::uint64_t n;
        int d;
    };
    std::vector<Row> rows;
    void add(double value, std::uint64_t n, int d) { rows.push_back({value, n, d}); }
} registry;

void verdict(int crit, bool pass, const std::string& what) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", crit, what.c_str());
    if (!pass) ++failures;
}

void info(const std::string& what) { std::printf("  - %s\n", what.c_str()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::vector<std::uint64_t> pow2_range(int lo, int hi) {
    std::vector<std::uint64_t> out;
    for (int e = lo; e <= hi; ++e) out.push_back(1ull << e);
    return out;
}

EmpiricalMeasure random_measure_1d(std::size_t n, std::uint64_t seed, bool random_weights) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet ps(1);
    std::vector<double> w;
    for (std::size_t i = 0; i < n; ++i) {
        ps.append(std::vector<double>{u(rng)});
        w.push_back(random_weights ? u(rng) + 0.05 : 1.0);
    }
    return EmpiricalMeasure(std::move(ps), std::move(w));
}

// ---- criterion 1: Kronecker d=2 rate, spectral bound and bracket ----
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = SequenceSpec::parse("kronecker:d=2,alpha=auto");
    const auto alpha = spec.kronecker_alpha();

    const auto cert = linear_form_badness(alpha, 1000);
    const bool cert_ok = cert.linear_form_floor >= kPlasticFloor - 1e-12 &&
                         cert.linear_form_floor >= 0.01;

    std::vector<std::uint64_t> ns = pow2_range(4, 12);
    std::vector<double> bounds;
    for (const std::uint64_t n : ns) {
        const PointSet ps = generate(spec, 1, n);
        const Spectrum sp = build_spectrum(ps, 384);
        const auto grid = default_t_grid(n);
        const auto rep = w2_upper_bound(sp, grid, kSmoothingConstant);
        bounds.push_back(rep.value);
        registry.add(rep.value, n, 2);
    }
    const auto fit_spec = fit_loglog(ns, bounds);

    std::vector<std::uint64_t> nb = pow2_range(4, 10);
    std::vector<double> uppers;
    for (const std::uint64_t n : nb) {
        const auto mu = empirical_from_points(generate(spec, 1, n));
        const auto br = w2_torus_bracket(mu, 128, W2Bracket::Method::exact_simplex);
        uppers.push_back(br.upper);
        registry.add(br.upper, n, 2);
    }
    const auto fit_br = fit_loglog(nb, uppers);

    const double elapsed = seconds_since(t0);
    const bool ok = cert_ok && std::abs(fit_spec.exponent + 0.5) <= 0.1 &&
                    std::abs(fit_br.exponent + 0.5) <= 0.1 && elapsed <= 600.0;
    verdict(1, ok,
            fmt("Kronecker d=2 rate: spectral slope %+.4f (want -0.5 +- 0.1), bracket upper slope "
                "%+.4f (want -0.5 +- 0.1), certified floor %.7f, %.1f s (budget 600 s)",
                fit_spec.exponent, fit_br.exponent, cert.linear_form_floor, elapsed));
}

// ---- criterion 2: random walk rate ----
void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const double phi = badly_approximable_alpha(1)[0];
    std::vector<std::uint64_t> ks = pow2_range(4, 14);
    std::vector<double> vals;
    for (const std::uint64_t k : ks) vals.push_back(random_walk_w2_bound(phi, k, 1000000).value);
    const auto fit = fit_loglog(ks, vals);
    const double elapsed = seconds_since(t0);

    const bool ok = std::abs(fit.exponent + 0.25) <= 0.05 && elapsed <= 60.0;
    verdict(2, ok,
            fmt("random-walk bound slope %+.4f (want -0.25 +- 0.05), %.1f s (budget 60 s)",
                fit.exponent, elapsed));
    if (!ok) {
        // The theorem itself (bound <= C k^{-1/4}) does hold: the computed
        // series is smaller than the stated rate, not larger.
        double sup = 0.0;
        bool monotone = true;
        double prev = 1e300;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double scaled = vals[i] * std::pow(static_cast<double>(ks[i]), 0.25);
            sup = std::max(sup, scaled);
            monotone = monotone && scaled <= prev + 1e-12;
            prev = scaled;
        }
        info(fmt("validity of the k^{-1/4} estimate: sup_k value*k^{1/4} = %.4f, attained at the "
                 "smallest k and decreasing thereafter (%s)",
                 sup, monotone ? "monotone" : "not monotone"));
        info(fmt("the sharp series decays like k^{-1/2} for a quadratic irrational (measured "
                 "slope %+.4f); -1/4 is the worst-case rate of the estimate, which the series "
                 "undershoots rather than violates",
                 fit.exponent));
    }
}

// ---- criterion 3: van der Corput rate with log correction ----
void criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = SequenceSpec::parse("vdc:base=2");
    const auto ns = pow2_range(4, 16);
    const PointSet all = generate(spec, 1, ns.back());
    std::vector<double> vals, scaled;
    for (const std::uint64_t n : ns) {
        const double v = w2_circle_exact(empirical_from_points(all.prefix(n)));
        vals.push_back(v);
        scaled.push_back(v * static_cast<double>(n) / std::sqrt(std::log2(static_cast<double>(n))));
        registry.add(v, n, 1);
    }
    const auto fit = fit_loglog(ns, vals);
    double lo = 1e300, hi = 0.0;
    for (const double s : scaled) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    const double elapsed = seconds_since(t0);
    const bool ok = std::abs(fit.exponent + 1.0) <= 0.05 && hi / lo <= 3.0 && lo >= kGrahamFloor &&
                    elapsed <= 120.0;
    verdict(3, ok,
            fmt("van der Corput W2 slope %+.4f (want -1.0 +- 0.05), log-corrected ratio %.3f "
                "(want <= 3), floor %.4f >= %.3f, %.1f s (budget 120 s)",
                fit.exponent, hi / lo, lo, kGrahamFloor, elapsed));
}

// ---- criterion 4: quadratic residues ----
void criterion4() {
    const std::vector<std::uint64_t> primes{101,  151,  211,  307,  401,  547,  809,
                                            1009, 1601, 2003, 2503, 3203, 4001, 5003,
                                            6007, 6421, 7001, 8009, 9001, 10007};
    std::vector<double> vals;
    double worst = 0.0;
    for (const std::uint64_t p : primes) {
        SequenceSpec spec;
        spec.kind = SeqKind::quadratic_residues;
        spec.prime = p;
        const double v = w2_circle_exact(empirical_from_points(generate(spec, 1, p)));
        vals.push_back(v);
        worst = std::max(worst, v * std::sqrt(static_cast<double>(p)));
        registry.add(v, p, 1);
    }
    const auto fit = fit_loglog(primes, vals);
    const bool ok = worst <= kQrConstant && std::abs(fit.exponent + 0.5) <= 0.07;
    verdict(4, ok,
            fmt("quadratic residues: max W2*sqrt(p) = %.5f (ceiling %.4f), slope %+.4f "
                "(want -0.5 +- 0.07) over %zu primes",
                worst, kQrConstant, fit.exponent, primes.size()));
}

// ---- criterion 5: spectral bound dominates exact W2 on 1D instances ----
void criterion5() {
    struct Instance {
        std::string spec;
        std::uint64_t n;
    };
    std::vector<Instance> instances;
    for (const char* base : {"vdc:base=2", "vdc:base=3", "vdc:base=5", "vdc:base=7"})
        for (const std::uint64_t n : {16ull, 64ull, 256ull, 1024ull, 4096ull})
            instances.push_back({base, n});
    for (const char* kr : {"kronecker:d=1,alpha=auto", "kronecker:d=1,alpha=0.41421356237309515"})
        for (const std::uint64_t n : {16ull, 64ull, 256ull, 1024ull, 4096ull})
            instances.push_back({kr, n});
    for (const std::uint64_t p : {101ull, 211ull, 1009ull, 4001ull})
        instances.push_back({"qr:p=" + std::to_string(p), p});
    for (const std::uint64_t n : {16ull, 64ull, 256ull, 1024ull, 4096ull})
        instances.push_back({"grid:d=1,m=" + std::to_string(n), n});
    for (int seed = 1; seed <= 4; ++seed)
        for (const std::uint64_t n : {128ull, 1024ull, 3000ull})
            instances.push_back({"random:d=1,seed=" + std::to_string(seed), n});

    int violations = 0;
    double min_margin = 1e300;
    for (const auto& inst : instances) {
        const auto spec = SequenceSpec::parse(inst.spec);
        const PointSet ps = generate_n(spec, inst.n);
        const auto mu = empirical_from_points(ps);
        const double exact = w2_circle_exact(mu);
        const Spectrum sp = build_spectrum(ps, 2048);
        const auto rep = w2_upper_bound(sp, default_t_grid(inst.n), kSmoothingConstant);
        registry.add(exact, ps.size(), 1);
        registry.add(rep.value, ps.size(), 1);
        if (rep.value < exact - 1e-9) ++violations;
        min_margin = std::min(min_margin, rep.value / std::max(exact, 1e-300));
    }
    verdict(5, violations == 0,
            fmt("spectral upper bound vs exact W2 on %zu 1D instances: %d violations "
                "(min bound/exact = %.3f, c_smooth = %.1f)",
                instances.size(), violations, min_margin, kSmoothingConstant));
}

// ---- criterion 6: oracle chain ----
void criterion6() {
    std::mt19937_64 rng(60606);
    int lp_fail = 0;
    double worst_gap = 0.0;
    for (int inst = 0; inst < 25; ++inst) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const int m = 2 + static_cast<int>(rng() % 5);
        const double p = inst % 2 ? 2.0 : 1.0;
        const auto mu = random_measure_1d(static_cast<std::size_t>(n), 7100 + inst, true);
        const auto nu = random_measure_1d(static_cast<std::size_t>(m), 7600 + inst, true);
        const auto plan = wp_discrete_oracle(mu, nu, p);
        plan.validate(mu, nu);
        std::vector<std::vector<double>> cost(static_cast<std::size_t>(n),
                                              std::vector<double>(static_cast<std::size_t>(m)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::pow(
                    wrap_distance(mu.support.at(static_cast<std::size_t>(i)),
                                  nu.support.at(static_cast<std::size_t>(j))),
                    p);
        const double exact = testsupport::transport_lp_exact(mu.weights, nu.weights, cost);
        const double gap = std::abs(plan.cost - exact);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-10) ++lp_fail;
    }

    // discretized-Lebesgue agreement with the closed-form circle solver
    const int M = 2048;
    SequenceSpec gspec;
    gspec.kind = SeqKind::regular_grid;
    gspec.side = M;
    const auto lebesgue = empirical_from_points(generate(gspec, 1, M));
    const double cert = 0.5 / static_cast<double>(M);
    int cell_fail = 0;
    double worst_cell = 0.0;
    for (int inst = 0; inst < 12; ++inst) {
        const auto mu = random_measure_1d(2 + rng() % 40, 9100 + inst, inst % 2 == 0);
        const double exact = w2_circle_exact(mu);
        const double discr = wp_discrete_oracle(mu, lebesgue, 2.0).distance();
        registry.add(exact, mu.size(), 1);
        const double gap = std::abs(exact - discr);
        worst_cell = std::max(worst_cell, gap);
        if (gap > cert + 1e-12) ++cell_fail;
    }
    verdict(6, lp_fail == 0 && cell_fail == 0,
            fmt("oracle chain: 25 simplex-vs-rational-LP gaps <= 1e-10 (worst %.2e), 12 "
                "circle-vs-discretized gaps <= %.2e (worst %.2e)",
                worst_gap, cert, worst_cell));
}

// ---- criterion 7: Gaussian lattice sum regimes ----
void criterion7() {
    bool ok = true;
    std::string detail;
    const auto ratio_band = [&](int m, int d) {
        double lo = 1e300, hi = 0.0;
        for (double t = 1e-4; t <= 1.0001e-1; t *= std::sqrt(10.0)) {
            const double v = gaussian_lattice_sum(m, d, t, 1) *
                             std::pow(t, 0.5 * static_cast<double>(m + d));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi / lo;
    };
    for (const auto [m, d] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {-1, 2}, {1, 2}}) {
        const double r = ratio_band(m, d);
        detail += fmt("(m=%d,d=%d): %.3f ", m, d, r);
        ok = ok && r < 2.0;
    }
    {
        double lo = 1e300, hi = 0.0;
        for (double t = 1e-4; t <= 1.0001e-1; t *= std::sqrt(10.0)) {
            const double v = gaussian_lattice_sum(-1, 1, t, 1) / std::log(1.0 / t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        detail += fmt("log(m=-1,d=1): %.3f", hi / lo);
        ok = ok && hi / lo < 2.0;
    }
    verdict(7, ok, "lattice sum t-scaling ratios < 2 over [1e-4, 1e-1]: " + detail);
}

// ---- criterion 8: integration bounds with frozen calibration ----
void criterion8() {
    const std::vector<std::string> functions2{"product:k=1|1",
                                              "product:k=2|3",
                                              "trig:k=1|0",
                                              "trig:k=1|1",
                                              "bump:radius=0.25,height=0.25",
                                              "bump:radius=0.0625,height=0.0625",
                                              "bump:radius=0.015625,height=0.015625",
                                              "extremal:eps=0.1,relative=1"};
    const std::vector<std::string> functions1{"trig:k=1", "trig:k=3",
                                              "bump:radius=0.125,height=0.125",
                                              "extremal:eps=0.1,relative=1"};

    int cases = 0, violations = 0;
    double worst_k2 = 0.0, worst_g2 = 0.0, worst_k1 = 0.0, worst_g1 = 0.0;

    const auto kron2 = SequenceSpec::parse("kronecker:d=2,alpha=auto");
    const std::vector<std::uint64_t> ns2{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    for (const auto& ftxt : functions2) {
        const auto f = TestFunction::parse(ftxt, 2);
        for (const auto& r : run_error_study(kron2, f, ns2)) {
            ++cases;
            const double cap = kCalKron2 * r.l2_refined;
            worst_k2 = std::max(worst_k2, r.l2_refined > 0 ? r.measured / r.l2_refined : 0.0);
            if (r.measured > cap + 1e-15) ++violations;
        }
    }

    const auto grid2 = SequenceSpec::parse("grid:d=2,m=2");
    const std::vector<std::uint64_t> gns{4, 9, 16, 36, 64, 121, 256, 529, 1024};
    for (const auto& ftxt : functions2) {
        const auto f = TestFunction::parse(ftxt, 2);
        for (const auto& r : run_error_study(grid2, f, gns)) {
            ++cases;
            const double cap = kCalGrid2 * r.l1_refined;
            worst_g2 = std::max(worst_g2, r.l1_refined > 0 ? r.measured / r.l1_refined : 0.0);
            if (r.measured > cap + 1e-15) ++violations;
            if (std::isfinite(r.local_l1) && r.local_l1 > r.l1_refined * (1.0 + 1e-9)) ++violations;
        }
    }

    const auto kron1 = SequenceSpec::parse("kronecker:d=1,alpha=auto");
    const auto grid1 = SequenceSpec::parse("grid:d=1,m=2");
    const std::vector<std::uint64_t> ns1{16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    for (const auto& ftxt : functions1) {
        const auto f = TestFunction::parse(ftxt, 1);
        for (const auto& r : run_error_study(kron1, f, ns1)) {
            ++cases;
            const double form = r.l2_refined; // d=1 variant, exponents (0,1)
            worst_k1 = std::max(worst_k1, form > 0 ? r.measured / form : 0.0);
            if (r.measured > kCalKron1 * form + 1e-15) ++violations;
        }
        for (const auto& r : run_error_study(grid1, f, ns1)) {
            ++cases;
            worst_g1 = std::max(worst_g1, r.l1_refined > 0 ? r.measured / r.l1_refined : 0.0);
            if (r.measured > kCalGrid1 * r.l1_refined + 1e-15) ++violations;
        }
    }

    // shrinking bump: the L2-refined form beats the classical bound
    bool bump_ok = true;
    double prev = 1e300;
    double final_ratio = 1.0;
    for (const double radius : {0.25, 0.0625, 1.0 / 64.0}) {
        const auto f = TestFunction::make_bump({0.5, 0.5}, radius, radius);
        const auto s = f.stats();
        const double ratio = l2_refined_bound(s, 4096, 2) / classic_bound(s, 4096, 2);
        bump_ok = bump_ok && ratio < prev;
        prev = ratio;
        final_ratio = ratio;
    }
    bump_ok = bump_ok && final_ratio < 0.1;

    verdict(8, violations == 0 && cases >= 200 && bump_ok,
            fmt("integration bounds: %d cases, %d violations; worst ratios kron2 %.3f/%.2f, "
                "grid2 %.3f/%.2f, kron1 %.3f/%.2f, grid1 %.3f/%.2f; bump ratio at r=1/64: %.4f",
                cases, violations, worst_k2, kCalKron2, worst_g2, kCalGrid2, worst_k1, kCalKron1,
                worst_g1, kCalGrid1, final_ratio));
}

// ---- criterion 9: extremal-family sharpness ----
void criterion9() {
    double min_ratio = 1e300;
    int cases = 0;
    for (const std::uint64_t n : {16ull, 64ull, 256ull}) {
        SequenceSpec spec;
        spec.kind = SeqKind::regular_grid;
        spec.side = n;
        const PointSet grid = generate(spec, 1, n);
        for (int j = 4; j <= 10; ++j) {
            const double eps = std::ldexp(1.0, -j) / static_cast<double>(n);
            const auto f = TestFunction::extremal_fn(grid, eps);
            const double measured = qmc_error(f, grid);
            const double bound = l1_refined_bound(f.stats(), n, 1);
            ++cases;
            min_ratio = std::min(min_ratio, measured / bound);
        }
    }
    verdict(9, min_ratio >= kOptimalityFloor,
            fmt("extremal sharpness: min measured/L1-bound = %.4f over %d cases "
                "(recorded floor %.2f)",
                min_ratio, cases, kOptimalityFloor));
}

// ---- criterion 10: universal packing lower bound ----
void criterion10() {
    int violations = 0;
    double min_slack = 1e300;
    for (const auto& row : registry.rows) {
        const double lb = packing_lower_bound(row.n, row.d);
        min_slack = std::min(min_slack, row.value / lb);
        if (row.value < lb - 1e-12) ++violations;
    }
    verdict(10, violations == 0 && !registry.rows.empty(),
            fmt("universal lower bound: %zu recorded Wasserstein values, %d below the packing "
                "bound (min value/bound = %.3f)",
                registry.rows.size(), violations, min_slack));
}

} // namespace

int main() {
    apply_thread_env();
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("acceptance: %d of 10 criteria failed, %.1f s total\n", failures,
                seconds_since(t0));
    return failures;
}
