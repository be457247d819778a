#include "uniformity/transport.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/network_simplex.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace unif {

namespace {

struct Atoms1D {
    std::vector<double> pos; // sorted, unique
    std::vector<double> w;   // positive, summing to ~1
};

// sort and merge bitwise-equal positions (quadratic residues duplicate)
Atoms1D sorted_atoms(const EmpiricalMeasure& mu) {
    if (mu.dim() != 1) throw SpecError("circle transport: d must be 1");
    const std::size_t n = mu.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mu.support.at(a)[0] < mu.support.at(b)[0];
    });
    Atoms1D out;
    for (std::size_t idx : order) {
        const double x = mu.support.at(idx)[0];
        const double w = mu.weights[idx];
        if (w == 0.0) continue;
        if (!out.pos.empty() && out.pos.back() == x)
            out.w.back() += w;
        else {
            out.pos.push_back(x);
            out.w.push_back(w);
        }
    }
    if (out.pos.empty()) throw SpecError("circle transport: measure has no mass");
    return out;
}

// antiderivative of the squared circle distance to 0, extended to the line
double quad_antiderivative(double x) {
    const double k = std::floor(x);
    const double r = x - k;
    const double h = r <= 0.5 ? r * r * r / 3.0 : 1.0 / 12.0 - (1.0 - r) * (1.0 - r) * (1.0 - r) / 3.0;
    return k / 12.0 + h;
}

} // namespace

double w1_circle_exact(const EmpiricalMeasure& mu) {
    const Atoms1D a = sorted_atoms(mu);
    const std::size_t m = a.pos.size();

    // G(x) = C(x) - x on segment j: c_j - x for x in [y_j, y_{j+1})
    std::vector<double> cum(m);
    KahanSum acc;
    for (std::size_t i = 0; i < m; ++i) {
        acc.add(a.w[i]);
        cum[i] = acc.value();
    }

    struct Seg {
        double lo, hi, len; // G decreases linearly from hi to lo over len
    };
    std::vector<Seg> segs(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double y0 = a.pos[j];
        const double y1 = j + 1 < m ? a.pos[j + 1] : a.pos[0] + 1.0;
        const double len = y1 - y0;
        const double top = cum[j] - y0;
        segs[j] = {top - len, top, len};
    }

    // weighted median of G: total mass below level v is
    // sum_j clamp(v - lo_j, 0, len_j); solve mass(v) = 1/2
    std::vector<double> levels;
    levels.reserve(2 * m);
    for (const Seg& s : segs) {
        levels.push_back(s.lo);
        levels.push_back(s.hi);
    }
    std::sort(levels.begin(), levels.end());
    const auto mass_below = [&](double v) {
        KahanSum t;
        for (const Seg& s : segs) t.add(std::clamp(v - s.lo, 0.0, s.len));
        return t.value();
    };
    double median = levels.back();
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const double m0 = mass_below(levels[i]);
        const double m1 = mass_below(levels[i + 1]);
        if (m1 >= 0.5) {
            median = m1 > m0 ? levels[i] + (0.5 - m0) / (m1 - m0) * (levels[i + 1] - levels[i])
                             : levels[i];
            break;
        }
    }

    KahanSum total;
    for (const Seg& s : segs) {
        const double A = s.hi - median;
        const double B = s.lo - median;
        if (A <= 0.0 || B >= 0.0)
            total.add(0.5 * (std::abs(A) + std::abs(B)) * s.len);
        else
            total.add(0.5 * (A * A + B * B)); // sign change inside (slope -1)
    }
    return total.value();
}

double w2_circle_exact(const EmpiricalMeasure& mu) {
    const Atoms1D a = sorted_atoms(mu);
    const std::size_t m = a.pos.size();

    // atom i owns the arc [s + W_i, s + W_i + w_i); endpoints contribute
    // +-(squared circle distance) terms to dC/ds
    std::vector<double> cumw(m + 1, 0.0);
    {
        KahanSum acc;
        for (std::size_t i = 0; i < m; ++i) {
            cumw[i] = acc.value();
            acc.add(a.w[i]);
        }
        cumw[m] = acc.value();
    }

    const double exact_at = [&](double s) {
        KahanSum c;
        for (std::size_t i = 0; i < m; ++i) {
            const double b = s + cumw[i] - a.pos[i];
            c.add(quad_antiderivative(b + a.w[i]) - quad_antiderivative(b));
        }
        return c.value();
    }(0.0);

    if (m == 1) return std::sqrt(exact_at); // constant cost 1/12

    // dC/ds = sum of sigma * (s - c)^2 terms; the quadratic coefficients
    // cancel, so between events dC/ds = B s + C. Each term flips its
    // parabola center from c to c + 1 when its wrapped phase crosses 1/2.
    struct Term {
        double r0;     // frac(offset) at s = 0
        double center; // current parabola center
        double sigma;  // +1 for arc end, -1 for arc start
    };
    std::vector<Term> terms;
    terms.reserve(2 * m);
    const auto fracf = [](double x) {
        double r = x - std::floor(x);
        if (r >= 1.0) r = 0.0;
        return r;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const double b = cumw[i] - a.pos[i];
        terms.push_back({fracf(b), 0.0, -1.0});
        terms.push_back({fracf(b + a.w[i]), 0.0, +1.0});
    }
    double B = 0.0, C = 0.0;
    struct Event {
        double s;
        std::size_t term;
    };
    std::vector<Event> events;
    events.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Term& t = terms[i];
        t.center = t.r0 < 0.5 ? -t.r0 : 1.0 - t.r0;
        B += t.sigma * (-2.0 * t.center);
        C += t.sigma * t.center * t.center;
        const double se = fracf(0.5 - t.r0);
        if (se > 0.0) events.push_back({se, i});
    }
    std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
        return x.s != y.s ? x.s < y.s : x.term < y.term;
    });

    const auto dC = [&](double s) { return B * s + C; };
    double best_cost = exact_at;
    double best_s = 0.0;
    double run_cost = exact_at;
    double prev_s = 0.0;
    double prev_d = dC(0.0);

    const auto advance_to = [&](double s) {
        const double d = dC(s);
        run_cost += 0.5 * (prev_d + d) * (s - prev_s);
        prev_s = s;
        prev_d = d;
        if (run_cost < best_cost) {
            best_cost = run_cost;
            best_s = s;
        }
    };
    const auto try_root = [&](double hi) {
        if (B == 0.0) return;
        const double root = -C / B;
        if (root > prev_s && root < hi) advance_to(root);
    };

    for (const Event& ev : events) {
        try_root(ev.s);
        advance_to(ev.s);
        Term& t = terms[ev.term];
        // branch flip: center c -> c + 1
        B += t.sigma * (-2.0);
        C += t.sigma * (2.0 * t.center + 1.0);
        t.center += 1.0;
        prev_d = dC(prev_s);
    }
    try_root(1.0);
    advance_to(1.0);

    // one exact evaluation at the winning shift removes sweep drift
    KahanSum c2;
    for (std::size_t i = 0; i < m; ++i) {
        const double b = best_s + cumw[i] - a.pos[i];
        c2.add(quad_antiderivative(b + a.w[i]) - quad_antiderivative(b));
    }
    return std::sqrt(std::max(0.0, c2.value()));
}

void TransportPlan::validate(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) const {
    std::vector<double> rowsum(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> colsum(static_cast<std::size_t>(cols), 0.0);
    KahanSum c;
    for (const PlanEntry& e : entries) {
        if (e.mass < 0.0) throw ValidityError("plan: negative mass");
        if (e.i < 0 || e.i >= rows || e.j < 0 || e.j >= cols) throw ValidityError("plan: index out of range");
        rowsum[static_cast<std::size_t>(e.i)] += e.mass;
        colsum[static_cast<std::size_t>(e.j)] += e.mass;
        c.add(e.mass * std::pow(wrap_distance(mu.support.at(static_cast<std::size_t>(e.i)),
                                              nu.support.at(static_cast<std::size_t>(e.j))),
                                p));
    }
    for (std::size_t i = 0; i < rowsum.size(); ++i)
        if (std::abs(rowsum[i] - mu.weights[i]) > 1e-10) throw ValidityError("plan: row marginal mismatch");
    for (std::size_t j = 0; j < colsum.size(); ++j)
        if (std::abs(colsum[j] - nu.weights[j]) > 1e-10) throw ValidityError("plan: column marginal mismatch");
    if (std::abs(c.value() - cost) > 1e-10 * std::max(1.0, std::abs(cost)))
        throw ValidityError("plan: cost does not match recomputation");
}

double TransportPlan::distance() const { return std::pow(cost, 1.0 / p); }

void TransportPlan::write_csv(std::ostream& os) const {
    os << "i,j,mass\n";
    char buf[64];
    for (const PlanEntry& e : entries) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", e.i, e.j, e.mass);
        os << buf;
    }
}

TransportPlan TransportPlan::read_csv(std::istream& is) {
    TransportPlan plan;
    std::string line;
    if (!std::getline(is, line) || line != "i,j,mass") throw SpecError("plan CSV: bad header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        PlanEntry e;
        if (std::sscanf(line.c_str(), "%d,%d,%lg", &e.i, &e.j, &e.mass) != 3)
            throw SpecError("plan CSV: bad row");
        plan.entries.push_back(e);
        plan.rows = std::max(plan.rows, e.i + 1);
        plan.cols = std::max(plan.cols, e.j + 1);
    }
    return plan;
}

namespace {

// collapse bitwise-identical atoms; returns merged measure and the group of
// original indices for each merged atom
struct Merged {
    std::vector<double> flat;
    std::vector<double> w;
    std::vector<std::vector<int>> members;
};

Merged merge_atoms(const EmpiricalMeasure& mu) {
    const int d = mu.dim();
    const std::size_t n = mu.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto a = mu.support.at(x), b = mu.support.at(y);
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    Merged out;
    for (std::size_t idx : order) {
        const auto p = mu.support.at(idx);
        const bool same = !out.members.empty() &&
                          std::equal(p.begin(), p.end(), out.flat.end() - d);
        if (same) {
            out.w.back() += mu.weights[idx];
            out.members.back().push_back(static_cast<int>(idx));
        } else {
            out.flat.insert(out.flat.end(), p.begin(), p.end());
            out.w.push_back(mu.weights[idx]);
            out.members.push_back({static_cast<int>(idx)});
        }
    }
    return out;
}

} // namespace

TransportPlan wp_discrete_oracle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p) {
    if (mu.dim() != nu.dim()) throw SpecError("oracle: dimension mismatch");
    if (p < 1.0) throw SpecError("oracle: p must be >= 1");
    {
        KahanSum sa, sb;
        for (double v : mu.weights) sa.add(v);
        for (double v : nu.weights) sb.add(v);
        if (std::abs(sa.value() - sb.value()) > 1e-9) throw SpecError("oracle: weight sums mismatch");
    }
    if (static_cast<std::int64_t>(mu.size()) * static_cast<std::int64_t>(nu.size()) > 4'000'000)
        throw ResourceError("oracle: instance exceeds 4e6 cost entries");

    const int d = mu.dim();
    const Merged src = merge_atoms(mu);
    const Merged dst = merge_atoms(nu);
    const int n = static_cast<int>(src.w.size());
    const int m = static_cast<int>(dst.w.size());

    std::vector<double> costm(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        std::span<const double> xi{src.flat.data() + static_cast<std::size_t>(i) * d, static_cast<std::size_t>(d)};
        for (int j = 0; j < m; ++j) {
            std::span<const double> yj{dst.flat.data() + static_cast<std::size_t>(j) * d, static_cast<std::size_t>(d)};
            costm[static_cast<std::size_t>(i) * m + j] = std::pow(wrap_distance(xi, yj), p);
        }
    }
    const auto cost = [&](int i, int j) { return costm[static_cast<std::size_t>(i) * m + j]; };
    const SimplexResult sol = solve_transportation<decltype(cost)&>(src.w, dst.w, cost);

    // expand merged flows back to original indices, split proportionally
    TransportPlan plan;
    plan.rows = static_cast<int>(mu.size());
    plan.cols = static_cast<int>(nu.size());
    plan.p = p;
    KahanSum total;
    for (const SimplexArc& arc : sol.arcs) {
        const auto& gi = src.members[static_cast<std::size_t>(arc.source)];
        const auto& gj = dst.members[static_cast<std::size_t>(arc.sink)];
        const double wi = src.w[static_cast<std::size_t>(arc.source)];
        const double wj = dst.w[static_cast<std::size_t>(arc.sink)];
        for (int oi : gi) {
            for (int oj : gj) {
                const double mass = arc.flow * (mu.weights[static_cast<std::size_t>(oi)] / wi) *
                                    (nu.weights[static_cast<std::size_t>(oj)] / wj);
                if (mass == 0.0) continue;
                plan.entries.push_back({oi, oj, mass});
                total.add(mass * cost(arc.source, arc.sink));
            }
        }
    }
    plan.cost = total.value();
    plan.validate(mu, nu);
    return plan;
}

std::string W2Bracket::to_json() const {
    nlohmann::json j;
    j["lower"] = lower;
    j["upper"] = upper;
    j["grid_resolution"] = grid_resolution;
    j["method"] = method == Method::exact_simplex ? "exact_simplex" : "entropic";
    return j.dump();
}

W2Bracket W2Bracket::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    W2Bracket b;
    b.lower = j.at("lower").get<double>();
    b.upper = j.at("upper").get<double>();
    b.grid_resolution = j.at("grid_resolution").get<int>();
    const auto ms = j.at("method").get<std::string>();
    if (ms == "exact_simplex")
        b.method = Method::exact_simplex;
    else if (ms == "entropic")
        b.method = Method::entropic;
    else
        throw SpecError("bracket: unknown method '" + ms + "'");
    return b;
}

namespace {

// log-domain Sinkhorn with a halving epsilon schedule; heuristic only
double entropic_w2_grid(const EmpiricalMeasure& mu, int M) {
    const int d = mu.dim();
    const int n = static_cast<int>(mu.size());
    const std::int64_t m64 = 1;
    std::int64_t cells = m64;
    for (int j = 0; j < d; ++j) cells *= M;
    const int m = static_cast<int>(cells);
    std::vector<double> grid(static_cast<std::size_t>(m) * d);
    for (int j2 = 0; j2 < m; ++j2) {
        int rem = j2;
        for (int ax = d - 1; ax >= 0; --ax) {
            grid[static_cast<std::size_t>(j2) * d + ax] = (2.0 * (rem % M) + 1.0) / (2.0 * M);
            rem /= M;
        }
    }
    std::vector<double> c2(static_cast<std::size_t>(n) * m);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const auto xi = mu.support.at(static_cast<std::size_t>(i));
        for (int j2 = 0; j2 < m; ++j2) {
            std::span<const double> yj{grid.data() + static_cast<std::size_t>(j2) * d, static_cast<std::size_t>(d)};
            const double w = wrap_distance(xi, yj);
            c2[static_cast<std::size_t>(i) * m + j2] = w * w;
        }
    }
    const double bw = 1.0 / static_cast<double>(m);
    std::vector<double> f(static_cast<std::size_t>(n), 0.0), g(static_cast<std::size_t>(m), 0.0);
    for (double eps = 0.1; eps >= 1e-3; eps *= 0.5) {
        for (int it = 0; it < 50; ++it) {
#pragma omp parallel for schedule(static)
            for (int i = 0; i < n; ++i) {
                double mx = -1e300;
                for (int j2 = 0; j2 < m; ++j2)
                    mx = std::max(mx, (g[static_cast<std::size_t>(j2)] - c2[static_cast<std::size_t>(i) * m + j2]) / eps);
                double s = 0.0;
                for (int j2 = 0; j2 < m; ++j2)
                    s += bw * std::exp((g[static_cast<std::size_t>(j2)] - c2[static_cast<std::size_t>(i) * m + j2]) / eps - mx);
                f[static_cast<std::size_t>(i)] = -eps * (mx + std::log(s));
            }
#pragma omp parallel for schedule(static)
            for (int j2 = 0; j2 < m; ++j2) {
                double mx = -1e300;
                for (int i = 0; i < n; ++i)
                    mx = std::max(mx, (f[static_cast<std::size_t>(i)] - c2[static_cast<std::size_t>(i) * m + j2]) / eps);
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    s += mu.weights[static_cast<std::size_t>(i)] *
                         std::exp((f[static_cast<std::size_t>(i)] - c2[static_cast<std::size_t>(i) * m + j2]) / eps - mx);
                g[static_cast<std::size_t>(j2)] = -eps * (mx + std::log(s));
            }
        }
    }
    // dual objective as the cost estimate
    KahanSum obj;
    for (int i = 0; i < n; ++i) obj.add(mu.weights[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)]);
    for (int j2 = 0; j2 < m; ++j2) obj.add(bw * g[static_cast<std::size_t>(j2)]);
    return std::sqrt(std::max(0.0, obj.value()));
}

} // namespace

W2Bracket w2_torus_bracket(const EmpiricalMeasure& mu, int M, W2Bracket::Method method) {
    if (mu.dim() != 2) throw SpecError("w2_torus_bracket: d must be 2");
    if (M < 2) throw SpecError("w2_torus_bracket: grid resolution must be >= 2");
    const int d = 2;
    const std::int64_t cells = static_cast<std::int64_t>(M) * M;
    const double delta = std::sqrt(static_cast<double>(d) / 12.0) / static_cast<double>(M);

    double west = 0.0;
    if (method == W2Bracket::Method::exact_simplex) {
        // semidiscrete path: wider guard than the generic oracle, costs
        // evaluated on the fly against the cell-center grid
        if (static_cast<std::int64_t>(mu.size()) * cells > (1ll << 25))
            throw ResourceError("w2_torus_bracket: instance too large for exact_simplex; use entropic");
        const Merged src = merge_atoms(mu);
        const int n = static_cast<int>(src.w.size());
        const int m = static_cast<int>(cells);
        // per-axis squared distances to the M cell-center coordinates keep
        // the pricing hot loop at two loads and one add
        std::vector<double> dx2(static_cast<std::size_t>(n) * M), dy2(static_cast<std::size_t>(n) * M);
        for (int i = 0; i < n; ++i) {
            for (int g = 0; g < M; ++g) {
                const double y = (2.0 * g + 1.0) / (2.0 * M);
                const double ax = wrap_delta(src.flat[2 * static_cast<std::size_t>(i)], y);
                const double ay = wrap_delta(src.flat[2 * static_cast<std::size_t>(i) + 1], y);
                dx2[static_cast<std::size_t>(i) * M + g] = ax * ax;
                dy2[static_cast<std::size_t>(i) * M + g] = ay * ay;
            }
        }
        const auto cost = [&dx2, &dy2, M](int i, int j) {
            return dx2[static_cast<std::size_t>(i) * M + j % M] +
                   dy2[static_cast<std::size_t>(i) * M + j / M];
        };
        std::vector<double> demand(static_cast<std::size_t>(m), 1.0 / static_cast<double>(m));
        const SimplexResult sol = solve_transportation<decltype(cost)&>(src.w, demand, cost);
        west = std::sqrt(std::max(0.0, sol.cost));
        (void)n;
    } else {
        if (static_cast<std::int64_t>(mu.size()) * cells > 400'000'000)
            throw ResourceError("w2_torus_bracket: instance too large even for entropic");
        west = entropic_w2_grid(mu, M);
    }

    W2Bracket b;
    b.method = method;
    b.grid_resolution = M;
    b.lower = std::max(0.0, west - delta);
    b.upper = west + delta;
    return b;
}

double packing_lower_bound(std::uint64_t N, int d) {
    if (N < 1 || d < 1) throw SpecError("packing_lower_bound: need N >= 1, d >= 1");
    const double dd = static_cast<double>(d);
    const double omega = std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0);
    const double eps = std::pow(omega * (dd + 1.0), -1.0 / dd);
    return dd / (dd + 1.0) * eps * std::pow(static_cast<double>(N), -1.0 / dd);
}

Discrepancy1D interval_discrepancy_1d(const PointSet& ps) {
    if (ps.dim() != 1) throw SpecError("star discrepancy: only d = 1 is supported");
    const std::size_t n = ps.size();
    if (n == 0) throw SpecError("star discrepancy: empty point set");
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = ps.at(i)[0];
    std::sort(ys.begin(), ys.end());

    Discrepancy1D out;
    // anchored intervals [0, x): max_i max(i/N - x_(i), x_(i) - (i-1)/N)
    for (std::size_t i = 0; i < n; ++i) {
        const double up = static_cast<double>(i + 1) / static_cast<double>(n) - ys[i];
        const double dn = ys[i] - static_cast<double>(i) / static_cast<double>(n);
        out.anchored_star = std::max({out.anchored_star, up, dn});
    }

    // all arcs: doubled array, c consecutive points
    std::vector<double> z(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = ys[i];
        z[n + i] = ys[i] + 1.0;
    }
    double overcount = 0.0, undercount = 0.0;
#pragma omp parallel for schedule(static) reduction(max : overcount, undercount)
    for (std::ptrdiff_t c = 1; c <= static_cast<std::ptrdiff_t>(n); ++c) {
        // tightest closed arc holding c points vs mass c/n
        double minlen = 2.0;
        for (std::size_t i = 0; i < n; ++i)
            minlen = std::min(minlen, z[i + static_cast<std::size_t>(c) - 1] - z[i]);
        overcount = std::max(overcount, static_cast<double>(c) / static_cast<double>(n) - minlen);
        // widest open arc holding c-1 points vs its length
        double maxlen = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            maxlen = std::max(maxlen, z[i + static_cast<std::size_t>(c)] - z[i]);
        undercount = std::max(undercount, maxlen - static_cast<double>(c - 1) / static_cast<double>(n));
    }
    out.extreme = std::max({overcount, undercount, 0.0});
    return out;
}

double star_discrepancy_1d(const PointSet& ps) { return interval_discrepancy_1d(ps).extreme; }

} // namespace unif
