#include "uniformity/integration.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace unif {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

// integral over the unit ball of g(|u|): sigma_d * int_0^1 g(s) s^{d-1} ds
double radial_factor(int d) { return d * unit_ball_volume(d); }

// int_0^1 s^{d-1} (1-s)^a ds
double beta_int(int d, int a) {
    return std::tgamma(d) * std::tgamma(a + 1.0) / std::tgamma(d + a + 1.0);
}

double min_atom_distance(std::span<const double> x, const PointSet& atoms) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        best = std::min(best, wrap_distance(x, atoms.at(i)));
    return best;
}

} // namespace

TestFunction TestFunction::trig(std::vector<long long> k) {
    TestFunction f;
    f.family = Family::trig_monomial;
    f.dim = static_cast<int>(k.size());
    f.freq = std::move(k);
    return f;
}

TestFunction TestFunction::product(std::vector<long long> k) {
    TestFunction f;
    f.family = Family::product_cosine;
    f.dim = static_cast<int>(k.size());
    f.freq = std::move(k);
    return f;
}

TestFunction TestFunction::make_bump(std::vector<double> c, double radius, double height) {
    if (!(radius > 0.0) || radius > 0.5) throw SpecError("bump: radius must lie in (0, 1/2]");
    TestFunction f;
    f.family = Family::bump;
    f.dim = static_cast<int>(c.size());
    f.center = std::move(c);
    f.radius = radius;
    f.height = height;
    return f;
}

TestFunction TestFunction::extremal_fn(PointSet atoms, double eps) {
    if (!(eps > 0.0) || eps > 0.5) throw SpecError("extremal: eps must lie in (0, 1/2]");
    TestFunction f;
    f.family = Family::extremal;
    f.dim = atoms.dim();
    f.atoms = std::move(atoms);
    f.eps = eps;
    return f;
}

TestFunction TestFunction::parse(const std::string& text, int dim) {
    const auto colon = text.find(':');
    const std::string fam = text.substr(0, colon);
    std::vector<long long> k;
    std::vector<double> center;
    double radius = 0.0625, height = 1.0, eps = 0.05;
    bool relative = false;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw SpecError("function param '" + item + "' needs key=value");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            if (key == "k") {
                std::stringstream ks(val);
                std::string cell;
                while (std::getline(ks, cell, '|')) k.push_back(std::stoll(cell));
            } else if (key == "center") {
                std::stringstream cs(val);
                std::string cell;
                while (std::getline(cs, cell, '|')) center.push_back(std::stod(cell));
            } else if (key == "radius") {
                radius = std::stod(val);
            } else if (key == "height") {
                height = std::stod(val);
            } else if (key == "eps") {
                eps = std::stod(val);
            } else if (key == "relative") {
                relative = val == "1" || val == "true";
            } else {
                throw SpecError("unknown function param '" + key + "'");
            }
        }
    }
    if (fam == "trig" || fam == "trig_monomial") {
        if (k.empty()) k.assign(static_cast<std::size_t>(dim), 1);
        if (static_cast<int>(k.size()) != dim) throw SpecError("trig: k needs d entries");
        return trig(k);
    }
    if (fam == "product" || fam == "product_cosine") {
        if (k.empty()) k.assign(static_cast<std::size_t>(dim), 1);
        if (static_cast<int>(k.size()) != dim) throw SpecError("product: k needs d entries");
        return product(k);
    }
    if (fam == "bump") {
        if (center.empty()) center.assign(static_cast<std::size_t>(dim), 0.5);
        if (static_cast<int>(center.size()) != dim) throw SpecError("bump: center needs d entries");
        return make_bump(center, radius, height);
    }
    if (fam == "extremal") {
        TestFunction f;
        f.family = Family::extremal;
        f.dim = dim;
        f.eps = eps;
        f.eps_relative = relative;
        return f; // atoms bound later, per generated point set
    }
    throw SpecError("unknown function family '" + fam + "'");
}

std::string TestFunction::label() const {
    std::ostringstream os;
    switch (family) {
    case Family::trig_monomial: os << "trig:k="; break;
    case Family::product_cosine: os << "product:k="; break;
    case Family::bump:
        os << "bump:radius=" << radius << ",height=" << height;
        return os.str();
    case Family::extremal:
        os << "extremal:eps=" << eps << (eps_relative ? ",relative=1" : "");
        return os.str();
    }
    for (std::size_t i = 0; i < freq.size(); ++i) os << (i ? "|" : "") << freq[i];
    return os.str();
}

double TestFunction::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim) throw SpecError("test function: dimension mismatch");
    switch (family) {
    case Family::trig_monomial: {
        double phase = 0.0;
        for (int j = 0; j < dim; ++j) phase += static_cast<double>(freq[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
        return std::cos(kTwoPi * phase);
    }
    case Family::product_cosine: {
        double v = 1.0;
        for (int j = 0; j < dim; ++j)
            v *= std::cos(kTwoPi * static_cast<double>(freq[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)]);
        return v;
    }
    case Family::bump: {
        const double s = wrap_distance(x, std::span<const double>(center)) / radius;
        if (s >= 1.0) return 0.0;
        const double t = 1.0 - s;
        return height * t * t * t;
    }
    case Family::extremal: {
        if (!atoms) throw SpecError("extremal: atoms not bound");
        return std::min(eps, min_atom_distance(x, *atoms));
    }
    }
    return 0.0;
}

double TestFunction::gradient_norm(std::span<const double> x) const {
    switch (family) {
    case Family::trig_monomial: {
        double phase = 0.0, k2 = 0.0;
        for (int j = 0; j < dim; ++j) {
            phase += static_cast<double>(freq[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
            k2 += static_cast<double>(freq[static_cast<std::size_t>(j)]) * static_cast<double>(freq[static_cast<std::size_t>(j)]);
        }
        return kTwoPi * std::sqrt(k2) * std::abs(std::sin(kTwoPi * phase));
    }
    case Family::product_cosine: {
        double g2 = 0.0;
        for (int j = 0; j < dim; ++j) {
            double term = kTwoPi * static_cast<double>(freq[static_cast<std::size_t>(j)]) *
                          std::sin(kTwoPi * static_cast<double>(freq[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)]);
            for (int i = 0; i < dim; ++i)
                if (i != j)
                    term *= std::cos(kTwoPi * static_cast<double>(freq[static_cast<std::size_t>(i)]) * x[static_cast<std::size_t>(i)]);
            g2 += term * term;
        }
        return std::sqrt(g2);
    }
    case Family::bump: {
        const double s = wrap_distance(x, std::span<const double>(center)) / radius;
        if (s >= 1.0) return 0.0;
        const double t = 1.0 - s;
        return 3.0 * height / radius * t * t;
    }
    case Family::extremal: {
        if (!atoms) throw SpecError("extremal: atoms not bound");
        const double md = min_atom_distance(x, *atoms);
        return (md > 0.0 && md < eps) ? 1.0 : 0.0;
    }
    }
    return 0.0;
}

namespace {

// midpoint tensor quadrature of f, |grad f| and |grad f|^2; d <= 2 only
struct QuadSums {
    double integral = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
};

QuadSums quadrature_sums(const TestFunction& f, int res) {
    if (f.dim > 2) throw ResourceError("quadrature stats limited to d <= 2");
    const std::size_t r = static_cast<std::size_t>(res);
    const std::size_t nodes = f.dim == 1 ? r : r * r;
    const double cell = 1.0 / static_cast<double>(nodes);
    QuadSums q;
    q.integral = cell * blocked_sum(nodes, [&](std::size_t i) {
        double x[2];
        if (f.dim == 1) {
            x[0] = (static_cast<double>(i) + 0.5) / static_cast<double>(r);
        } else {
            x[0] = (static_cast<double>(i / r) + 0.5) / static_cast<double>(r);
            x[1] = (static_cast<double>(i % r) + 0.5) / static_cast<double>(r);
        }
        return f(std::span<const double>(x, static_cast<std::size_t>(f.dim)));
    });
    q.g1 = cell * blocked_sum(nodes, [&](std::size_t i) {
        double x[2];
        if (f.dim == 1) {
            x[0] = (static_cast<double>(i) + 0.5) / static_cast<double>(r);
        } else {
            x[0] = (static_cast<double>(i / r) + 0.5) / static_cast<double>(r);
            x[1] = (static_cast<double>(i % r) + 0.5) / static_cast<double>(r);
        }
        return f.gradient_norm(std::span<const double>(x, static_cast<std::size_t>(f.dim)));
    });
    q.g2 = cell * blocked_sum(nodes, [&](std::size_t i) {
        double x[2];
        if (f.dim == 1) {
            x[0] = (static_cast<double>(i) + 0.5) / static_cast<double>(r);
        } else {
            x[0] = (static_cast<double>(i / r) + 0.5) / static_cast<double>(r);
            x[1] = (static_cast<double>(i % r) + 0.5) / static_cast<double>(r);
        }
        const double g = f.gradient_norm(std::span<const double>(x, static_cast<std::size_t>(f.dim)));
        return g * g;
    });
    return q;
}

bool extremal_balls_disjoint(const PointSet& atoms, double eps) {
    const std::size_t n = atoms.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (wrap_distance(atoms.at(i), atoms.at(j)) < 2.0 * eps) return false;
    return true;
}

} // namespace

GradientStats TestFunction::stats(int resolution) const {
    GradientStats s;
    const int d = dim;
    switch (family) {
    case Family::trig_monomial: {
        double k2 = 0.0;
        for (long long kj : freq) k2 += static_cast<double>(kj) * static_cast<double>(kj);
        if (k2 == 0.0) {
            s.true_integral = 1.0;
            return s; // constant 1
        }
        const double K = std::sqrt(k2);
        s.grad_inf = kTwoPi * K;
        s.grad_l2 = kTwoPi * K / std::numbers::sqrt2;
        s.grad_l1 = 4.0 * K; // 2 pi K * mean |sin| = 2 pi K * 2/pi
        s.true_integral = 0.0;
        return s;
    }
    case Family::product_cosine: {
        std::vector<long long> active;
        for (long long kj : freq)
            if (kj != 0) active.push_back(kj);
        if (active.empty()) {
            s.true_integral = 1.0;
            return s;
        }
        double k2 = 0.0;
        long long kmax = 0;
        for (long long kj : active) {
            k2 += static_cast<double>(kj) * static_cast<double>(kj);
            kmax = std::max(kmax, std::llabs(kj));
        }
        const int ds = static_cast<int>(active.size());
        s.grad_inf = kTwoPi * static_cast<double>(kmax);
        s.grad_l2 = kTwoPi * std::sqrt(k2) / std::pow(2.0, ds / 2.0);
        s.true_integral = 0.0;
        if (ds == 1) {
            s.grad_l1 = 4.0 * static_cast<double>(kmax);
        } else {
            s.grad_l1 = quadrature_sums(*this, resolution).g1;
        }
        return s;
    }
    case Family::bump: {
        const double h = height, r = radius;
        const double sf = radial_factor(d);
        s.grad_inf = 3.0 * std::abs(h) / r;
        s.grad_l2 = 3.0 * std::abs(h) / r * std::pow(r, d / 2.0) * std::sqrt(sf * beta_int(d, 4));
        s.grad_l1 = 3.0 * std::abs(h) / r * std::pow(r, d) * sf * beta_int(d, 2);
        s.true_integral = h * std::pow(r, d) * sf * beta_int(d, 3);
        return s;
    }
    case Family::extremal: {
        if (!atoms) throw SpecError("extremal: atoms not bound");
        s.grad_inf = 1.0;
        if (extremal_balls_disjoint(*atoms, eps)) {
            const double n = static_cast<double>(atoms->size());
            const double vol = n * unit_ball_volume(d) * std::pow(eps, d);
            s.grad_l1 = vol;
            s.grad_l2 = std::sqrt(vol);
            s.true_integral = eps - n * unit_ball_volume(d) * std::pow(eps, d + 1) / (d + 1.0);
            return s;
        }
        const QuadSums q = quadrature_sums(*this, resolution);
        s.grad_l1 = q.g1;
        s.grad_l2 = std::sqrt(q.g2);
        s.true_integral = q.integral;
        return s;
    }
    }
    return s;
}

GradientStats eval_function_stats(const TestFunction& f, int resolution) { return f.stats(resolution); }

double qmc_error(const TestFunction& f, const PointSet& ps) {
    if (f.dim != ps.dim()) throw SpecError("qmc_error: dimension mismatch");
    const GradientStats s = f.stats();
    const double mean = blocked_sum(ps.size(), [&](std::size_t i) { return f(ps.at(i)); }) /
                        static_cast<double>(ps.size());
    return std::abs(s.true_integral - mean);
}

double holder_refined_bound(double grad_inf, double grad_lx, std::uint64_t N, int d, double c) {
    if (d < 1 || N < 1) throw SpecError("refined bound: need d >= 1, N >= 1");
    if (!(c > 0.0)) throw SpecError("refined bound: c must be > 0");
    const double dd = static_cast<double>(d);
    return c * std::pow(grad_inf, (dd - 1.0) / dd) * std::pow(grad_lx, 1.0 / dd) *
           std::pow(static_cast<double>(N), -1.0 / dd);
}

double l2_refined_bound(const GradientStats& s, std::uint64_t N, int d, double c) {
    if (d < 2) throw SpecError("L2-refined bound requires d >= 2");
    return holder_refined_bound(s.grad_inf, s.grad_l2, N, d, c);
}

double l1_refined_bound(const GradientStats& s, std::uint64_t N, int d, double c) {
    const std::uint64_t m = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(N), 1.0 / d)));
    std::uint64_t total = 1;
    for (int j = 0; j < d; ++j) total *= m;
    if (total != N) throw SpecError("L1-refined bound: N must be a perfect d-th power");
    return holder_refined_bound(s.grad_inf, s.grad_l1, N, d, c);
}

double classic_bound(const GradientStats& s, std::uint64_t N, int d, double c) {
    return c * s.grad_inf * std::pow(static_cast<double>(N), -1.0 / static_cast<double>(d));
}

double local_l1_bound(const TestFunction& f, int m, int d, double c) {
    if (d != f.dim) throw SpecError("local_l1_bound: dimension mismatch");
    if (d > 2) throw ResourceError("local_l1_bound: quadrature limited to d <= 2");
    if (m < 1) throw SpecError("local_l1_bound: m must be >= 1");
    const int per_cell = std::max(4, 1024 / m);
    const std::size_t cells = d == 1 ? static_cast<std::size_t>(m)
                                     : static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
    const std::size_t sub = d == 1 ? static_cast<std::size_t>(per_cell)
                                   : static_cast<std::size_t>(per_cell) * static_cast<std::size_t>(per_cell);
    const double node_vol = 1.0 / (static_cast<double>(cells) * static_cast<double>(sub));

    std::vector<double> cell_mass(cells, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t cell = 0; cell < static_cast<std::ptrdiff_t>(cells); ++cell) {
        KahanSum l1;
        double x[2];
        for (std::size_t q = 0; q < sub; ++q) {
            if (d == 1) {
                x[0] = (static_cast<double>(cell) +
                        (static_cast<double>(q) + 0.5) / static_cast<double>(per_cell)) /
                       static_cast<double>(m);
            } else {
                const std::size_t cx = static_cast<std::size_t>(cell) / static_cast<std::size_t>(m);
                const std::size_t cy = static_cast<std::size_t>(cell) % static_cast<std::size_t>(m);
                const std::size_t qx = q / static_cast<std::size_t>(per_cell);
                const std::size_t qy = q % static_cast<std::size_t>(per_cell);
                x[0] = (static_cast<double>(cx) + (static_cast<double>(qx) + 0.5) / per_cell) / m;
                x[1] = (static_cast<double>(cy) + (static_cast<double>(qy) + 0.5) / per_cell) / m;
            }
            l1.add(f.gradient_norm(std::span<const double>(x, static_cast<std::size_t>(d))));
        }
        cell_mass[static_cast<std::size_t>(cell)] = l1.value() * node_vol;
    }

    const GradientStats s = f.stats();
    // rescale the cell masses to the global L1 so the quadrature drift
    // cannot flip the Hoelder direction against l1_refined_bound
    KahanSum raw;
    for (double v : cell_mass) raw.add(v);
    const double scale = raw.value() > 0.0 ? s.grad_l1 / raw.value() : 0.0;
    KahanSum total;
    for (double v : cell_mass) total.add(std::pow(v * scale, 1.0 / d));

    const double N = std::pow(static_cast<double>(m), d);
    return c * std::pow(s.grad_inf, (static_cast<double>(d) - 1.0) / d) / N * total.value();
}

std::pair<double, double> centered_poincare_check(const TestFunction& f, int d) {
    if (d != f.dim) throw SpecError("centered check: dimension mismatch");
    const GradientStats s = f.stats();
    std::vector<double> center(static_cast<std::size_t>(d), 0.5);
    const double lhs = std::abs(s.true_integral - f(center));
    const double rhs = std::pow(s.grad_inf, (static_cast<double>(d) - 1.0) / d) *
                       std::pow(s.grad_l1, 1.0 / static_cast<double>(d));
    return {lhs, rhs};
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string error_records_csv(std::span<const ErrorRecord> recs) {
    std::ostringstream os;
    os << "N,measured,classic,l2_refined,l1_refined,local_l1,l1_form_ratio\n";
    for (const ErrorRecord& r : recs) {
        os << r.N << ',' << fmt17(r.measured) << ',' << fmt17(r.classic) << ',' << fmt17(r.l2_refined)
           << ',' << fmt17(r.l1_refined) << ',' << fmt17(r.local_l1) << ',' << fmt17(r.l1_form_ratio)
           << "\n";
    }
    return os.str();
}

std::vector<ErrorRecord> error_records_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("N,measured", 0) != 0)
        throw SpecError("error records CSV: bad header");
    std::vector<ErrorRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        ErrorRecord r;
        unsigned long long n = 0;
        if (std::sscanf(line.c_str(), "%llu,%lg,%lg,%lg,%lg,%lg,%lg", &n, &r.measured, &r.classic,
                        &r.l2_refined, &r.l1_refined, &r.local_l1, &r.l1_form_ratio) != 7)
            throw SpecError("error records CSV: bad row");
        r.N = n;
        out.push_back(r);
    }
    return out;
}

std::string error_records_json(std::span<const ErrorRecord> recs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ErrorRecord& r : recs)
        arr.push_back({{"N", r.N},
                       {"measured", r.measured},
                       {"classic", r.classic},
                       {"l2_refined", r.l2_refined},
                       {"l1_refined", r.l1_refined},
                       {"local_l1", r.local_l1},
                       {"l1_form_ratio", r.l1_form_ratio}});
    return arr.dump();
}

std::vector<ErrorRecord> run_error_study(const SequenceSpec& spec, const TestFunction& f,
                                         std::span<const std::uint64_t> n_list) {
    std::vector<ErrorRecord> out(n_list.size());
    const int d = spec.dim;
    for (std::size_t idx = 0; idx < n_list.size(); ++idx) {
        const std::uint64_t N = n_list[idx];
        const PointSet ps = generate_n(spec, N);
        TestFunction fn = f;
        if (fn.family == TestFunction::Family::extremal && !fn.atoms) {
            fn.atoms = ps;
            fn.dim = ps.dim();
            if (f.eps_relative)
                fn.eps = f.eps * std::pow(static_cast<double>(N), -1.0 / d);
        }
        if (fn.dim != d) throw SpecError("error study: function/sequence dimension mismatch");
        const GradientStats s = fn.stats();
        ErrorRecord r;
        r.N = N;
        r.measured = qmc_error(fn, ps);
        r.classic = classic_bound(s, N, d);
        r.l2_refined = d >= 2 ? l2_refined_bound(s, N, d)
                              : holder_refined_bound(s.grad_inf, s.grad_l2, N, d);
        const std::uint64_t m = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(N), 1.0 / d)));
        std::uint64_t total = 1;
        for (int j = 0; j < d; ++j) total *= m;
        const bool is_pow = total == N;
        r.l1_refined = is_pow ? holder_refined_bound(s.grad_inf, s.grad_l1, N, d)
                              : std::numeric_limits<double>::quiet_NaN();
        const bool cheap_gradient =
            fn.family != TestFunction::Family::extremal || fn.atoms->size() <= 64;
        const bool want_local =
            spec.kind == SeqKind::regular_grid && d <= 2 && is_pow && m <= 64 && cheap_gradient;
        r.local_l1 = want_local ? local_l1_bound(fn, static_cast<int>(m), d)
                                : std::numeric_limits<double>::quiet_NaN();
        const double l1_form = holder_refined_bound(s.grad_inf, s.grad_l1, N, d);
        r.l1_form_ratio = l1_form > 0.0 ? r.measured / l1_form : std::numeric_limits<double>::quiet_NaN();
        out[idx] = r;
    }
    return out;
}

} // namespace unif
