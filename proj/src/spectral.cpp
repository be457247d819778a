#include "uniformity/spectral.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace unif {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// first nonzero coordinate positive
bool lex_positive(std::span<const long long> k) {
    for (long long kj : k) {
        if (kj > 0) return true;
        if (kj < 0) return false;
    }
    return false;
}

double norm2_sq(std::span<const long long> k) {
    double s = 0.0;
    for (long long kj : k) s += static_cast<double>(kj) * static_cast<double>(kj);
    return s;
}

// Upper bound on the integral of x^s e^{-x^2 t} over [l, infinity).
double gauss_integral_bound(int s, double l, double t) {
    const double e = std::exp(-l * l * t);
    if (s == -2) return e / l;
    if (s == -1) return 0.5 * e * std::log1p(1.0 / (l * l * t));
    if (s == 0) return e / (2.0 * l * t);
    return std::pow(l, s - 1) * e / (2.0 * t) +
           (static_cast<double>(s - 1) / (2.0 * t)) * gauss_integral_bound(s - 2, l, t);
}

} // namespace

std::string formula_id_name(FormulaId id) {
    switch (id) {
    case FormulaId::heat_w2: return "heat_w2";
    case FormulaId::peyre_1d: return "peyre_1d";
    case FormulaId::random_walk: return "random_walk";
    case FormulaId::lattice_sum: return "lattice_sum";
    }
    return "heat_w2";
}

FormulaId formula_id_from_name(const std::string& name) {
    if (name == "heat_w2") return FormulaId::heat_w2;
    if (name == "peyre_1d") return FormulaId::peyre_1d;
    if (name == "random_walk") return FormulaId::random_walk;
    if (name == "lattice_sum") return FormulaId::lattice_sum;
    throw SpecError("unknown formula id '" + name + "'");
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["t_star"] = t_star;
    j["truncation_tail"] = truncation_tail;
    j["t_grid"] = t_grid;
    j["formula_id"] = formula_id_name(formula_id);
    j["source"] = source;
    return j.dump();
}

BoundReport BoundReport::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BoundReport r;
    r.value = j.at("value").get<double>();
    r.t_star = j.at("t_star").get<double>();
    r.truncation_tail = j.at("truncation_tail").get<double>();
    r.t_grid = j.value("t_grid", std::string());
    r.formula_id = formula_id_from_name(j.at("formula_id").get<std::string>());
    r.source = j.value("source", std::string());
    return r;
}

std::complex<double> exponential_sum(const PointSet& ps, std::span<const long long> k) {
    if (static_cast<int>(k.size()) != ps.dim()) throw SpecError("exponential_sum: dimension mismatch");
    const std::size_t n = ps.size();
    const int d = ps.dim();
    const double* xs = ps.raw().data();
    const auto term = [&](std::size_t i) -> std::complex<double> {
        double phase = 0.0;
        for (int j = 0; j < d; ++j)
            phase += static_cast<double>(k[static_cast<std::size_t>(j)]) * xs[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
        const double w = kTwoPi * phase;
        return {std::cos(w), std::sin(w)};
    };
    return blocked_sum_complex(n, term) / static_cast<double>(n);
}

std::complex<double> exponential_sum_serial(const PointSet& ps, std::span<const long long> k) {
    if (static_cast<int>(k.size()) != ps.dim()) throw SpecError("exponential_sum: dimension mismatch");
    const std::size_t n = ps.size();
    const int d = ps.dim();
    const double* xs = ps.raw().data();
    return serial_sum_complex(n, [&](std::size_t i) -> std::complex<double> {
               double phase = 0.0;
               for (int j = 0; j < d; ++j)
                   phase += static_cast<double>(k[static_cast<std::size_t>(j)]) * xs[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
               const double w = kTwoPi * phase;
               return {std::cos(w), std::sin(w)};
           }) /
           static_cast<double>(n);
}

Spectrum build_spectrum(const PointSet& ps, std::uint32_t L) {
    const int d = ps.dim();
    Spectrum spec(d, L, "points:" + ps.label());
    const std::size_t side = 2 * static_cast<std::size_t>(L) + 1;
    const std::size_t box = spec.box_size();
    const std::size_t n = ps.size();
    const double* xs = ps.raw().data();

    // Kahan state per coefficient, combined over point blocks in order.
    std::vector<double> sre(box, 0.0), cre(box, 0.0), sim(box, 0.0), cim(box, 0.0);

    constexpr std::size_t kPointBlock = 512; // fixed, never thread-dependent
    std::vector<std::vector<std::complex<double>>> tab(static_cast<std::size_t>(d));
    for (auto& t : tab) t.assign(side * kPointBlock, {0.0, 0.0});

    std::vector<std::size_t> half; // lexicographically positive frequencies
    half.reserve(box / 2);
    {
        std::vector<long long> k(static_cast<std::size_t>(d));
        for (std::size_t pos = 0; pos < box; ++pos) {
            spec.unindex(pos, k);
            if (lex_positive(k)) half.push_back(pos);
        }
    }

    for (std::size_t lo = 0; lo < n; lo += kPointBlock) {
        const std::size_t hi = std::min(n, lo + kPointBlock);
        const std::size_t nb = hi - lo;
        // axis tables, layout [k + L][local point]
#pragma omp parallel for schedule(static) collapse(2)
        for (int j = 0; j < d; ++j) {
            for (std::ptrdiff_t kk = 0; kk <= 2 * static_cast<std::ptrdiff_t>(L); ++kk) {
                const double freq = static_cast<double>(kk - static_cast<std::ptrdiff_t>(L));
                auto* row = tab[static_cast<std::size_t>(j)].data() + static_cast<std::size_t>(kk) * kPointBlock;
                for (std::size_t i = 0; i < nb; ++i) {
                    const double w = kTwoPi * freq * xs[(lo + i) * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
                    row[i] = {std::cos(w), std::sin(w)};
                }
            }
        }

#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t hidx = 0; hidx < static_cast<std::ptrdiff_t>(half.size()); ++hidx) {
            const std::size_t pos = half[static_cast<std::size_t>(hidx)];
            // decode digits of pos into per-axis table offsets
            std::size_t rem = pos;
            std::array<const std::complex<double>*, 8> rows{};
            for (int j = d - 1; j >= 0; --j) {
                rows[static_cast<std::size_t>(j)] =
                    tab[static_cast<std::size_t>(j)].data() + (rem % side) * kPointBlock;
                rem /= side;
            }
            std::complex<double> s{0.0, 0.0};
            for (std::size_t i = 0; i < nb; ++i) {
                std::complex<double> z = rows[0][i];
                for (int j = 1; j < d; ++j) z *= rows[static_cast<std::size_t>(j)][i];
                s += z;
            }
            // Neumaier update of the per-coefficient accumulator
            const auto fold = [](double& sum, double& comp, double x) {
                const double t = sum + x;
                if (std::abs(sum) >= std::abs(x))
                    comp += (sum - t) + x;
                else
                    comp += (x - t) + sum;
                sum = t;
            };
            fold(sre[pos], cre[pos], s.real());
            fold(sim[pos], cim[pos], s.imag());
        }
    }

    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t pos : half) {
        const std::complex<double> c{(sre[pos] + cre[pos]) * inv, (sim[pos] + cim[pos]) * inv};
        spec.coeffs[pos] = c;
        spec.coeffs[box - 1 - pos] = std::conj(c); // k -> -k reverses the flat index
    }
    std::vector<long long> zero(static_cast<std::size_t>(d), 0);
    spec.set(zero, {1.0, 0.0});
    return spec;
}

Spectrum build_spectrum_serial(const PointSet& ps, std::uint32_t L) {
    const int d = ps.dim();
    Spectrum spec(d, L, "points:" + ps.label());
    const std::size_t box = spec.box_size();
    std::vector<long long> k(static_cast<std::size_t>(d));
    for (std::size_t pos = 0; pos < box; ++pos) {
        spec.unindex(pos, k);
        if (!lex_positive(k)) continue;
        const auto c = exponential_sum_serial(ps, k);
        spec.coeffs[pos] = c;
        spec.coeffs[box - 1 - pos] = std::conj(c);
    }
    std::vector<long long> zero(static_cast<std::size_t>(d), 0);
    spec.set(zero, {1.0, 0.0});
    return spec;
}

Spectrum kronecker_bound_spectrum(const std::vector<Frac128>& alpha, std::uint64_t N, std::uint32_t L) {
    const int d = static_cast<int>(alpha.size());
    Spectrum spec(d, L, "kronecker-certified-bound");
    const std::size_t box = spec.box_size();
    std::vector<long long> k(static_cast<std::size_t>(d));
#pragma omp parallel for schedule(static) firstprivate(k)
    for (std::ptrdiff_t pos = 0; pos < static_cast<std::ptrdiff_t>(box); ++pos) {
        spec.unindex(static_cast<std::size_t>(pos), k);
        bool zero = true;
        for (long long kj : k) zero = zero && kj == 0;
        if (zero) {
            spec.coeffs[static_cast<std::size_t>(pos)] = {1.0, 0.0};
            continue;
        }
        Frac128 dot{};
        for (int j = 0; j < d; ++j)
            dot = frac_add(dot, frac_mul_signed(alpha[static_cast<std::size_t>(j)], k[static_cast<std::size_t>(j)]));
        const double dist = dist_nearest_int(dot);
        double v = 1.0;
        if (dist > 0.0) v = std::min(1.0, 2.0 / (static_cast<double>(N) * dist));
        spec.coeffs[static_cast<std::size_t>(pos)] = {v, 0.0};
    }
    return spec;
}

BoundReport zinterhof_diaphony(const Spectrum& spec) {
    if (spec.dim != 1)
        throw SpecError("diaphony diverges for d >= 2: Dirac deltas are not in the Sobolev space "
                        "H^-1; use heat_diaphony with t > 0 instead");
    if (spec.cutoff < 1) throw SpecError("diaphony: cutoff must be >= 1");
    const std::size_t box = spec.box_size();
    const long long L = static_cast<long long>(spec.cutoff);
    const double partial = blocked_sum(box, [&](std::size_t pos) {
        const long long k = static_cast<long long>(pos) - L;
        if (k == 0) return 0.0;
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        return std::norm(spec.coeffs[pos]) / kk;
    });
    const double tail = spec.outside_bound * spec.outside_bound * 2.0 / static_cast<double>(L);
    BoundReport r;
    r.value = std::sqrt(partial + tail);
    r.truncation_tail = tail;
    r.formula_id = FormulaId::peyre_1d;
    r.source = spec.source;
    return r;
}

double heat_diaphony_tail(const Spectrum& spec, double t) {
    if (!(t > 0.0)) throw SpecError("heat_diaphony: t must be > 0");
    const double L = static_cast<double>(spec.cutoff);
    const double ob2 = spec.outside_bound * spec.outside_bound;
    if (ob2 == 0.0) return 0.0;
    if (spec.dim == 1) {
        // e^{-k^2 t} <= e^{-(L+1)^2 t} beyond the box, and sum 1/k^2 <= 2/L
        return ob2 * std::exp(-(L + 1.0) * (L + 1.0) * t) * 2.0 / L;
    }
    return ob2 * gaussian_lattice_tail(-2, spec.dim, t, L);
}

double heat_diaphony(const Spectrum& spec, double t) {
    if (!(t > 0.0)) throw SpecError("heat_diaphony: t must be > 0");
    const std::size_t box = spec.box_size();
    const int d = spec.dim;
    const std::size_t side = 2 * static_cast<std::size_t>(spec.cutoff) + 1;
    const long long L = static_cast<long long>(spec.cutoff);
    const double partial = blocked_sum(box, [&](std::size_t pos) {
        std::size_t rem = pos;
        double n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const long long kj = static_cast<long long>(rem % side) - L;
            n2 += static_cast<double>(kj) * static_cast<double>(kj);
            rem /= side;
        }
        if (n2 == 0.0) return 0.0;
        return std::exp(-n2 * t) / n2 * std::norm(spec.coeffs[pos]);
    });
    return std::sqrt(partial + heat_diaphony_tail(spec, t));
}

BoundReport w2_upper_bound(const Spectrum& spec, std::span<const double> t_grid, double c_smooth) {
    if (t_grid.empty()) throw SpecError("w2_upper_bound: empty t grid");
    if (!(c_smooth > 0.0)) throw SpecError("w2_upper_bound: c_smooth must be > 0");
    BoundReport r;
    r.formula_id = FormulaId::heat_w2;
    r.source = spec.source;
    double best = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw SpecError("w2_upper_bound: grid entries must be > 0");
        const double v = c_smooth * std::sqrt(t) + heat_diaphony(spec, t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    r.value = best;
    r.t_star = best_t;
    r.truncation_tail = heat_diaphony_tail(spec, best_t);
    std::ostringstream os;
    os << "grid[n=" << t_grid.size() << "," << t_grid.front() << ".." << t_grid.back() << "]";
    r.t_grid = os.str();
    return r;
}

std::vector<double> default_t_grid(std::uint64_t N, int points) {
    if (points < 2) throw SpecError("t grid needs at least 2 points");
    const double nn = static_cast<double>(std::max<std::uint64_t>(N, 2));
    const double tmin = 1.0 / (nn * nn);
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double l0 = std::log(tmin);
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(l0 * (1.0 - static_cast<double>(i) / static_cast<double>(points - 1)));
    return grid;
}

double lattice_shell_constant(int d) {
    if (d < 1) throw SpecError("lattice_shell_constant: d must be >= 1");
    // Unit cubes around shell points are disjoint and sit in the annulus
    // [l - sqrt(d)/2, l + 1 + sqrt(d)/2]; bounding its volume by the mean
    // value theorem and using l + c <= l (1 + c) for l >= 1 gives
    //   count(l) <= omega_d d (1 + sqrt(d)) (2 + sqrt(d)/2)^{d-1} l^{d-1}.
    const double dd = static_cast<double>(d);
    const double omega = std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0);
    return omega * dd * (1.0 + std::sqrt(dd)) * std::pow(2.0 + std::sqrt(dd) / 2.0, dd - 1.0);
}

double gaussian_lattice_tail(int m, int d, double t, double L) {
    if (!(t > 0.0) || L < 1.0) throw SpecError("gaussian_lattice_tail: need t > 0, L >= 1");
    const int s = m + d - 1;
    const double cd = lattice_shell_constant(d);
    const double factor = m > 0 ? std::ldexp(1.0, m) : 1.0; // (l+1)^m <= 2^m l^m for l >= 1
    const double x0 = s > 0 ? std::sqrt(static_cast<double>(s) / (2.0 * t)) : 0.0;
    const double l0 = std::max(L, std::ceil(x0));
    KahanSum explicit_part;
    for (double l = L; l < l0; l += 1.0)
        explicit_part.add(std::pow(l, s) * std::exp(-l * l * t));
    const double head = std::pow(l0, s) * std::exp(-l0 * l0 * t);
    return cd * factor * (explicit_part.value() + head + gauss_integral_bound(s, l0, t));
}

namespace {

double lattice_sum_impl(int m, int d, double t, std::uint32_t L, bool parallel) {
    if (m + d < 0) throw SpecError("gaussian_lattice_sum: m + d must be >= 0");
    if (!(t > 0.0)) throw SpecError("gaussian_lattice_sum: t must be > 0");
    // extend until e^{-L^2 t} < 1e-16 and the certified remainder is < 1e-12
    std::uint32_t Leff = std::max<std::uint32_t>(L, static_cast<std::uint32_t>(std::ceil(std::sqrt(37.0 / t))));
    for (int attempt = 0; attempt < 8; ++attempt) {
        if (gaussian_lattice_tail(m, d, t, static_cast<double>(Leff)) < 1e-12) break;
        Leff *= 2;
    }
    if (gaussian_lattice_tail(m, d, t, static_cast<double>(Leff)) >= 1e-12)
        throw ResourceError("gaussian_lattice_sum: cannot certify the remainder; t too small");

    const std::size_t side = 2 * static_cast<std::size_t>(Leff) + 1;
    std::size_t box = 1;
    for (int j = 0; j < d; ++j) {
        if (box > 100'000'000 / side) throw ResourceError("gaussian_lattice_sum: box exceeds 1e8 points");
        box *= side;
    }
    const long long Ll = static_cast<long long>(Leff);
    const double half_m = 0.5 * static_cast<double>(m);
    const auto term = [&](std::size_t pos) {
        std::size_t rem = pos;
        double n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            const long long kj = static_cast<long long>(rem % side) - Ll;
            n2 += static_cast<double>(kj) * static_cast<double>(kj);
            rem /= side;
        }
        if (n2 == 0.0) return 0.0;
        return std::exp(-n2 * t) * std::pow(n2, half_m);
    };
    return parallel ? blocked_sum(box, term) : serial_sum(box, term);
}

} // namespace

double gaussian_lattice_sum(int m, int d, double t, std::uint32_t L) {
    return lattice_sum_impl(m, d, t, L, true);
}

double gaussian_lattice_sum_serial(int m, int d, double t, std::uint32_t L) {
    return lattice_sum_impl(m, d, t, L, false);
}

BoundReport random_walk_w2_bound(double alpha, std::uint64_t steps, std::uint64_t cutoff) {
    if (cutoff < 1) throw SpecError("random_walk_w2_bound: cutoff must be >= 1");
    const Frac128 a = Frac128::from_double(alpha);
    const double partial = blocked_sum(cutoff, [&](std::size_t i) {
        const std::uint64_t l = i + 1;
        const double phase = frac_mul(a, l).to_double();
        const double c = std::cos(kTwoPi * phase);
        const double c2 = c * c;
        const double p = steps == 0 ? 1.0 : std::pow(c2, static_cast<double>(steps));
        return 2.0 * p / (static_cast<double>(l) * static_cast<double>(l));
    });
    const double tail = 2.0 / static_cast<double>(cutoff);
    BoundReport r;
    r.value = std::sqrt(partial + tail);
    r.truncation_tail = tail;
    r.formula_id = FormulaId::random_walk;
    std::ostringstream os;
    os << "random_walk:alpha=" << alpha << ",steps=" << steps;
    r.source = os.str();
    return r;
}

} // namespace unif
