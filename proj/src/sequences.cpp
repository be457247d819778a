#include "uniformity/sequences.hpp"

#include "uniformity/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace unif {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::uint64_t checked_pow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > UINT64_MAX / b) throw ResourceError("grid size overflows");
        r *= b;
    }
    return r;
}

} // namespace

void SequenceSpec::validate() const {
    if (dim < 1) throw SpecError("sequence: dimension must be >= 1");
    switch (kind) {
    case SeqKind::kronecker:
        if (!alpha_auto && static_cast<int>(alpha.size()) != dim)
            throw SpecError("kronecker: alpha needs d coordinates (or alpha=auto)");
        if (alpha_auto && (dim < 1 || dim > 3))
            throw SpecError("kronecker: vetted alpha only shipped for d <= 3; pass alpha explicitly");
        break;
    case SeqKind::van_der_corput:
        if (dim != 1) throw SpecError("van der Corput: d must be 1");
        if (base < 2) throw SpecError("van der Corput: base must be >= 2");
        break;
    case SeqKind::quadratic_residues:
        if (dim != 1) throw SpecError("quadratic residues: d must be 1");
        if (!is_prime(prime)) throw SpecError("quadratic residues: p must be prime");
        break;
    case SeqKind::regular_grid:
        if (side < 1) throw SpecError("regular grid: side m must be >= 1");
        checked_pow(side, dim);
        break;
    case SeqKind::random_uniform:
        if (!seed_set) throw SpecError("random: explicit 64-bit seed required");
        break;
    }
}

std::string SequenceSpec::label() const {
    std::ostringstream os;
    switch (kind) {
    case SeqKind::kronecker:
        os << "kronecker:d=" << dim;
        if (alpha_auto) {
            os << ",alpha=auto";
        } else {
            os << ",alpha=";
            for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "|" : "") << alpha[i];
        }
        break;
    case SeqKind::van_der_corput: os << "vdc:base=" << base; break;
    case SeqKind::quadratic_residues: os << "qr:p=" << prime; break;
    case SeqKind::regular_grid: os << "grid:d=" << dim << ",m=" << side; break;
    case SeqKind::random_uniform: os << "random:d=" << dim << ",seed=" << seed; break;
    }
    return os.str();
}

SequenceSpec SequenceSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind_s = text.substr(0, colon);
    SequenceSpec spec;
    if (kind_s == "kronecker") {
        spec.kind = SeqKind::kronecker;
        spec.alpha_auto = true; // default, overridden by alpha=...
    } else if (kind_s == "vdc" || kind_s == "van_der_corput") {
        spec.kind = SeqKind::van_der_corput;
    } else if (kind_s == "qr" || kind_s == "quadratic_residues") {
        spec.kind = SeqKind::quadratic_residues;
    } else if (kind_s == "grid" || kind_s == "regular_grid") {
        spec.kind = SeqKind::regular_grid;
        spec.side = 1;
    } else if (kind_s == "random" || kind_s == "random_uniform") {
        spec.kind = SeqKind::random_uniform;
    } else {
        throw SpecError("unknown sequence kind '" + kind_s + "'");
    }
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw SpecError("sequence param '" + item + "' needs key=value");
            const std::string key = item.substr(0, eq);
            const std::string val = item.substr(eq + 1);
            try {
                if (key == "d") {
                    spec.dim = std::stoi(val);
                } else if (key == "base" || key == "r") {
                    spec.base = std::stoull(val);
                } else if (key == "p") {
                    spec.prime = std::stoull(val);
                } else if (key == "m") {
                    spec.side = std::stoull(val);
                } else if (key == "seed") {
                    spec.seed = std::stoull(val);
                    spec.seed_set = true;
                } else if (key == "alpha") {
                    if (val == "auto") {
                        spec.alpha_auto = true;
                        spec.alpha.clear();
                    } else {
                        spec.alpha_auto = false;
                        spec.alpha.clear();
                        std::stringstream as(val);
                        std::string a;
                        while (std::getline(as, a, '|')) spec.alpha.push_back(std::stod(a));
                    }
                } else {
                    throw SpecError("unknown sequence param '" + key + "'");
                }
            } catch (const std::invalid_argument&) {
                throw SpecError("bad value for sequence param '" + key + "'");
            } catch (const std::out_of_range&) {
                throw SpecError("value out of range for sequence param '" + key + "'");
            }
        }
    }
    spec.validate();
    return spec;
}

std::vector<Frac128> SequenceSpec::kronecker_alpha() const {
    if (alpha_auto) return badly_approximable_alpha_frac(dim);
    std::vector<Frac128> out;
    out.reserve(alpha.size());
    for (double a : alpha) out.push_back(Frac128::from_double(a));
    return out;
}

std::vector<Frac128> badly_approximable_alpha_frac(int d) {
    if (d < 1 || d > 3)
        throw SpecError("badly_approximable_alpha: no vetted construction for d > 3");
    return algebraic_power_fracs(d + 1);
}

std::vector<double> badly_approximable_alpha(int d) {
    std::vector<double> out;
    for (const Frac128& f : badly_approximable_alpha_frac(d)) out.push_back(f.to_double());
    return out;
}

double radical_inverse(std::uint64_t n, std::uint64_t base) {
    // exact digit reversal: value = reversed / base^digits
    std::uint64_t rev = 0, scale = 1;
    while (n > 0) {
        if (rev > (UINT64_MAX - n % base) / base || scale > UINT64_MAX / base)
            throw ResourceError("radical inverse: index too large for exact reversal");
        rev = rev * base + n % base;
        scale *= base;
        n /= base;
    }
    return static_cast<double>(rev) / static_cast<double>(scale);
}

PointSet generate(const SequenceSpec& spec, std::uint64_t n_start, std::uint64_t n_count) {
    spec.validate();
    if (n_start < 1) throw SpecError("generate: indices are 1-based");
    PointSet out(spec.dim, spec.label());
    out.reserve(n_count);
    std::vector<double> row(static_cast<std::size_t>(spec.dim));

    switch (spec.kind) {
    case SeqKind::kronecker: {
        const auto a = spec.kronecker_alpha();
        for (std::uint64_t n = n_start; n < n_start + n_count; ++n) {
            for (int j = 0; j < spec.dim; ++j)
                row[static_cast<std::size_t>(j)] = frac_mul(a[static_cast<std::size_t>(j)], n).to_double();
            out.append(row);
        }
        break;
    }
    case SeqKind::van_der_corput: {
        for (std::uint64_t n = n_start; n < n_start + n_count; ++n) {
            row[0] = radical_inverse(n, spec.base);
            out.append(row);
        }
        break;
    }
    case SeqKind::quadratic_residues: {
        // finite multiset {k^2/p : k = 1..p}, duplicates kept
        if (n_start != 1 || n_count != spec.prime)
            throw SpecError("quadratic residues: the set is finite, use n_start=1, n_count=p");
        for (std::uint64_t k = 1; k <= spec.prime; ++k) {
            const std::uint64_t kk = (k % spec.prime) * (k % spec.prime) % spec.prime;
            row[0] = static_cast<double>(kk) / static_cast<double>(spec.prime);
            out.append(row);
        }
        break;
    }
    case SeqKind::regular_grid: {
        // cell centers, offset 1/(2m) per coordinate
        const std::uint64_t total = checked_pow(spec.side, spec.dim);
        if (n_count != total)
            throw SpecError("regular grid: n_count must be m^d");
        if (n_start != 1) throw SpecError("regular grid: n_start must be 1");
        std::vector<std::uint64_t> idx(static_cast<std::size_t>(spec.dim), 0);
        for (std::uint64_t n = 0; n < total; ++n) {
            for (int j = 0; j < spec.dim; ++j)
                row[static_cast<std::size_t>(j)] =
                    (2.0 * static_cast<double>(idx[static_cast<std::size_t>(j)]) + 1.0) /
                    (2.0 * static_cast<double>(spec.side));
            out.append(row);
            for (int j = spec.dim - 1; j >= 0; --j) {
                if (++idx[static_cast<std::size_t>(j)] < spec.side) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
        }
        break;
    }
    case SeqKind::random_uniform: {
        std::mt19937_64 rng(spec.seed);
        // skip to the requested window so prefixes of one seed are stable
        for (std::uint64_t n = 1; n < n_start; ++n)
            for (int j = 0; j < spec.dim; ++j) (void)rng();
        for (std::uint64_t n = 0; n < n_count; ++n) {
            for (int j = 0; j < spec.dim; ++j)
                row[static_cast<std::size_t>(j)] = static_cast<double>(rng() >> 11) * 0x1p-53;
            out.append(row);
        }
        break;
    }
    }
    return out;
}

PointSet generate_n(const SequenceSpec& spec, std::uint64_t N) {
    if (N < 1) throw SpecError("generate_n: N must be >= 1");
    SequenceSpec s = spec;
    switch (spec.kind) {
    case SeqKind::regular_grid: {
        const double mr = std::pow(static_cast<double>(N), 1.0 / spec.dim);
        const std::uint64_t m = static_cast<std::uint64_t>(std::llround(mr));
        std::uint64_t total = 1;
        for (int j = 0; j < spec.dim; ++j) total *= m;
        if (total != N) throw SpecError("regular grid: N must be a perfect d-th power");
        s.side = m;
        return generate(s, 1, N);
    }
    case SeqKind::quadratic_residues:
        if (s.prime == 0) s.prime = N;
        if (s.prime != N) throw SpecError("quadratic residues: N must equal p");
        return generate(s, 1, N);
    default:
        return generate(s, 1, N);
    }
}

Spectrum random_walk_measure_spectrum(double alpha, std::uint64_t steps, std::uint32_t cutoff) {
    if (cutoff < 1) throw SpecError("random_walk_measure_spectrum: cutoff must be >= 1");
    Spectrum spec(1, cutoff, "random-walk");
    const Frac128 a = Frac128::from_double(alpha);
    for (long long l = -static_cast<long long>(cutoff); l <= static_cast<long long>(cutoff); ++l) {
        double v = 1.0;
        if (l != 0) {
            const double phase = frac_mul_signed(a, l).to_double();
            const double c = std::cos(2.0 * std::numbers::pi * phase);
            v = steps == 0 ? 1.0 : std::pow(c, static_cast<double>(steps));
        }
        const std::array<long long, 1> k{l};
        spec.set(k, {v, 0.0});
    }
    return spec;
}

} // namespace unif
