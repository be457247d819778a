#include "uniformity/spectrum.hpp"

#include "uniformity/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace unif {

namespace {

std::size_t checked_box(int dim, std::uint32_t L) {
    const std::size_t side = 2 * static_cast<std::size_t>(L) + 1;
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) {
        if (total > 100'000'000 / side) throw ResourceError("spectrum box exceeds 1e8 coefficients");
        total *= side;
    }
    return total;
}

} // namespace

Spectrum::Spectrum(int d, std::uint32_t L, std::string src)
    : dim(d), cutoff(L), source(std::move(src)) {
    if (d < 1) throw SpecError("spectrum dimension must be >= 1");
    coeffs.assign(checked_box(d, L), {0.0, 0.0});
}

std::size_t Spectrum::box_size() const {
    const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= side;
    return total;
}

std::size_t Spectrum::index(std::span<const long long> k) const {
    if (static_cast<int>(k.size()) != dim) throw SpecError("spectrum: frequency dimension mismatch");
    const long long L = static_cast<long long>(cutoff);
    const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
    std::size_t idx = 0;
    for (int j = 0; j < dim; ++j) {
        const long long kj = k[static_cast<std::size_t>(j)];
        if (kj < -L || kj > L) throw SpecError("spectrum: frequency outside the box");
        idx = idx * side + static_cast<std::size_t>(kj + L);
    }
    return idx;
}

void Spectrum::unindex(std::size_t pos, std::span<long long> k) const {
    const long long L = static_cast<long long>(cutoff);
    const std::size_t side = 2 * static_cast<std::size_t>(cutoff) + 1;
    for (int j = dim - 1; j >= 0; --j) {
        k[static_cast<std::size_t>(j)] = static_cast<long long>(pos % side) - L;
        pos /= side;
    }
}

std::complex<double> Spectrum::at(std::span<const long long> k) const { return coeffs[index(k)]; }

void Spectrum::set(std::span<const long long> k, std::complex<double> v) { coeffs[index(k)] = v; }

double Spectrum::symmetry_defect() const {
    double worst = 0.0;
    std::vector<long long> k(static_cast<std::size_t>(dim)), nk(static_cast<std::size_t>(dim));
    for (std::size_t pos = 0; pos < coeffs.size(); ++pos) {
        unindex(pos, k);
        for (int j = 0; j < dim; ++j) nk[static_cast<std::size_t>(j)] = -k[static_cast<std::size_t>(j)];
        const auto d = coeffs[pos] - std::conj(at(nk));
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

void Spectrum::write_binary(std::ostream& os) const {
    const auto put = [&os](const void* p, std::size_t n) { os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); };
    const std::int32_t d32 = dim;
    const std::int32_t L32 = static_cast<std::int32_t>(cutoff);
    const std::int64_t count = static_cast<std::int64_t>(box_size()) - 1; // k = 0 omitted
    put(&d32, 4);
    put(&L32, 4);
    put(&count, 8);
    std::vector<long long> k(static_cast<std::size_t>(dim));
    for (std::size_t pos = 0; pos < coeffs.size(); ++pos) {
        unindex(pos, k);
        bool zero = true;
        for (long long kj : k) zero = zero && kj == 0;
        if (zero) continue;
        for (long long kj : k) {
            const std::int32_t k32 = static_cast<std::int32_t>(kj);
            put(&k32, 4);
        }
        const double re = coeffs[pos].real(), im = coeffs[pos].imag();
        put(&re, 8);
        put(&im, 8);
    }
}

Spectrum Spectrum::read_binary(std::istream& is) {
    const auto get = [&is](void* p, std::size_t n) {
        is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!is) throw SpecError("spectrum binary: truncated stream");
    };
    std::int32_t d32 = 0, L32 = 0;
    std::int64_t count = 0;
    get(&d32, 4);
    get(&L32, 4);
    get(&count, 8);
    if (d32 < 1 || L32 < 0) throw SpecError("spectrum binary: bad header");
    Spectrum out(d32, static_cast<std::uint32_t>(L32), "file");
    std::array<long long, 1> origin{0};
    std::vector<long long> k(static_cast<std::size_t>(d32));
    (void)origin;
    std::vector<long long> zero(static_cast<std::size_t>(d32), 0);
    out.set(zero, {1.0, 0.0});
    for (std::int64_t i = 0; i < count; ++i) {
        for (int j = 0; j < d32; ++j) {
            std::int32_t k32 = 0;
            get(&k32, 4);
            k[static_cast<std::size_t>(j)] = k32;
        }
        double re = 0, im = 0;
        get(&re, 8);
        get(&im, 8);
        out.set(k, {re, im});
    }
    return out;
}

std::string Spectrum::to_json() const {
    nlohmann::json j;
    j["d"] = dim;
    j["L"] = cutoff;
    j["source"] = source;
    j["outside_bound"] = outside_bound;
    nlohmann::json entries = nlohmann::json::array();
    std::vector<long long> k(static_cast<std::size_t>(dim));
    for (std::size_t pos = 0; pos < coeffs.size(); ++pos) {
        unindex(pos, k);
        bool zero = true;
        for (long long kj : k) zero = zero && kj == 0;
        if (zero) continue;
        entries.push_back({{"k", k}, {"re", coeffs[pos].real()}, {"im", coeffs[pos].imag()}});
    }
    j["coeffs"] = std::move(entries);
    return j.dump();
}

Spectrum Spectrum::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Spectrum out(j.at("d").get<int>(), j.at("L").get<std::uint32_t>(),
                 j.value("source", std::string("file")));
    out.outside_bound = j.value("outside_bound", 1.0);
    std::vector<long long> zero(static_cast<std::size_t>(out.dim), 0);
    out.set(zero, {1.0, 0.0});
    for (const auto& e : j.at("coeffs")) {
        const auto k = e.at("k").get<std::vector<long long>>();
        out.set(k, {e.at("re").get<double>(), e.at("im").get<double>()});
    }
    return out;
}

} // namespace unif
