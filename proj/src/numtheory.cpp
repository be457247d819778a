#include "uniformity/numtheory.hpp"

#include "uniformity/errors.hpp"
#include "uniformity/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace unif {

double dist_nearest_int(double x) {
    if (!std::isfinite(x)) throw SpecError("dist_nearest_int: non-finite input");
    const double r = std::abs(x - std::nearbyint(x));
    return std::min(r, 0.5);
}

std::vector<long long> continued_fraction(double x, int max_terms) {
    if (max_terms < 1) throw SpecError("continued_fraction: need at least one term");
    std::vector<long long> out;
    double v = x;
    for (int i = 0; i < max_terms; ++i) {
        const double fl = std::floor(v);
        out.push_back(static_cast<long long>(fl));
        const double frac = v - fl;
        // rational to working precision: stop with the finite expansion
        if (frac < 1e-12 * std::max(1.0, std::abs(v))) break;
        v = 1.0 / frac;
    }
    return out;
}

std::pair<long long, long long> convergent(std::span<const long long> q) {
    long long p0 = 1, q0 = 0; // p_{-1}/q_{-1}
    long long p1 = q.empty() ? 0 : q[0], q1 = 1;
    for (std::size_t i = 1; i < q.size(); ++i) {
        const long long a = q[i];
        const long long p2 = a * p1 + p0;
        const long long q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return {p1, q1};
}

double linear_form_dist(const std::vector<Frac128>& alpha, std::span<const long long> k) {
    if (alpha.size() != k.size()) throw SpecError("linear_form_dist: dimension mismatch");
    Frac128 dot{};
    for (std::size_t j = 0; j < alpha.size(); ++j)
        dot = frac_add(dot, frac_mul_signed(alpha[j], k[j]));
    return dist_nearest_int(dot);
}

double geometric_sum_bound(const std::vector<Frac128>& alpha, std::span<const long long> k, std::uint64_t N) {
    const double dist = linear_form_dist(alpha, k);
    if (dist == 0.0) return 1.0; // <k, alpha> integral: the bound is vacuous
    return std::min(1.0, 2.0 / (static_cast<double>(N) * dist));
}

namespace {

struct ScanResult {
    double linear_floor = std::numeric_limits<double>::infinity();
    std::vector<long long> argmin;
};

// Exhaustive scan of the box 0 < ||k||_inf <= K. The k1 >= 0 half suffices:
// ||<-k, alpha>|| = ||<k, alpha>||.
ScanResult scan_box(const std::vector<Frac128>& alpha, std::uint32_t K, bool parallel) {
    const int d = static_cast<int>(alpha.size());
    const long long Kl = static_cast<long long>(K);
    const std::size_t side = 2 * static_cast<std::size_t>(K) + 1;
    std::size_t rest = 1; // (2K+1)^(d-1)
    for (int j = 1; j < d; ++j) {
        if (rest > 1'000'000'000 / side) throw ResourceError("badness scan: box exceeds 1e9 lattice points; lower K");
        rest *= side;
    }
    if ((static_cast<std::size_t>(K) + 1) * rest > 1'000'000'000)
        throw ResourceError("badness scan: box exceeds 1e9 lattice points; lower K");

    const std::size_t rows = static_cast<std::size_t>(K) + 1; // k1 in [0, K]
    std::vector<ScanResult> partial(rows);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
        const long long k1 = static_cast<long long>(r);
        ScanResult best;
        std::vector<long long> k(static_cast<std::size_t>(d));
        k[0] = k1;
        const Frac128 base = frac_mul_signed(alpha[0], k1);
        for (std::size_t sub = 0; sub < rest; ++sub) {
            std::size_t remn = sub;
            Frac128 dot = base;
            long long kinf = std::abs(k1);
            bool zero = k1 == 0;
            for (int j = 1; j < d; ++j) {
                const long long kj = static_cast<long long>(remn % side) - Kl;
                remn /= side;
                k[static_cast<std::size_t>(j)] = kj;
                dot = frac_add(dot, frac_mul_signed(alpha[static_cast<std::size_t>(j)], kj));
                kinf = std::max(kinf, std::abs(kj));
                zero = zero && kj == 0;
            }
            if (zero) continue;
            const double dist = dist_nearest_int(dot);
            double scale = 1.0;
            for (int j = 0; j < d; ++j) scale *= static_cast<double>(kinf);
            const double v = scale * dist;
            if (v < best.linear_floor ||
                (v == best.linear_floor && !best.argmin.empty() &&
                 std::lexicographical_compare(k.begin(), k.end(), best.argmin.begin(), best.argmin.end()))) {
                best.linear_floor = v;
                best.argmin = k;
            }
        }
        partial[static_cast<std::size_t>(r)] = std::move(best);
    }

    ScanResult best;
    for (const auto& p : partial) {
        if (p.argmin.empty()) continue;
        if (p.linear_floor < best.linear_floor ||
            (p.linear_floor == best.linear_floor && !best.argmin.empty() &&
             std::lexicographical_compare(p.argmin.begin(), p.argmin.end(), best.argmin.begin(), best.argmin.end()))) {
            best = p;
        }
    }
    return best;
}

BadnessCertificate certify(const std::vector<Frac128>& alpha, std::uint32_t K, bool parallel) {
    if (K < 1) throw SpecError("badness certificate: K must be >= 1");
    const int d = static_cast<int>(alpha.size());
    if (d < 1 || d > 3) throw SpecError("badness certificate: exhaustive scan supports d <= 3");

    BadnessCertificate cert;
    for (const Frac128& a : alpha) cert.alpha.push_back(a.to_double());
    cert.search_radius = K;

    auto scan = scan_box(alpha, K, parallel);
    cert.linear_form_floor = std::isfinite(scan.linear_floor) ? scan.linear_floor : 0.0;
    cert.argmin_k = std::move(scan.argmin);

    // simultaneous floor: min over q of q^{1/d} max_j ||q alpha_j||
    double sim = std::numeric_limits<double>::infinity();
    for (std::uint64_t q = 1; q <= K; ++q) {
        double worst = 0.0;
        for (const Frac128& a : alpha)
            worst = std::max(worst, unif::dist_nearest_int(frac_mul(a, q)));
        sim = std::min(sim, std::pow(static_cast<double>(q), 1.0 / d) * worst);
    }
    cert.simultaneous_floor = sim;
    return cert;
}

} // namespace

BadnessCertificate linear_form_badness(const std::vector<Frac128>& alpha, std::uint32_t K) {
    return certify(alpha, K, true);
}

BadnessCertificate linear_form_badness_serial(const std::vector<Frac128>& alpha, std::uint32_t K) {
    return certify(alpha, K, false);
}

BadnessCertificate linear_form_badness(const std::vector<double>& alpha, std::uint32_t K) {
    std::vector<Frac128> fx;
    fx.reserve(alpha.size());
    for (double a : alpha) fx.push_back(Frac128::from_double(a));
    return certify(fx, K, true);
}

std::string BadnessCertificate::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["K"] = search_radius;
    j["simultaneous_floor"] = simultaneous_floor;
    j["linear_form_floor"] = linear_form_floor;
    j["argmin_k"] = argmin_k;
    return j.dump();
}

BadnessCertificate BadnessCertificate::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BadnessCertificate c;
    c.alpha = j.at("alpha").get<std::vector<double>>();
    c.search_radius = j.at("K").get<std::uint32_t>();
    c.simultaneous_floor = j.at("simultaneous_floor").get<double>();
    c.linear_form_floor = j.at("linear_form_floor").get<double>();
    c.argmin_k = j.value("argmin_k", std::vector<long long>{});
    return c;
}

} // namespace unif
