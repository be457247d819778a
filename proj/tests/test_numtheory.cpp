#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniformity/errors.hpp"
#include "uniformity/numtheory.hpp"
#include "uniformity/sequences.hpp"
#include "uniformity/spectral.hpp"

#include <cmath>
#include <random>

using namespace unif;

TEST_CASE("distance to the nearest integer") {
    CHECK(unif::dist_nearest_int(0.7) == doctest::Approx(0.3));
    CHECK(unif::dist_nearest_int(3.0) == 0.0);
    CHECK(unif::dist_nearest_int(-0.2) == doctest::Approx(0.2));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 1000; ++it) {
        const double x = u(rng);
        const int m = static_cast<int>(rng() % 7);
        CHECK(unif::dist_nearest_int(x) ==
              doctest::Approx(unif::dist_nearest_int(x + m)).epsilon(1e-12));
    }
}

TEST_CASE("continued fractions") {
    const auto phi = continued_fraction(1.6180339887498949, 5);
    CHECK(phi == std::vector<long long>{1, 1, 1, 1, 1});
    const auto sqrt2 = continued_fraction(std::sqrt(2.0), 4);
    CHECK(sqrt2 == std::vector<long long>{1, 2, 2, 2});
    const auto quarter = continued_fraction(0.25, 10);
    CHECK(quarter == std::vector<long long>{0, 4});

    // convergents approximate to better than 1/q^2
    for (const double x : {1.6180339887498949, std::sqrt(2.0), std::numbers::pi}) {
        for (int terms = 2; terms <= 8; ++terms) {
            const auto q = continued_fraction(x, terms);
            const auto [p, den] = convergent(q);
            REQUIRE(den >= 1);
            CHECK(std::abs(x - static_cast<double>(p) / static_cast<double>(den)) <
                  1.0 / (static_cast<double>(den) * static_cast<double>(den)));
        }
    }
}

TEST_CASE("linear form badness certificates") {
    const auto phi = badly_approximable_alpha_frac(1);
    const auto cert = linear_form_badness(phi, 100);
    CHECK(cert.linear_form_floor == doctest::Approx(0.3819660112501051).epsilon(1e-12));
    CHECK(cert.simultaneous_floor == doctest::Approx(0.3819660112501051).epsilon(1e-12));
    CHECK(cert.argmin_k == std::vector<long long>{1});

    // rational alpha fails badness
    const auto ratc = linear_form_badness(std::vector<double>{0.5}, 2);
    CHECK(ratc.linear_form_floor == 0.0);

    // monotone in the search radius
    const auto c1 = linear_form_badness(phi, 1000);
    const auto c2 = linear_form_badness(phi, 10000);
    CHECK(c2.linear_form_floor <= c1.linear_form_floor + 1e-15);
    CHECK(c2.simultaneous_floor <= c1.simultaneous_floor + 1e-15);

    // transference direction: both floors positive together
    const auto plastic = badly_approximable_alpha_frac(2);
    const auto cp = linear_form_badness(plastic, 300);
    CHECK(cp.linear_form_floor > 0.0);
    CHECK(cp.simultaneous_floor > 0.0);

    CHECK_THROWS_AS(linear_form_badness(plastic, 200000), ResourceError);
}

TEST_CASE("serial and parallel badness scans agree bitwise") {
    const auto plastic = badly_approximable_alpha_frac(2);
    const auto a = linear_form_badness(plastic, 120);
    const auto b = linear_form_badness_serial(plastic, 120);
    CHECK(a.linear_form_floor == b.linear_form_floor);
    CHECK(a.simultaneous_floor == b.simultaneous_floor);
    CHECK(a.argmin_k == b.argmin_k);
}

TEST_CASE("certificate JSON round-trip") {
    const auto cert = linear_form_badness(badly_approximable_alpha_frac(2), 50);
    const auto back = BadnessCertificate::from_json(cert.to_json());
    CHECK(back.linear_form_floor == cert.linear_form_floor);
    CHECK(back.simultaneous_floor == cert.simultaneous_floor);
    CHECK(back.search_radius == cert.search_radius);
    CHECK(back.argmin_k == cert.argmin_k);
    CHECK(back.alpha == cert.alpha);
}

TEST_CASE("geometric sum bound arithmetic") {
    // ||<k,alpha>|| = 0.25, N = 8 -> min(1, 1.0)
    const auto a = std::vector<Frac128>{Frac128::from_double(0.25)};
    const std::array<long long, 1> one{1};
    CHECK(geometric_sum_bound(a, one, 8) == doctest::Approx(1.0));
    const auto b = std::vector<Frac128>{Frac128::from_double(0.5)};
    CHECK(geometric_sum_bound(b, one, 100) == doctest::Approx(0.04));
    // integral <k, alpha>: vacuous bound 1
    const std::array<long long, 1> two{2};
    CHECK(geometric_sum_bound(b, two, 100) == 1.0);
}

TEST_CASE("geometric sum bound dominates measured Kronecker coefficients") {
    const auto phi = badly_approximable_alpha_frac(1);
    const auto spec1 = SequenceSpec::parse("kronecker:d=1,alpha=auto");
    const PointSet ps1 = generate(spec1, 1, 1000);
    const std::array<long long, 1> one{1};
    const double bound1 = geometric_sum_bound(phi, one, 1000);
    CHECK(bound1 == doctest::Approx(2.0 / (1000.0 * 0.3819660112501051)).epsilon(1e-12));
    CHECK(std::abs(exponential_sum(ps1, one)) <= bound1 + 1e-12);

    std::mt19937_64 rng(17);
    for (int d = 1; d <= 2; ++d) {
        const auto alpha = badly_approximable_alpha_frac(d);
        SequenceSpec spec;
        spec.kind = SeqKind::kronecker;
        spec.dim = d;
        spec.alpha_auto = true;
        const PointSet ps = generate(spec, 1, 512);
        std::vector<long long> k(static_cast<std::size_t>(d));
        for (int it = 0; it < 500; ++it) {
            for (auto& kj : k) kj = static_cast<long long>(rng() % 2001) - 1000;
            bool zero = true;
            for (auto kj : k) zero = zero && kj == 0;
            if (zero) k[0] = 1;
            const double bound = geometric_sum_bound(alpha, k, 512);
            CHECK(std::abs(exponential_sum(ps, k)) <= bound + 1e-12);
        }
    }
}
