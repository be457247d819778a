#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniformity/errors.hpp"
#include "uniformity/numtheory.hpp"
#include "uniformity/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace unif;

TEST_CASE("van der Corput base 2 opening values") {
    const auto spec = SequenceSpec::parse("vdc:base=2");
    const PointSet ps = generate(spec, 1, 5);
    const double expect[] = {0.5, 0.25, 0.75, 0.125, 0.625};
    for (std::size_t i = 0; i < 5; ++i) CHECK(ps.at(i)[0] == expect[i]);
}

TEST_CASE("radical inverse is an exact digit reversal") {
    for (const std::uint64_t base : {2ull, 3ull, 5ull}) {
        std::uint64_t scale = base * base * base; // m = 3 digits
        for (std::uint64_t n = 1; n < scale; ++n) {
            const double x = radical_inverse(n, base);
            const double scaled = x * static_cast<double>(scale);
            CHECK(scaled == std::floor(scaled)); // at most m base-r digits
        }
    }
}

TEST_CASE("kronecker first point is frac(phi)") {
    const auto spec = SequenceSpec::parse("kronecker:d=1,alpha=auto");
    const PointSet ps = generate(spec, 1, 1);
    CHECK(ps.at(0)[0] == doctest::Approx(0.6180339887498949).epsilon(1e-15));
}

TEST_CASE("prefix stability and determinism") {
    for (const char* text : {"kronecker:d=2,alpha=auto", "vdc:base=3"}) {
        const auto spec = SequenceSpec::parse(text);
        const PointSet big = generate(spec, 1, 10000);
        const PointSet small = generate(spec, 1, 9973);
        for (std::size_t i = 0; i < small.size(); ++i)
            for (int j = 0; j < spec.dim; ++j)
                CHECK(small.at(i)[static_cast<std::size_t>(j)] ==
                      big.at(i)[static_cast<std::size_t>(j)]);
        const PointSet again = generate(spec, 1, 10000);
        CHECK(again.raw() == big.raw()); // bitwise
        for (double x : big.raw()) {
            CHECK(x >= 0.0);
            CHECK(x < 1.0);
        }
    }
}

TEST_CASE("quadratic residues p=5 multiset") {
    const auto spec = SequenceSpec::parse("qr:p=5");
    const PointSet ps = generate(spec, 1, 5);
    std::vector<double> got;
    for (std::size_t i = 0; i < 5; ++i) got.push_back(ps.at(i)[0]);
    std::sort(got.begin(), got.end());
    const std::vector<double> expect = {0.0, 0.2, 0.2, 0.8, 0.8};
    CHECK(got == expect);
}

TEST_CASE("quadratic residue symmetry x_k = x_{p-k}") {
    for (const std::uint64_t p : {13ull, 29ull, 101ull}) {
        SequenceSpec spec;
        spec.kind = SeqKind::quadratic_residues;
        spec.prime = p;
        const PointSet ps = generate(spec, 1, p);
        for (std::uint64_t k = 1; k <= p - 1; ++k)
            CHECK(ps.at(k - 1)[0] == ps.at(p - k - 1)[0]);
    }
}

TEST_CASE("regular grid d=2 m=3 cell centers") {
    const auto spec = SequenceSpec::parse("grid:d=2,m=3");
    const PointSet ps = generate(spec, 1, 9);
    REQUIRE(ps.size() == 9);
    std::vector<std::pair<double, double>> got;
    for (std::size_t i = 0; i < 9; ++i) got.emplace_back(ps.at(i)[0], ps.at(i)[1]);
    std::sort(got.begin(), got.end());
    std::vector<std::pair<double, double>> expect;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            expect.emplace_back((2.0 * a + 1.0) / 6.0, (2.0 * b + 1.0) / 6.0);
    std::sort(expect.begin(), expect.end());
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(got[i].first == doctest::Approx(expect[i].first).epsilon(1e-15));
        CHECK(got[i].second == doctest::Approx(expect[i].second).epsilon(1e-15));
    }
}

TEST_CASE("random sequences need a seed and repeat bitwise") {
    CHECK_THROWS_AS(SequenceSpec::parse("random:d=2"), SpecError);
    const auto spec = SequenceSpec::parse("random:d=2,seed=42");
    const PointSet a = generate(spec, 1, 500);
    const PointSet b = generate(spec, 1, 500);
    CHECK(a.raw() == b.raw());
    // window generation agrees with the prefix
    const PointSet w = generate(spec, 101, 50);
    for (std::size_t i = 0; i < 50; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(w.at(i)[static_cast<std::size_t>(j)] ==
                  a.at(100 + i)[static_cast<std::size_t>(j)]);
}

TEST_CASE("vetted badly approximable vectors") {
    const auto a1 = badly_approximable_alpha(1);
    REQUIRE(a1.size() == 1);
    CHECK(a1[0] == doctest::Approx(0.6180339887498949).epsilon(1e-14));

    const auto a2 = badly_approximable_alpha(2);
    REQUIRE(a2.size() == 2);
    CHECK(a2[0] == doctest::Approx(0.3247179572447460).epsilon(1e-12));
    CHECK(a2[1] == doctest::Approx(0.7548776662466927).epsilon(1e-12));

    const auto a3 = badly_approximable_alpha(3);
    REQUIRE(a3.size() == 3);
    // root of x^4 = x + 1 is 1.2207440846...
    CHECK(a3[0] == doctest::Approx(0.2207440846057596).epsilon(1e-12));

    CHECK_THROWS_AS(badly_approximable_alpha(4), SpecError);
}

TEST_CASE("vetted vectors pass their badness certificates") {
    for (int d = 1; d <= 2; ++d) {
        const auto cert = linear_form_badness(badly_approximable_alpha_frac(d), d == 1 ? 10000u : 1000u);
        CHECK(cert.linear_form_floor > (d == 1 ? 0.38 : 0.01));
        CHECK(cert.simultaneous_floor > 0.0);
    }
}

TEST_CASE("invalid sequence parameters are rejected") {
    CHECK_THROWS_AS(SequenceSpec::parse("vdc:base=1"), SpecError);
    CHECK_THROWS_AS(SequenceSpec::parse("qr:p=10"), SpecError);
    CHECK_THROWS_AS(SequenceSpec::parse("grid:d=2,m=0"), SpecError);
    CHECK_THROWS_AS(SequenceSpec::parse("nonsense:d=1"), SpecError);
    CHECK_THROWS_AS(SequenceSpec::parse("kronecker:d=2,alpha=0.5"), SpecError); // needs 2 coords
    const auto qr = SequenceSpec::parse("qr:p=7");
    CHECK_THROWS_AS(generate(qr, 1, 6), SpecError);
    CHECK_THROWS_AS(generate(qr, 2, 7), SpecError);
}

TEST_CASE("random walk spectrum") {
    const Spectrum s0 = random_walk_measure_spectrum(0.123, 0, 8);
    std::array<long long, 1> k{3};
    CHECK(s0.at(k).real() == 1.0);

    const Spectrum s1 = random_walk_measure_spectrum(0.25, 1, 4);
    k[0] = 1;
    CHECK(s1.at(k).real() == doctest::Approx(0.0).epsilon(1e-15));

    const double phi = badly_approximable_alpha(1)[0];
    const Spectrum s2 = random_walk_measure_spectrum(phi, 2, 4);
    // cos(2 pi phi)^2, phi = frac(golden ratio)
    CHECK(s2.at(k).real() == doctest::Approx(0.5437128623577). epsilon(1e-9));
    std::array<long long, 1> zero{0};
    CHECK(s2.at(zero).real() == 1.0);
}
