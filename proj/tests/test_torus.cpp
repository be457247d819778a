#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uniformity/errors.hpp"
#include "uniformity/torus.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace unif;

TEST_CASE("wrap distance basics") {
    CHECK(wrap_distance(Point({0.0}), Point({0.0})) == doctest::Approx(0.0));
    CHECK(wrap_distance(Point({0.1}), Point({0.9})) == doctest::Approx(0.2));
    CHECK(wrap_distance(Point({0.0, 0.0}), Point({0.5, 0.5})) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK_THROWS_AS(wrap_distance(Point({0.1}), Point({0.1, 0.2})), SpecError);
}

TEST_CASE("wrap distance is a shift-invariant metric") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 10000; ++it) {
        const Point a({u(rng), u(rng)});
        const Point b({u(rng), u(rng)});
        const Point c({u(rng), u(rng)});
        const double ab = wrap_distance(a, b), bc = wrap_distance(b, c), ac = wrap_distance(a, c);
        CHECK(ac <= ab + bc + 1e-12);
        CHECK(ab == doctest::Approx(wrap_distance(b, a)));
        CHECK(ab <= std::sqrt(2.0) / 2.0 + 1e-12);

        const double s = u(rng);
        const Point as({a[0] + s, a[1] + s}), bs({b[0] + s, b[1] + s});
        CHECK(wrap_distance(as, bs) == doctest::Approx(ab).epsilon(1e-9));
    }
}

TEST_CASE("coordinates are canonicalized to [0,1)") {
    CHECK(Point({-0.25})[0] == doctest::Approx(0.75));
    CHECK(Point({3.5})[0] == doctest::Approx(0.5));
    CHECK(Point({1.0})[0] == 0.0);
    const double just_below = std::nextafter(1.0, 0.0);
    const double r = Point({-1e-18})[0];
    CHECK(r < 1.0);
    CHECK(Point({just_below})[0] == just_below);
    CHECK_THROWS_AS(Point({std::nan("")}), SpecError);
}

TEST_CASE("empirical measure weights") {
    PointSet one(1);
    one.append(std::vector<double>{0.3});
    const auto m1 = empirical_from_points(one);
    REQUIRE(m1.weights.size() == 1);
    CHECK(m1.weights[0] == 1.0);

    PointSet four(1);
    for (double x : {0.1, 0.2, 0.3, 0.4}) four.append(std::vector<double>{x});
    const auto m4 = empirical_from_points(four);
    for (double w : m4.weights) CHECK(w == 0.25);

    PointSet three(1);
    for (double x : {0.1, 0.2, 0.3}) three.append(std::vector<double>{x});
    const auto m3 = empirical_from_points(three);
    double s = 0.0;
    for (double w : m3.weights) {
        CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        s += w;
    }
    CHECK(std::abs(s - 1.0) <= 1e-15);
    m3.check_invariants();
}

TEST_CASE("empirical measure invariants over random sizes") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n = 1 + rng() % 1000;
        PointSet ps(2);
        std::vector<double> w;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            ps.append(std::vector<double>{u(rng), u(rng)});
            w.push_back(u(rng) + 1e-3);
        }
        const EmpiricalMeasure mu(std::move(ps), std::move(w));
        mu.check_invariants();
        for (std::size_t i = 0; i < mu.size(); ++i) {
            CHECK(mu.support.at(i)[0] >= 0.0);
            CHECK(mu.support.at(i)[0] < 1.0);
        }
    }
    CHECK_THROWS_AS(EmpiricalMeasure(PointSet(1), {}), SpecError);
}

TEST_CASE("point set CSV and JSON round-trip") {
    PointSet ps(2, "demo");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 17; ++i) ps.append(std::vector<double>{u(rng), u(rng)});

    std::ostringstream os;
    ps.write_csv(os);
    std::istringstream is(os.str());
    const PointSet back = PointSet::read_csv(is, "demo");
    REQUIRE(back.size() == ps.size());
    REQUIRE(back.dim() == 2);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK(back.at(i)[0] == ps.at(i)[0]); // 17 digits round-trip exactly
        CHECK(back.at(i)[1] == ps.at(i)[1]);
    }

    const PointSet jback = PointSet::from_json(ps.to_json());
    REQUIRE(jback.size() == ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) CHECK(jback.at(i)[1] == ps.at(i)[1]);

    std::istringstream bad("dim,0\n");
    CHECK_THROWS_AS(PointSet::read_csv(bad), SpecError);
}

TEST_CASE("gradient stats ordering check") {
    GradientStats ok{6.28, 4.44, 4.0, 0.0};
    ok.check_ordering();
    GradientStats bad{1.0, 2.0, 0.5, 0.0};
    CHECK_THROWS_AS(bad.check_ordering(), SpecError);
}
