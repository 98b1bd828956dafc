#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gaussmink/grid.hpp"
#include "helpers.hpp"

using namespace gaussmink;
using testutil::error_name;
using testutil::sample;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("grid construction and validation") {
    Grid g = make_grid(64);
    CHECK(g.size() == 64);
    CHECK(g.weight() == doctest::Approx(kTwoPi / 64).epsilon(1e-15));
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(16) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));

    CHECK(error_name([] { make_grid(15); }) == "InvalidGrid");
    CHECK(error_name([] { make_grid(14); }) == "InvalidGrid");
    CHECK(error_name([] { make_grid(0); }) == "InvalidGrid");
    CHECK(error_name([] { make_grid(-8); }) == "InvalidGrid");
    CHECK(make_grid(16).size() == 16);

    CHECK(make_grid(64) == g);
    CHECK(!(make_grid(32) == g));
}

TEST_CASE("field validation") {
    Grid g = make_grid(32);
    CHECK(error_name([&] { make_field(g, Eigen::VectorXd::Ones(31)); }) == "InvalidField");
    Eigen::VectorXd bad = Eigen::VectorXd::Ones(32);
    bad[7] = std::nan("");
    CHECK(error_name([&] { make_field(g, bad); }) == "InvalidField");
    CHECK(constant_field(g, 2.5).values[17] == 2.5);
}

TEST_CASE("periodic trapezoid quadrature is spectrally exact") {
    Grid g = make_grid(64);
    CHECK(integrate(constant_field(g, 1.0)) == doctest::Approx(kTwoPi).epsilon(1e-15));
    // cos^2 integrates to pi; degree 2 < N/2 so the rule is exact.
    ScalarField c2 = sample(g, [](double t) { return std::cos(t) * std::cos(t); });
    CHECK(integrate(c2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    ScalarField odd = sample(g, [](double t) { return std::sin(3 * t) + 0.25 * std::cos(7 * t); });
    CHECK(std::abs(integrate(odd)) < 1e-13);
}

TEST_CASE("spectral differentiation of trigonometric polynomials") {
    Grid g = make_grid(64);
    ScalarField f = sample(g, [](double t) { return std::sin(3 * t); });
    ScalarField d1 = differentiate(f, 1);
    ScalarField d2 = differentiate(f, 2);
    for (int i = 0; i < g.size(); ++i) {
        CHECK(d1.values[i] == doctest::Approx(3 * std::cos(3 * g.node(i))).epsilon(1e-12));
        CHECK(d2.values[i] == doctest::Approx(-9 * std::sin(3 * g.node(i))).epsilon(1e-11));
    }
    CHECK(error_name([&] { differentiate(f, 3); }) == "InvalidField");
    CHECK(error_name([&] { differentiate(f, 0); }) == "InvalidField");

    // Differentiating a constant stays numerically zero.
    ScalarField flat = differentiate(constant_field(g, 4.0), 2);
    CHECK(flat.values.cwiseAbs().maxCoeff() < 1e-11);

    // The Nyquist mode maps to zero under the first derivative (standard
    // collocation convention).
    ScalarField nyq = sample(g, [&](double t) { return std::cos(g.size() / 2 * t); });
    CHECK(differentiate(nyq, 1).values.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("trigonometric resampling") {
    Grid g = make_grid(32);
    auto fn = [](double t) { return 1.0 + 0.5 * std::cos(2 * t) - 0.3 * std::sin(5 * t); };
    ScalarField f = sample(g, fn);

    std::vector<double> angles = {0.1, 1.7, 3.9, 6.1};
    std::vector<double> vals = resample(f, angles);
    for (std::size_t i = 0; i < angles.size(); ++i) {
        CHECK(vals[i] == doctest::Approx(fn(angles[i])).epsilon(1e-13));
    }

    // Node values reproduce and refinement is exact below the Nyquist mode.
    std::vector<double> at_nodes = resample(f, {g.node(5)});
    CHECK(at_nodes[0] == doctest::Approx(f.values[5]).epsilon(1e-14));
    Grid fine = make_grid(128);
    ScalarField up = resample_to_grid(f, fine);
    for (int i = 0; i < fine.size(); ++i) {
        CHECK(up.values[i] == doctest::Approx(fn(fine.node(i))).epsilon(1e-12));
    }
}
