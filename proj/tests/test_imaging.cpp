// SPDX-License-Identifier: Apache-2.0

#include "cmi/imaging.hpp"
#include "cmi/scene.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace cmi;

namespace {

VisibilityFunction constant_1d(int u_max, cplx value)
{
    VisibilityFunction v;
    for (int u = 1; u <= u_max; ++u) v.set({u, 0}, value);
    v.set_v0(value.real(), 1);
    return v;
}

double deg(double d) { return d * std::numbers::pi / 180.0; }

} // namespace

TEST_CASE("constant visibilities image to a centre delta")
{
    const auto g = min_redundancy_4();
    const auto vis = constant_1d(6, 1.0);
    DiftOptions raw;
    raw.per_pixel_scale = false;
    const auto map = dift(vis, g, raw);
    CHECK(map.width() == 13);
    CHECK(map.height() == 1);
    CHECK(map.at(6, 0) == doctest::Approx(13.0));
    for (std::size_t i = 0; i < 13; ++i)
        if (i != 6) CHECK(std::abs(map.at(i, 0)) < 1e-12);
    const auto scaled = dift(vis, g);
    CHECK(scaled.at(6, 0) == doctest::Approx(1.0));
    CHECK(map.dl() == doctest::Approx(1.0 / 13));
}

TEST_CASE("shift theorem places a source in its bin")
{
    const auto g = min_redundancy_4();
    // sin^-1(5/13)
    Scene s;
    s.emitters.push_back({5.0 / 13.0, 0.0, 1.0});
    const auto map = dift(analytic_visibility_function(s, g), g);
    const auto pk = peak(map);
    CHECK(map.bin_l(pk.i) == 5);
    CHECK(map.at(pk.i, 0) == doctest::Approx(1.0));
    CHECK(std::asin(5.0 / 13.0) * 180 / std::numbers::pi == doctest::Approx(22.6).epsilon(0.001));
    CHECK(predicted_bin(5.0 / 13.0, 1.0, 13) == 5);
}

TEST_CASE("round trip on the fifteen-element imager")
{
    const auto g = builtin_geometry("linear-15");
    for (double a : {-50.0, -20.0, 0.0, 20.0, 30.0, 40.0, 50.0}) {
        Scene s;
        s.emitters.push_back(emitter_at_angle(a));
        const auto map = dift(analytic_visibility_function(s, g), g);
        CHECK(map.width() == 29);
        CHECK(map.bin_l(peak(map).i) == predicted_bin(std::sin(deg(a)), 0.5, 29));
    }
}

TEST_CASE("predicted bins wrap into the centred range")
{
    CHECK(predicted_bin(0.0, 1.0, 13) == 0);
    CHECK(predicted_bin(0.5, 1.0, 13) == -6);
    CHECK(predicted_bin(std::sin(deg(20)), 0.5, 29) == 5);
    CHECK(predicted_bin(std::sin(deg(50)), 0.5, 29) == 11);
}

TEST_CASE("two sources at 0 and 10 degrees on the four-element imager")
{
    const auto g = min_redundancy_4();
    Scene s;
    s.emitters = {emitter_at_angle(0), emitter_at_angle(10)};
    const auto map = dift(analytic_visibility_function(s, g), g);
    const auto maxima = local_maxima(map, 0.5);
    REQUIRE(maxima.size() == 2);
    std::vector<int> bins{map.bin_l(maxima[0].i), map.bin_l(maxima[1].i)};
    std::sort(bins.begin(), bins.end());
    CHECK(bins == std::vector<int>{0, 2});
}

TEST_CASE("dift is linear")
{
    const auto g = uniform_linear(6, 0.5);
    Scene s1, s2;
    s1.emitters = {{0.3, 0, 1.0}};
    s2.emitters = {{-0.5, 0, 0.7}, {0.1, 0, 0.2}};
    const auto v1 = analytic_visibility_function(s1, g);
    const auto v2 = analytic_visibility_function(s2, g);
    VisibilityFunction mix;
    for (const auto& [b, smp] : v1.samples())
        if (b.u > 0) mix.set(b, 2.0 * smp.value - 3.0 * v2.value(b));
    mix.set_v0(2.0 * v1.v0() - 3.0 * v2.v0(), 6);
    const auto m1 = dift(v1, g), m2 = dift(v2, g), mm = dift(mix, g);
    for (std::size_t i = 0; i < mm.width(); ++i) CHECK(mm.at(i, 0) == doctest::Approx(2 * m1.at(i, 0) - 3 * m2.at(i, 0)));
}

TEST_CASE("parseval on a one-dimensional grid")
{
    const auto g = uniform_linear(8, 0.5);
    Scene s;
    s.emitters = {{0.31, 0, 1.0}, {-0.62, 0, 0.4}};
    const auto vis = analytic_visibility_function(s, g);
    const auto map = dift(vis, g);
    double sv = 0, sp = 0;
    for (const auto& [b, smp] : vis.samples()) sv += std::norm(smp.value);
    for (double p : map.pixels()) sp += p * p;
    CHECK(sv == doctest::Approx(static_cast<double>(map.width()) * sp));
}

TEST_CASE("coverage holes are reported")
{
    const auto g = uniform_linear(4, 1.0);
    VisibilityFunction v;
    v.set({1, 0}, 1.0);
    v.set({3, 0}, 1.0);
    v.set_v0(1.0, 4);
    try {
        dift(v, g);
        FAIL("expected a coverage error");
    } catch (const CoverageError& e) {
        REQUIRE(e.missing.size() == 2);
        CHECK(e.missing[0] == Baseline{-2, 0});
        CHECK(e.missing[1] == Baseline{2, 0});
    }
    DiftOptions inner;
    inner.u_max = 1;
    CHECK(dift(v, g, inner).width() == 3);
}

TEST_CASE("visibility writes keep conjugate symmetry")
{
    VisibilityFunction v = constant_1d(2, 1.0);
    // overwrite one half only
    VisibilityFunction broken;
    for (const auto& [b, s] : v.samples()) broken.set(b, s.value);
    broken.set({1, 0}, cplx(0, 1));
    broken.set({-2, 0}, cplx(0.5, 0)); // stores (2,0) as its conjugate
    CHECK(broken.value({-1, 0}) == std::conj(broken.value({1, 0})));
    CHECK_NOTHROW(dift(broken, uniform_linear(3, 1.0)));
}

TEST_CASE("point spread functions")
{
    for (const auto& name : builtin_geometry_names()) {
        const auto g = builtin_geometry(name);
        const auto map = psf(g);
        const auto pk = peak(map);
        CHECK(map.bin_l(pk.i) == 0);
        CHECK(map.bin_m(pk.j) == 0);
        CHECK(map.at(pk.i, pk.j) == doctest::Approx(1.0));
    }
    const auto m33 = psf(two_dim_33pixel_8el());
    CHECK(m33.pixel_count() == 33);
    double side = 0;
    for (std::size_t j = 0; j < m33.height(); ++j)
        for (std::size_t i = 0; i < m33.width(); ++i)
            if (!(i == 5 && j == 1)) side = std::max(side, std::abs(m33.at(i, j)));
    CHECK(side < 0.5);
    CHECK(psf(builtin_geometry("t-config-81")).pixel_count() == 81);
    CHECK(psf(grid_13x13_16el()).pixel_count() == 169);
}

TEST_CASE("peak, normalize, maxima")
{
    BrightnessMap m(3, 2, 0.1, 0.2);
    m.at(0, 0) = 1;
    m.at(2, 1) = 1;
    m.at(1, 1) = -3;
    CHECK(peak(m) == PixelIndex{0, 0});
    const auto n = normalize(m);
    CHECK(n.at(1, 1) == doctest::Approx(-1.0));
    CHECK(peak(n) == peak(m));
    BrightnessMap zero(2, 2, 1, 1);
    CHECK_THROWS_AS(normalize(zero), std::invalid_argument);
    CHECK(local_maxima(m).size() == 2);
}

TEST_CASE("export formats")
{
    BrightnessMap m(3, 2, 0.5, 0.25);
    m.at(0, 0) = -1;
    m.at(2, 1) = 1;
    std::ostringstream pgm, csv, axes;
    write_pgm(pgm, m, false);
    CHECK(pgm.str() == "P2\n3 2\n255\n128 128 255\n0 128 128\n");
    write_csv(csv, m);
    CHECK(csv.str() == "0,0,1\n-1,0,0\n");
    write_axis_metadata(axes, m);
    CHECK(axes.str().find("l_min = -0.5") != std::string::npos);
    CHECK(axes.str().find("width = 3") != std::string::npos);
    std::ostringstream bin;
    write_pgm(bin, m, true);
    CHECK(bin.str().size() == std::string("P5\n3 2\n255\n").size() + 6);
}
