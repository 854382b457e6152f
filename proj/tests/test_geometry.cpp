// SPDX-License-Identifier: Apache-2.0

#include "cmi/geometry.hpp"

#include <doctest.h>

#include <bit>
#include <set>
#include <sstream>

using namespace cmi;

namespace {

// smallest u_max with no holes, from all pairwise differences
bool covers(const std::vector<int>& pos, int u_max)
{
    std::set<int> d;
    for (int a : pos)
        for (int b : pos) d.insert(a - b);
    for (int u = 0; u <= u_max; ++u)
        if (!d.contains(u)) return false;
    return true;
}

// exhaustive: every subset of 0..u_max containing both ends
bool exists_full_coverage(std::size_t n, int u_max)
{
    const int inner = u_max - 1;
    for (unsigned mask = 0; mask < (1u << inner); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != n - 2) continue;
        std::vector<int> pos{0, u_max};
        for (int k = 0; k < inner; ++k)
            if (mask >> k & 1) pos.push_back(k + 1);
        if (covers(pos, u_max)) return true;
    }
    return false;
}

} // namespace

TEST_CASE("four-element array covers 13 samples without redundancy")
{
    const auto g = min_redundancy_4();
    const auto b = baselines(g);
    CHECK(b.distinct() == 13);
    CHECK(b.redundant() == 0);
    CHECK(b.off_zero_total() == 12);
    CHECK(b.multiplicity({0, 0}) == 4);
    for (int u = -6; u <= 6; ++u) CHECK(b.multiplicity({u, 0}) == (u == 0 ? 4 : 1));
    CHECK(g.baseline(3, 0) == Baseline{6, 0});
    CHECK(g.is_linear());
}

TEST_CASE("two-dimensional eight-element array")
{
    const auto b = baselines(two_dim_33pixel_8el());
    CHECK(b.distinct() == 33);
    CHECK(b.off_zero_total() == 56);
    CHECK(b.redundant() == 24);
    for (int v = -1; v <= 1; ++v)
        for (int u = -5; u <= 5; ++u) CHECK(b.multiplicity({u, v}) > 0);
}

TEST_CASE("sixteen-element grid gives 169 samples")
{
    const auto b = baselines(grid_13x13_16el());
    CHECK(b.distinct() == 169);
    CHECK(b.count_on_u_axis() == 13);
    CHECK(b.count_on_v_axis() == 13);
}

TEST_CASE("pixel-count formulas")
{
    CHECK(pixels_y_config(5) == 181);
    CHECK(pixels_t_config(5) == 121);
    CHECK(pixels_t_config(4) == 81);
    const auto t = t_config(4);
    CHECK(t.size() == 13);
    // the hole-free centred square of the T layout
    const auto b = baselines(t);
    for (int v = -4; v <= 4; ++v)
        for (int u = -4; u <= 4; ++u) CHECK(b.multiplicity({u, v}) > 0);
}

TEST_CASE("full-coverage linear search agrees with exhaustive enumeration")
{
    for (std::size_t n = 3; n <= 6; ++n)
        for (int u_max = static_cast<int>(n); u_max <= 14; ++u_max) {
            const bool expected = exists_full_coverage(n, u_max);
            if (expected) {
                const auto g = find_full_coverage_linear(n, u_max);
                std::vector<int> pos;
                for (const auto& p : g.positions()) pos.push_back(p.x);
                CHECK(covers(pos, u_max));
                CHECK(g.size() == n);
            } else {
                CHECK_THROWS_AS(find_full_coverage_linear(n, u_max), CoverageInfeasible);
            }
        }
}

TEST_CASE("eight elements reach u = 15 and give 31 samples")
{
    const auto g = find_full_coverage_linear(8, 15, 0.5);
    CHECK(baselines(g).distinct() == 31);
    try {
        find_full_coverage_linear(4, 7);
        FAIL("expected infeasible");
    } catch (const CoverageInfeasible& e) {
        CHECK(e.largest_u_max == 6);
    }
}

TEST_CASE("field of view and resolution")
{
    const auto f4 = fov_resolution(min_redundancy_4());
    REQUIRE(f4.x);
    CHECK_FALSE(f4.y);
    CHECK(f4.x->fov_deg == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(f4.x->resolution_deg == doctest::Approx(4.41).epsilon(0.002));
    CHECK(f4.x->beamwidth_deg == doctest::Approx(8.82).epsilon(0.002));

    const auto f33 = fov_resolution(two_dim_33pixel_8el());
    REQUIRE(f33.x);
    REQUIRE(f33.y);
    CHECK(f33.x->fov_deg == doctest::Approx(90.0));
    CHECK(f33.x->resolution_deg == doctest::Approx(10.48).epsilon(0.001));
    CHECK(f33.y->fov_deg == doctest::Approx(14.48).epsilon(0.001));
    CHECK(f33.y->resolution_deg == doctest::Approx(9.59).epsilon(0.001));
}

TEST_CASE("coherence limit")
{
    CHECK(coherence_limit(6e9, 30) == doctest::Approx(0.0999).epsilon(0.001));
    CHECK(coherence_limit(1e9, 90) == doctest::Approx(0.2998).epsilon(0.001));
    CHECK_THROWS_AS(coherence_limit(0, 30), std::invalid_argument);
}

TEST_CASE("geometry file round trip and errors")
{
    std::istringstream in("# demo\nname demo\npitch 0.5 2\n0 0\n1 0\n3 1\n");
    const auto g = read_geometry(in);
    CHECK(g.name() == "demo");
    CHECK(g.size() == 3);
    CHECK(g.pitch_y() == 2.0);
    std::istringstream bad("0 0\n1 0\n");
    CHECK_THROWS_AS(read_geometry(bad), std::invalid_argument);
    std::istringstream dup("pitch 1\n0 0\n0 0\n");
    CHECK_THROWS_AS(read_geometry(dup), std::invalid_argument);
    CHECK_THROWS_AS(builtin_geometry("nope"), std::invalid_argument);
    for (const auto& name : builtin_geometry_names()) CHECK(builtin_geometry(name).name() == name);
}

TEST_CASE("small full-coverage layouts")
{
    auto xs = [](const ArrayGeometry& g) {
        std::vector<int> pos;
        for (const auto& p : g.positions()) pos.push_back(p.x);
        return pos;
    };
    CHECK(xs(find_full_coverage_linear(4, 6)) == std::vector<int>{0, 1, 4, 6});
    CHECK(xs(find_full_coverage_linear(3, 3)) == std::vector<int>{0, 1, 3});
}

TEST_CASE("baseline multiplicities")
{
    for (const auto& name : builtin_geometry_names()) {
        const auto g = builtin_geometry(name);
        const auto b = baselines(g);
        const int n = static_cast<int>(g.size());
        CHECK(b.off_zero_total() == n * (n - 1));
        for (const auto& [bl, m] : b.samples) CHECK(b.multiplicity(-bl) == m);
    }
    for (int d = 1; d <= 5; ++d) {
        const ArrayGeometry pair("pair", {{0, 0}, {d, 0}}, 1.0);
        const auto b = baselines(pair);
        CHECK(b.distinct() == 3);
        CHECK(b.multiplicity({d, 0}) == 1);
        CHECK(b.multiplicity({-d, 0}) == 1);
    }
}

TEST_CASE("resolution sharpens with more samples")
{
    double prev = 90.0;
    for (std::size_t n = 3; n <= 41; n += 2) {
        const auto r = axis_resolution(1.0, n);
        CHECK(r.resolution_deg < prev);
        prev = r.resolution_deg;
    }
}

TEST_CASE("sixteen-element grid field of view")
{
    const auto f = fov_resolution(grid_13x13_16el());
    REQUIRE(f.x);
    REQUIRE(f.y);
    for (const auto& a : {*f.x, *f.y}) {
        CHECK(a.fov_deg == doctest::Approx(30.0).epsilon(0.003));
        CHECK(a.resolution_deg == doctest::Approx(4.4).epsilon(0.01));
    }
}
