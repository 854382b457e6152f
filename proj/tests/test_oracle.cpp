// SPDX-License-Identifier: Apache-2.0

#include "cmi/oracle.hpp"
#include "cmi/scene.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cmi;

TEST_CASE("identical streams give real, equal visibilities")
{
    const auto g = min_redundancy_4();
    ElementStream s;
    s.samples = {cplx(1, 2), cplx(-0.5, 0.3), cplx(0.1, -1)};
    const std::vector<ElementStream> streams(4, s);
    const auto vis = correlator_bank(streams, g);
    double p = 0;
    for (const auto& v : s.samples) p += std::norm(v);
    p /= 3;
    for (const auto& [b, smp] : vis.samples()) {
        CHECK(smp.value.real() == doctest::Approx(p));
        CHECK(smp.value.imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("correlator bank phase for a source at 20 degrees")
{
    Scene s;
    s.emitters.push_back(emitter_at_angle(20));
    SimParams prm;
    prm.code_length = 16;
    prm.samples_per_chip = 64;
    const auto g = uniform_linear(3, 1.0);
    const auto vis = correlator_bank(synthesize(s, g, prm), g);
    const double expected = std::remainder(2 * std::numbers::pi * std::sin(20 * std::numbers::pi / 180), 2 * std::numbers::pi);
    CHECK(std::arg(vis.value({1, 0})) == doctest::Approx(expected).epsilon(1e-9));
    // conjugate symmetry is exact
    for (const auto& [b, smp] : vis.samples()) CHECK(vis.value(-b) == std::conj(smp.value));
}

TEST_CASE("correlator bank approaches the analytic visibilities")
{
    Scene s;
    s.emitters = {emitter_at_angle(-15, 1.0), emitter_at_angle(35, 0.5)};
    SimParams prm;
    prm.code_length = 256;
    prm.samples_per_chip = 512;
    prm.bandwidth_hz = 0.9;
    prm.receiver_temp = 0.2;
    prm.workers = 4;
    const auto g = builtin_geometry("linear-8-31");
    const auto vis = correlator_bank(synthesize(s, g, prm), g, 4);
    auto ref = analytic_visibility_function(s, g);
    ref.set_v0(ref.v0() + prm.receiver_temp, 8);
    const auto rep = compare(ref, vis);
    CHECK(rep.rms_rel_error < 0.02);
}

TEST_CASE("worker count does not change the correlator bank")
{
    Scene s;
    s.emitters = {{0.2, 0.0, 1.0}};
    SimParams prm;
    prm.code_length = 16;
    prm.samples_per_chip = 64;
    prm.receiver_temp = 1;
    const auto g = min_redundancy_4();
    const auto st = synthesize(s, g, prm);
    const auto a = correlator_bank(st, g, 1), b = correlator_bank(st, g, 3);
    for (const auto& [bl, smp] : a.samples()) CHECK(b.value(bl) == smp.value);
}

TEST_CASE("compare")
{
    Scene s;
    s.emitters.push_back(emitter_at_angle(20));
    const auto g = min_redundancy_4();
    const auto a = analytic_visibility_function(s, g);
    const auto same = compare(a, a);
    CHECK(same.rms_rel_error == 0.0);
    CHECK(same.max_rel_error == 0.0);
    VisibilityFunction twice;
    for (const auto& [b, smp] : a.samples())
        if (b.u > 0) twice.set(b, 2.0 * smp.value);
    twice.set_v0(2 * a.v0(), 4);
    const auto rep = compare(a, twice);
    CHECK(rep.rms_rel_error == doctest::Approx(1.0));
    CHECK(rep.deltas.size() == a.size());

    const auto other = analytic_visibility_function(s, uniform_linear(3, 1.0));
    CHECK_THROWS_AS(compare(a, other), CoverageMismatch);
    const std::vector<ElementStream> none;
    CHECK_THROWS_AS(correlator_bank(none, g), std::invalid_argument);
}
