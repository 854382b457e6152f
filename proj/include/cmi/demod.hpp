// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/codegen.hpp"
#include "cmi/geometry.hpp"
#include "cmi/visibility.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace cmi {

// Binary (0/180 deg) modulation leaves E(c_n c_m p) = 2 Re(V_nm e^{j(Th_n - Th_m)});
// demodulated values are divided by this before assembly. Concurrent I/Q
// modulation with unit-power phase states has gain 1.
inline constexpr double kBinaryProductGain = 2.0;

// Block average of p over each chip.
std::vector<double> chip_average(std::span<const double> p, std::size_t samples_per_chip);

// (1/L) sum_t product[t] * chip_average(p)[t]
double demodulate_component(std::span<const double> p, const Code& product, std::size_t samples_per_chip);

enum class Component { re, im };

struct Extraction {
    std::size_t a = 0; // element ids, a < b
    std::size_t b = 0;
    Component component = Component::re;
    int sign = 1; // demodulated value = sign * component(V_ab)
};

struct AcquisitionRun {
    std::vector<std::size_t> quadrature; // elements held at +90 deg
    std::vector<Extraction> extracted;   // empty -> run is skipped
};

struct RunPlan {
    std::vector<AcquisitionRun> runs;
    // Theta per element for run r
    std::vector<double> offsets(std::size_t run, std::size_t n_elements) const;
};

// Run 1: all in phase (every Re). Runs 2..: element k in quadrature in run r
// iff bit (K - r) of k is set, K = ceil(log2 n); at least three runs.
RunPlan plan_three_runs(std::size_t n_elements);

class IncompleteVisibility : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Binary-mode sequential acquisition: p_per_run[r] is the detected power of
// run r (may be empty for skipped runs); codes holds one code per element.
VisibilityFunction demodulate_all(std::span<const std::vector<double>> p_per_run, std::span<const Code> codes,
                                  const RunPlan& plan, const ArrayGeometry& geom, std::size_t samples_per_chip);

// Single-run complex recovery: Re from i_n i_m and q_n q_m, Im from i_n q_m
// and -(i_m q_n); readings are averaged.
VisibilityFunction demodulate_concurrent(std::span<const double> p, std::span<const Code> i_codes,
                                         std::span<const Code> q_codes, const ArrayGeometry& geom,
                                         std::size_t samples_per_chip);

// runs x L / chip_rate
double frame_time(std::size_t runs, std::size_t code_length, double chip_rate);

} // namespace cmi
