// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/geometry.hpp"
#include "cmi/visibility.hpp"

#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

namespace cmi {

// Incoherent point emitter in direction cosines. Brightness is a
// kelvin-equivalent power.
struct Emitter {
    double l = 0.0;
    double m = 0.0;
    double brightness = 1.0;
};

struct Scene {
    std::vector<Emitter> emitters;
    double background = 0.0; // uniform level, zero baseline only

    void validate() const;
    double total_brightness() const;
};

// Convenience: emitter at azimuth theta (degrees from broadside) on the l axis.
Emitter emitter_at_angle(double theta_deg, double brightness = 1.0);

// sum_k T_k exp(j 2 pi (pitch_x u l_k + pitch_y v m_k)), plus the background
// on the zero baseline.
std::complex<double> analytic_visibility(const Scene& scene, Baseline uv, double pitch_x, double pitch_y = 1.0);
std::complex<double> analytic_visibility(const Scene& scene, Baseline uv, const ArrayGeometry& geom);

// Noise-free visibility function on every baseline of the geometry, with the
// geometry's multiplicities as redundancy.
VisibilityFunction analytic_visibility_function(const Scene& scene, const ArrayGeometry& geom);

struct BinaryMask {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<uint8_t> cells; // row-major, row 0 at the top (largest m)

    bool at(std::size_t row, std::size_t col) const { return cells[row * width + col] != 0; }
    std::size_t count() const;
};

// One emitter per set cell (or per_cell x per_cell sub-emitters), centred on
// the cell, spanning l in [-extent_l, extent_l] and m in [-extent_m, extent_m].
// Total brightness per cell is `brightness`.
Scene raster_scene(const BinaryMask& mask, double extent_l, double extent_m, double brightness,
                   std::size_t per_cell = 1);

// Plain PBM (P1) reader.
BinaryMask read_pbm(std::istream& in);

// "l m brightness" per line, optional "background <T>" line, '#' comments.
Scene read_scene(std::istream& in);
void write_scene(std::ostream& out, const Scene& scene);

} // namespace cmi
