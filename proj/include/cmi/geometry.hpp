// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmi {

struct GridPoint {
    int x = 0;
    int y = 0;
    auto operator<=>(const GridPoint&) const = default;
};

// Integer (u, v) baseline on the geometry's grid.
struct Baseline {
    int u = 0;
    int v = 0;
    auto operator<=>(const Baseline&) const = default;
    Baseline operator-() const { return {-u, -v}; }
};

// Element positions on an integer grid. Pitches are in wavelengths, one per
// axis, so u = pitch_x * (x_a - x_b) wavelengths.
class ArrayGeometry {
public:
    ArrayGeometry(std::string name, std::vector<GridPoint> positions, double pitch_x, double pitch_y = 1.0,
                  double wavelength_m = 0.005);

    const std::string& name() const { return name_; }
    const std::vector<GridPoint>& positions() const { return positions_; }
    std::size_t size() const { return positions_.size(); }
    double pitch_x() const { return pitch_x_; }
    double pitch_y() const { return pitch_y_; }
    double wavelength() const { return wavelength_; }

    Baseline baseline(std::size_t a, std::size_t b) const;
    bool is_linear() const;

private:
    std::string name_;
    std::vector<GridPoint> positions_;
    double pitch_x_;
    double pitch_y_;
    double wavelength_;
};

// Multiplicity of every pairwise difference vector, conjugates and the zero
// baseline (multiplicity N) included.
struct BaselineSet {
    std::map<Baseline, int> samples;

    std::size_t distinct() const { return samples.size(); }
    int multiplicity(Baseline b) const;
    // sum of multiplicities excluding the zero baseline
    int off_zero_total() const;
    // entries of ordered pairs whose baseline was already produced by another pair
    int redundant() const;
    std::size_t count_on_u_axis() const;
    std::size_t count_on_v_axis() const;
};

BaselineSet baselines(const ArrayGeometry& geom);

ArrayGeometry min_redundancy_4();
ArrayGeometry grid_13x13_16el();
ArrayGeometry two_dim_33pixel_8el();
ArrayGeometry uniform_linear(std::size_t n_elements, double pitch);
// 3N+1 elements: centre plus left, right and lower arms of N each.
ArrayGeometry t_config(std::size_t arm_n, double pitch = 0.5);

class CoverageInfeasible : public std::runtime_error {
public:
    CoverageInfeasible(const std::string& what, int largest) : std::runtime_error(what), largest_u_max(largest) {}
    int largest_u_max;
};

// First (lexicographic) position set in 0..u_max whose differences cover
// 1..u_max without holes.
ArrayGeometry find_full_coverage_linear(std::size_t n_elements, int u_max, double pitch = 1.0);

struct AxisResolution {
    double fov_deg;        // +- half angle
    double resolution_deg; // peak to first null
    double beamwidth_deg;
    std::size_t samples;
};

struct FovResolution {
    std::optional<AxisResolution> x;
    std::optional<AxisResolution> y;
};

// FOV = asin(1 / (2 pitch)), resolution = asin(1 / (N pitch)), with N the
// number of visibility samples on the axis line. Degenerate axes are omitted.
FovResolution fov_resolution(const ArrayGeometry& geom);
AxisResolution axis_resolution(double pitch, std::size_t samples);

std::size_t pixels_y_config(std::size_t arm_n);
std::size_t pixels_t_config(std::size_t arm_n);

// c / (B sin(theta_max)); theta in degrees
double coherence_limit(double bandwidth_hz, double theta_max_deg);

inline constexpr double kSpeedOfLight = 299'792'458.0;

// Line-oriented geometry file: "pitch <px> [py]", optional "wavelength <m>",
// optional "name <str>", then one "x y" integer pair per line; '#' comments.
ArrayGeometry read_geometry(std::istream& in, const std::string& default_name = "file");
ArrayGeometry builtin_geometry(const std::string& name);
std::vector<std::string> builtin_geometry_names();

} // namespace cmi
