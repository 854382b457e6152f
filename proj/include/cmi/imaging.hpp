// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/geometry.hpp"
#include "cmi/visibility.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cmi {

// Real image over direction cosines. Pixel (i, j) has bin offsets
// i - (width-1)/2 and j - (height-1)/2 from the centre, l = bin / (N pitch_x).
class BrightnessMap {
public:
    BrightnessMap(std::size_t width, std::size_t height, double dl, double dm);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t pixel_count() const { return pixels_.size(); }
    double dl() const { return dl_; }
    double dm() const { return dm_; }

    double& at(std::size_t i, std::size_t j) { return pixels_[j * width_ + i]; }
    double at(std::size_t i, std::size_t j) const { return pixels_[j * width_ + i]; }
    int bin_l(std::size_t i) const { return static_cast<int>(i) - static_cast<int>(width_ / 2); }
    int bin_m(std::size_t j) const { return static_cast<int>(j) - static_cast<int>(height_ / 2); }
    double l(std::size_t i) const { return bin_l(i) * dl_; }
    double m(std::size_t j) const { return bin_m(j) * dm_; }

    std::vector<double>& pixels() { return pixels_; }
    const std::vector<double>& pixels() const { return pixels_; }

private:
    std::size_t width_, height_;
    double dl_, dm_;
    std::vector<double> pixels_;
};

class CoverageError : public std::runtime_error {
public:
    CoverageError(const std::string& what, std::vector<Baseline> missing)
        : std::runtime_error(what), missing(std::move(missing)) {}
    std::vector<Baseline> missing;
};

struct DiftOptions {
    // Imaged rectangle |u| <= u_max, |v| <= v_max; unset -> bounding box of the samples.
    std::optional<int> u_max;
    std::optional<int> v_max;
    // Visibility taper; rectangular when empty.
    std::function<double(Baseline)> window;
    // Divide by the pixel count so a constant V gives 1 at the centre.
    bool per_pixel_scale = true;
    double imag_tolerance = 1e-9; // relative to the peak magnitude
};

// Largest centred rectangle with no holes in the sample grid.
std::pair<int, int> filled_extent(const VisibilityFunction& vis);

// Bounding box when the coverage is a full rectangle, else filled_extent.
DiftOptions hole_free_options(const VisibilityFunction& vis, DiftOptions base = {});

// T(i, j) = (1/N_p) sum_{u,v} V(u, v) exp(-j 2 pi (u i / N + v j / M)).
BrightnessMap dift(const VisibilityFunction& vis, const ArrayGeometry& geom, const DiftOptions& opts = {});

// Unit point source at (0, 0) through the analytic forward model and dift.
BrightnessMap psf(const ArrayGeometry& geom, const DiftOptions& opts = {});

struct PixelIndex {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const PixelIndex&) const = default;
};

// argmax, lowest (row-major) index wins ties
PixelIndex peak(const BrightnessMap& map);
BrightnessMap normalize(BrightnessMap map);

// Strict local maxima (8-neighbourhood, edges included) at or above
// min_fraction of the global peak, in descending order.
std::vector<PixelIndex> local_maxima(const BrightnessMap& map, double min_fraction = 0.0);

// Nearest pixel bin for a direction cosine, wrapped into the centred range.
int predicted_bin(double l, double pitch, std::size_t samples);

void write_pgm(std::ostream& out, const BrightnessMap& map, bool binary = true);
void write_csv(std::ostream& out, const BrightnessMap& map);
void write_axis_metadata(std::ostream& out, const BrightnessMap& map);

} // namespace cmi
