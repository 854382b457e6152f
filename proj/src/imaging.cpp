// SPDX-License-Identifier: Apache-2.0

#include "cmi/imaging.hpp"
#include "cmi/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace cmi {

BrightnessMap::BrightnessMap(std::size_t width, std::size_t height, double dl, double dm)
    : width_(width), height_(height), dl_(dl), dm_(dm), pixels_(width * height, 0.0)
{
    if (width == 0 || height == 0) throw std::invalid_argument("brightness map must be nonempty");
}

std::pair<int, int> filled_extent(const VisibilityFunction& vis)
{
    auto filled = [&](int um, int vm) {
        for (int v = -vm; v <= vm; ++v)
            for (int u = -um; u <= um; ++u)
                if (!vis.contains({u, v})) return false;
        return true;
    };
    int u_lim = 0;
    while (vis.contains({u_lim + 1, 0})) ++u_lim;
    std::pair<int, int> best{0, 0};
    long best_area = 1;
    for (int um = u_lim; um >= 0; --um) {
        int vm = 0;
        while (filled(um, vm + 1)) ++vm;
        const long area = (2L * um + 1) * (2L * vm + 1);
        if (area > best_area) {
            best_area = area;
            best = {um, vm};
        }
    }
    return best;
}

BrightnessMap dift(const VisibilityFunction& vis, const ArrayGeometry& geom, const DiftOptions& opts)
{
    if (vis.size() == 0) throw std::invalid_argument("dift: empty visibility function");
    int u_max = 0, v_max = 0;
    for (const auto& [b, s] : vis.samples()) {
        u_max = std::max(u_max, std::abs(b.u));
        v_max = std::max(v_max, std::abs(b.v));
    }
    if (opts.u_max) u_max = *opts.u_max;
    if (opts.v_max) v_max = *opts.v_max;

    std::vector<Baseline> missing;
    for (int v = -v_max; v <= v_max; ++v)
        for (int u = -u_max; u <= u_max; ++u)
            if (!vis.contains({u, v})) missing.push_back({u, v});
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "u-v coverage has " << missing.size() << " hole(s):";
        for (std::size_t k = 0; k < std::min<std::size_t>(missing.size(), 12); ++k)
            msg << " (" << missing[k].u << "," << missing[k].v << ")";
        if (missing.size() > 12) msg << " ...";
        throw CoverageError(msg.str(), std::move(missing));
    }

    const auto n = static_cast<std::size_t>(2 * u_max + 1);
    const auto m = static_cast<std::size_t>(2 * v_max + 1);
    const double two_pi = 2.0 * std::numbers::pi;

    // separable: transform along u for every v row, then along v
    std::vector<cplx> rows(n * m);
    for (int v = -v_max; v <= v_max; ++v) {
        const auto vj = static_cast<std::size_t>(v + v_max);
        for (int bi = -u_max; bi <= u_max; ++bi) {
            cplx acc{};
            for (int u = -u_max; u <= u_max; ++u) {
                const Baseline b{u, v};
                const double w = opts.window ? opts.window(b) : 1.0;
                acc += w * vis.value(b) *
                       std::polar(1.0, -two_pi * static_cast<double>(u) * bi / static_cast<double>(n));
            }
            rows[vj * n + static_cast<std::size_t>(bi + u_max)] = acc;
        }
    }

    BrightnessMap map(n, m, 1.0 / (static_cast<double>(n) * geom.pitch_x()),
                      1.0 / (static_cast<double>(m) * geom.pitch_y()));
    const double scale = opts.per_pixel_scale ? 1.0 / static_cast<double>(n * m) : 1.0;
    double peak_mag = 0, imag_max = 0;
    for (int bj = -v_max; bj <= v_max; ++bj)
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc{};
            for (int v = -v_max; v <= v_max; ++v)
                acc += rows[static_cast<std::size_t>(v + v_max) * n + i] *
                       std::polar(1.0, -two_pi * static_cast<double>(v) * bj / static_cast<double>(m));
            acc *= scale;
            peak_mag = std::max(peak_mag, std::abs(acc));
            imag_max = std::max(imag_max, std::abs(acc.imag()));
            map.at(i, static_cast<std::size_t>(bj + v_max)) = acc.real();
        }
    if (peak_mag > 0 && imag_max > opts.imag_tolerance * peak_mag)
        throw std::runtime_error("dift: imaginary residual " + std::to_string(imag_max / peak_mag) +
                                 " of peak exceeds tolerance; visibilities are not conjugate symmetric");
    return map;
}

DiftOptions hole_free_options(const VisibilityFunction& vis, DiftOptions base)
{
    int bu = 0, bv = 0;
    for (const auto& [b, s] : vis.samples()) {
        bu = std::max(bu, std::abs(b.u));
        bv = std::max(bv, std::abs(b.v));
    }
    if ((2L * bu + 1) * (2L * bv + 1) != static_cast<long>(vis.size())) {
        const auto [um, vm] = filled_extent(vis);
        base.u_max = um;
        base.v_max = vm;
    }
    return base;
}

BrightnessMap psf(const ArrayGeometry& geom, const DiftOptions& opts)
{
    Scene unit;
    unit.emitters.push_back({0.0, 0.0, 1.0});
    auto vis = analytic_visibility_function(unit, geom);
    return dift(vis, geom, opts.u_max || opts.v_max ? opts : hole_free_options(vis, opts));
}

PixelIndex peak(const BrightnessMap& map)
{
    const auto& px = map.pixels();
    const auto it = std::max_element(px.begin(), px.end()); // first maximum
    const auto flat = static_cast<std::size_t>(it - px.begin());
    return {flat % map.width(), flat / map.width()};
}

BrightnessMap normalize(BrightnessMap map)
{
    double mag = 0;
    for (double v : map.pixels()) mag = std::max(mag, std::abs(v));
    if (mag == 0) throw std::invalid_argument("normalize: all-zero brightness map");
    for (double& v : map.pixels()) v /= mag;
    return map;
}

std::vector<PixelIndex> local_maxima(const BrightnessMap& map, double min_fraction)
{
    const auto top = map.at(peak(map).i, peak(map).j);
    std::vector<std::pair<double, PixelIndex>> found;
    const auto w = static_cast<long>(map.width()), h = static_cast<long>(map.height());
    for (long j = 0; j < h; ++j)
        for (long i = 0; i < w; ++i) {
            const double v = map.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (v < min_fraction * top) continue;
            bool is_max = true;
            for (long dj = -1; dj <= 1 && is_max; ++dj)
                for (long di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const long ni = i + di, nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= w || nj >= h) continue;
                    if (map.at(static_cast<std::size_t>(ni), static_cast<std::size_t>(nj)) >= v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) found.push_back({v, {static_cast<std::size_t>(i), static_cast<std::size_t>(j)}});
        }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<PixelIndex> out;
    for (const auto& f : found) out.push_back(f.second);
    return out;
}

int predicted_bin(double l, double pitch, std::size_t samples)
{
    const auto n = static_cast<long>(samples);
    const long half = n / 2;
    long b = std::lround(l * pitch * static_cast<double>(samples));
    b = ((b + half) % n + n) % n - half;
    return static_cast<int>(b);
}

void write_pgm(std::ostream& out, const BrightnessMap& map, bool binary)
{
    const auto [lo_it, hi_it] = std::minmax_element(map.pixels().begin(), map.pixels().end());
    const double lo = *lo_it, span = *hi_it - *lo_it;
    auto gray = [&](double v) { return span > 0 ? static_cast<int>(std::lround(255.0 * (v - lo) / span)) : 0; };
    // top row is the largest m
    out << (binary ? "P5" : "P2") << '\n' << map.width() << ' ' << map.height() << "\n255\n";
    for (std::size_t r = 0; r < map.height(); ++r) {
        const std::size_t j = map.height() - 1 - r;
        for (std::size_t i = 0; i < map.width(); ++i) {
            const int g = gray(map.at(i, j));
            if (binary) out.put(static_cast<char>(g));
            else out << g << (i + 1 == map.width() ? '\n' : ' ');
        }
    }
}

void write_csv(std::ostream& out, const BrightnessMap& map)
{
    char buf[32];
    for (std::size_t r = 0; r < map.height(); ++r) {
        const std::size_t j = map.height() - 1 - r;
        for (std::size_t i = 0; i < map.width(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", map.at(i, j));
            out << buf << (i + 1 == map.width() ? '\n' : ',');
        }
    }
}

void write_axis_metadata(std::ostream& out, const BrightnessMap& map)
{
    char buf[64];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << key << " = " << buf << '\n';
    };
    out << "coordinates = direction-cosine\n";
    out << "width = " << map.width() << '\n' << "height = " << map.height() << '\n';
    put("dl", map.dl());
    put("dm", map.dm());
    put("l_min", map.l(0));
    put("l_max", map.l(map.width() - 1));
    put("m_min", map.m(0));
    put("m_max", map.m(map.height() - 1));
    out << "csv_row_order = m descending\n";
}

} // namespace cmi
