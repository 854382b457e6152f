// SPDX-License-Identifier: Apache-2.0

#include "cmi/scene.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cmi {

void Scene::validate() const
{
    for (std::size_t k = 0; k < emitters.size(); ++k) {
        const auto& e = emitters[k];
        if (!std::isfinite(e.l) || !std::isfinite(e.m) || e.l * e.l + e.m * e.m > 1.0 + 1e-12)
            throw std::invalid_argument("emitter " + std::to_string(k) + " lies outside the unit circle");
        if (!(e.brightness >= 0)) throw std::invalid_argument("emitter " + std::to_string(k) + " has negative brightness");
    }
    if (!(background >= 0)) throw std::invalid_argument("scene background must be >= 0");
}

double Scene::total_brightness() const
{
    double t = 0;
    for (const auto& e : emitters) t += e.brightness;
    return t;
}

Emitter emitter_at_angle(double theta_deg, double brightness)
{
    return {std::sin(theta_deg * std::numbers::pi / 180.0), 0.0, brightness};
}

std::complex<double> analytic_visibility(const Scene& scene, Baseline uv, double pitch_x, double pitch_y)
{
    std::complex<double> v{0.0, 0.0};
    const double ku = 2.0 * std::numbers::pi * pitch_x * uv.u;
    const double kv = 2.0 * std::numbers::pi * pitch_y * uv.v;
    for (const auto& e : scene.emitters) v += e.brightness * std::polar(1.0, ku * e.l + kv * e.m);
    if (uv == Baseline{}) v += scene.background;
    return v;
}

std::complex<double> analytic_visibility(const Scene& scene, Baseline uv, const ArrayGeometry& geom)
{
    return analytic_visibility(scene, uv, geom.pitch_x(), geom.pitch_y());
}

VisibilityFunction analytic_visibility_function(const Scene& scene, const ArrayGeometry& geom)
{
    VisibilityFunction vis;
    for (const auto& [b, mult] : baselines(geom).samples)
        if (b.u > 0 || (b.u == 0 && b.v >= 0)) vis.set(b, analytic_visibility(scene, b, geom), mult);
    return vis;
}

std::size_t BinaryMask::count() const
{
    std::size_t n = 0;
    for (auto c : cells) n += c != 0;
    return n;
}

Scene raster_scene(const BinaryMask& mask, double extent_l, double extent_m, double brightness, std::size_t per_cell)
{
    if (mask.count() == 0) throw std::invalid_argument("raster_scene: mask has no set cells");
    if (per_cell == 0) throw std::invalid_argument("raster_scene: per_cell must be >= 1");
    Scene scene;
    const double cell_l = 2.0 * extent_l / static_cast<double>(mask.width);
    const double cell_m = 2.0 * extent_m / static_cast<double>(mask.height);
    const double sub = static_cast<double>(per_cell);
    const double each = brightness / (sub * sub);
    for (std::size_t r = 0; r < mask.height; ++r)
        for (std::size_t c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            for (std::size_t sr = 0; sr < per_cell; ++sr)
                for (std::size_t sc = 0; sc < per_cell; ++sc) {
                    const double l = -extent_l + cell_l * (static_cast<double>(c) + (static_cast<double>(sc) + 0.5) / sub);
                    const double m = extent_m - cell_m * (static_cast<double>(r) + (static_cast<double>(sr) + 0.5) / sub);
                    scene.emitters.push_back({l, m, each});
                }
        }
    scene.validate();
    return scene;
}

namespace {

// next whitespace-delimited token, skipping '#' comments
bool next_token(std::istream& in, std::string& tok)
{
    tok.clear();
    char ch;
    while (in.get(ch)) {
        if (ch == '#') {
            std::string rest;
            std::getline(in, rest);
            if (!tok.empty()) return true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!tok.empty()) return true;
            continue;
        }
        tok.push_back(ch);
    }
    return !tok.empty();
}

} // namespace

BinaryMask read_pbm(std::istream& in)
{
    std::string tok;
    if (!next_token(in, tok) || tok != "P1") throw std::invalid_argument("not a plain PBM (P1) file");
    BinaryMask mask;
    std::string w, h;
    if (!next_token(in, w) || !next_token(in, h)) throw std::invalid_argument("PBM: missing dimensions");
    mask.width = std::stoul(w);
    mask.height = std::stoul(h);
    if (mask.width == 0 || mask.height == 0) throw std::invalid_argument("PBM: empty image");
    mask.cells.reserve(mask.width * mask.height);
    // P1 pixels may be packed without separators
    char ch;
    while (mask.cells.size() < mask.width * mask.height && in.get(ch)) {
        if (ch == '#') {
            std::string rest;
            std::getline(in, rest);
        } else if (ch == '0' || ch == '1') {
            mask.cells.push_back(static_cast<uint8_t>(ch - '0'));
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            throw std::invalid_argument(std::string("PBM: unexpected character '") + ch + "'");
        }
    }
    if (mask.cells.size() != mask.width * mask.height) throw std::invalid_argument("PBM: truncated pixel data");
    return mask;
}

Scene read_scene(std::istream& in)
{
    Scene scene;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "background") {
            if (!(ls >> scene.background))
                throw std::invalid_argument("scene line " + std::to_string(lineno) + ": bad background");
            continue;
        }
        Emitter e;
        std::istringstream fs(first);
        if (!(fs >> e.l) || !(ls >> e.m >> e.brightness))
            throw std::invalid_argument("scene line " + std::to_string(lineno) + ": expected 'l m brightness'");
        scene.emitters.push_back(e);
    }
    scene.validate();
    return scene;
}

void write_scene(std::ostream& out, const Scene& scene)
{
    out << std::setprecision(17);
    out << "# l m brightness\n";
    if (scene.background != 0) out << "background " << scene.background << '\n';
    for (const auto& e : scene.emitters) out << e.l << ' ' << e.m << ' ' << e.brightness << '\n';
}

} // namespace cmi
