// SPDX-License-Identifier: Apache-2.0

#include "cmi/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace cmi {

ArrayGeometry::ArrayGeometry(std::string name, std::vector<GridPoint> positions, double pitch_x, double pitch_y,
                             double wavelength_m)
    : name_(std::move(name)), positions_(std::move(positions)), pitch_x_(pitch_x), pitch_y_(pitch_y),
      wavelength_(wavelength_m)
{
    if (positions_.empty()) throw std::invalid_argument("geometry '" + name_ + "' has no elements");
    if (!(pitch_x_ > 0) || !(pitch_y_ > 0)) throw std::invalid_argument("geometry pitch must be > 0");
    if (!(wavelength_ > 0)) throw std::invalid_argument("geometry wavelength must be > 0");
    std::set<GridPoint> seen(positions_.begin(), positions_.end());
    if (seen.size() != positions_.size())
        throw std::invalid_argument("geometry '" + name_ + "' has coincident elements");
}

Baseline ArrayGeometry::baseline(std::size_t a, std::size_t b) const
{
    return {positions_.at(a).x - positions_.at(b).x, positions_.at(a).y - positions_.at(b).y};
}

bool ArrayGeometry::is_linear() const
{
    return std::all_of(positions_.begin(), positions_.end(),
                       [&](const GridPoint& p) { return p.y == positions_.front().y; });
}

int BaselineSet::multiplicity(Baseline b) const
{
    auto it = samples.find(b);
    return it == samples.end() ? 0 : it->second;
}

int BaselineSet::off_zero_total() const
{
    int total = 0;
    for (const auto& [b, n] : samples)
        if (b != Baseline{}) total += n;
    return total;
}

int BaselineSet::redundant() const
{
    const int distinct_off_zero = static_cast<int>(samples.size()) - (samples.contains(Baseline{}) ? 1 : 0);
    return off_zero_total() - distinct_off_zero;
}

std::size_t BaselineSet::count_on_u_axis() const
{
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const auto& kv) { return kv.first.v == 0; }));
}

std::size_t BaselineSet::count_on_v_axis() const
{
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const auto& kv) { return kv.first.u == 0; }));
}

BaselineSet baselines(const ArrayGeometry& geom)
{
    BaselineSet out;
    const std::size_t n = geom.size();
    out.samples[Baseline{}] = static_cast<int>(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b) ++out.samples[geom.baseline(a, b)];
    return out;
}

ArrayGeometry min_redundancy_4()
{
    return ArrayGeometry("min-redundancy-4", {{0, 0}, {1, 0}, {4, 0}, {6, 0}}, 1.0);
}

ArrayGeometry grid_13x13_16el()
{
    constexpr int axis[] = {0, 1, 4, 6};
    std::vector<GridPoint> pos;
    for (int y : axis)
        for (int x : axis) pos.push_back({x, y});
    return ArrayGeometry("grid-16-169", std::move(pos), 1.0, 1.0);
}

ArrayGeometry two_dim_33pixel_8el()
{
    // lower row: two boards side by side; upper row 2 lambda above. u-v
    // coverage is the full u in -5..5, v in -1..1 rectangle.
    return ArrayGeometry("two-dim-8-33", {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {0, 1}, {5, 1}}, 0.5,
                         2.0);
}

ArrayGeometry uniform_linear(std::size_t n_elements, double pitch)
{
    std::vector<GridPoint> pos;
    for (std::size_t i = 0; i < n_elements; ++i) pos.push_back({static_cast<int>(i), 0});
    return ArrayGeometry("linear-" + std::to_string(n_elements), std::move(pos), pitch);
}

ArrayGeometry t_config(std::size_t arm_n, double pitch)
{
    if (arm_n < 1) throw std::invalid_argument("T configuration needs arm_n >= 1");
    const int n = static_cast<int>(arm_n);
    std::vector<GridPoint> pos{{0, 0}};
    for (int k = 1; k <= n; ++k) {
        pos.push_back({-k, 0});
        pos.push_back({k, 0});
        pos.push_back({0, -k});
    }
    return ArrayGeometry("t-config-" + std::to_string(pixels_t_config(arm_n)), std::move(pos), pitch, pitch);
}

namespace {

class CoverageSearch {
public:
    CoverageSearch(std::size_t n, int u_max) : n_(n), u_max_(u_max), covered_(static_cast<std::size_t>(u_max) + 1, 0) {}

    std::optional<std::vector<int>> run()
    {
        pos_ = {0};
        place(u_max_);
        if (!dfs(1)) return std::nullopt;
        std::vector<int> out = pos_;
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void place(int p)
    {
        for (int q : pos_) ++covered_[static_cast<std::size_t>(std::abs(p - q))];
        pos_.push_back(p);
    }
    void unplace()
    {
        const int p = pos_.back();
        pos_.pop_back();
        for (int q : pos_) --covered_[static_cast<std::size_t>(std::abs(p - q))];
    }
    std::size_t holes() const
    {
        return static_cast<std::size_t>(std::count(covered_.begin() + 1, covered_.end(), 0));
    }

    // pos_ = {0, u_max, interior...}; interior positions are placed in increasing order
    bool dfs(int next)
    {
        const std::size_t remaining = n_ - pos_.size();
        if (remaining == 0) return holes() == 0;
        // each new element adds at most (current + later) distinct differences
        std::size_t budget = 0;
        for (std::size_t k = 0; k < remaining; ++k) budget += pos_.size() + k;
        if (holes() > budget) return false;
        for (int p = next; p <= u_max_ - static_cast<int>(remaining); ++p) {
            place(p);
            if (dfs(p + 1)) return true;
            unplace();
        }
        return false;
    }

    std::size_t n_;
    int u_max_;
    std::vector<int> covered_;
    std::vector<int> pos_;
};

} // namespace

ArrayGeometry find_full_coverage_linear(std::size_t n_elements, int u_max, double pitch)
{
    if (n_elements < 2) throw std::invalid_argument("full-coverage search needs n_elements >= 2");
    if (u_max < 1) throw std::invalid_argument("full-coverage search needs u_max >= 1");

    auto attempt = [&](int target) -> std::optional<std::vector<int>> {
        if (static_cast<int>(n_elements) > target + 1) return std::nullopt;
        return CoverageSearch(n_elements, target).run();
    };

    if (auto sol = attempt(u_max)) {
        std::vector<GridPoint> pos;
        for (int x : *sol) pos.push_back({x, 0});
        return ArrayGeometry("linear-" + std::to_string(n_elements) + "-cover-" + std::to_string(u_max),
                             std::move(pos), pitch);
    }
    int largest = 0;
    for (int t = u_max - 1; t >= 1; --t)
        if (attempt(t)) {
            largest = t;
            break;
        }
    throw CoverageInfeasible("no hole-free " + std::to_string(n_elements) + "-element linear array reaches u_max=" +
                                 std::to_string(u_max) + "; largest coverable u_max is " + std::to_string(largest),
                             largest);
}

AxisResolution axis_resolution(double pitch, std::size_t samples)
{
    constexpr double deg = 180.0 / std::numbers::pi;
    const double fov = std::asin(std::min(1.0, 1.0 / (2.0 * pitch))) * deg;
    const double res = std::asin(std::min(1.0, 1.0 / (static_cast<double>(samples) * pitch))) * deg;
    return {fov, res, 2.0 * res, samples};
}

FovResolution fov_resolution(const ArrayGeometry& geom)
{
    const auto bs = baselines(geom);
    FovResolution out;
    if (const auto nu = bs.count_on_u_axis(); nu > 1) out.x = axis_resolution(geom.pitch_x(), nu);
    if (const auto nv = bs.count_on_v_axis(); nv > 1) out.y = axis_resolution(geom.pitch_y(), nv);
    return out;
}

std::size_t pixels_y_config(std::size_t arm_n) { return 2 * (3 * arm_n * arm_n + 3 * arm_n) + 1; }

std::size_t pixels_t_config(std::size_t arm_n) { return (2 * arm_n + 1) * (2 * arm_n + 1); }

double coherence_limit(double bandwidth_hz, double theta_max_deg)
{
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("coherence_limit: bandwidth must be > 0");
    if (!(theta_max_deg > 0) || theta_max_deg > 90)
        throw std::invalid_argument("coherence_limit: theta_max must be in (0, 90] degrees");
    return kSpeedOfLight / (bandwidth_hz * std::sin(theta_max_deg * std::numbers::pi / 180.0));
}

ArrayGeometry read_geometry(std::istream& in, const std::string& default_name)
{
    std::string name = default_name;
    double px = 0, py = 0, wavelength = 0.005;
    std::vector<GridPoint> pos;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "pitch") {
            if (!(ls >> px)) throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": bad pitch");
            if (!(ls >> py)) py = px;
        } else if (first == "wavelength") {
            if (!(ls >> wavelength))
                throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": bad wavelength");
        } else if (first == "name") {
            ls >> name;
        } else {
            GridPoint p;
            std::istringstream xs(first);
            if (!(xs >> p.x) || !(ls >> p.y))
                throw std::invalid_argument("geometry line " + std::to_string(lineno) + ": expected 'x y'");
            pos.push_back(p);
        }
    }
    if (px <= 0) throw std::invalid_argument("geometry file missing 'pitch' header");
    return ArrayGeometry(name, std::move(pos), px, py, wavelength);
}

std::vector<std::string> builtin_geometry_names()
{
    return {"min-redundancy-4", "linear-8-31", "two-dim-8-33", "grid-16-169", "t-config-81", "linear-15"};
}

ArrayGeometry builtin_geometry(const std::string& name)
{
    if (name == "min-redundancy-4") return min_redundancy_4();
    if (name == "linear-8-31") {
        auto g = find_full_coverage_linear(8, 15, 0.5);
        return ArrayGeometry(name, g.positions(), 0.5);
    }
    if (name == "two-dim-8-33") return two_dim_33pixel_8el();
    if (name == "grid-16-169") return grid_13x13_16el();
    if (name == "t-config-81") return t_config(4);
    if (name == "linear-15") {
        auto g = uniform_linear(15, 0.5);
        return ArrayGeometry(name, g.positions(), 0.5);
    }
    throw std::invalid_argument("unknown geometry '" + name + "'");
}

} // namespace cmi
