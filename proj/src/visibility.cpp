// SPDX-License-Identifier: Apache-2.0

#include "cmi/visibility.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cmi {

void VisibilityFunction::set(Baseline b, cplx value, int redundancy)
{
    if (b == Baseline{}) {
        set_v0(value.real(), redundancy);
        return;
    }
    samples_[b] = {value, redundancy};
    samples_[-b] = {std::conj(value), redundancy};
}

void VisibilityFunction::set_v0(double v0, int redundancy) { samples_[Baseline{}] = {cplx(v0, 0.0), redundancy}; }

cplx VisibilityFunction::value(Baseline b) const
{
    auto it = samples_.find(b);
    if (it == samples_.end())
        throw std::out_of_range("no visibility sample at (" + std::to_string(b.u) + ", " + std::to_string(b.v) + ")");
    return it->second.value;
}

int VisibilityFunction::redundancy(Baseline b) const
{
    auto it = samples_.find(b);
    return it == samples_.end() ? 0 : it->second.redundancy;
}

VisibilityFunction assemble_visibilities(std::span<const PairVisibility> pairs, const ArrayGeometry& geom, double v0)
{
    struct Acc {
        cplx sum;
        int count = 0;
    };
    std::map<Baseline, Acc> acc;
    for (const auto& pv : pairs) {
        if (pv.a == pv.b) throw std::invalid_argument("pair visibility with identical elements");
        Baseline b = geom.baseline(pv.a, pv.b);
        cplx v = pv.value;
        // canonical half-plane: u > 0, or u == 0 and v > 0
        if (b.u < 0 || (b.u == 0 && b.v < 0)) {
            b = -b;
            v = std::conj(v);
        }
        auto& a = acc[b];
        a.sum += v;
        ++a.count;
    }
    VisibilityFunction out;
    out.set_v0(v0, static_cast<int>(geom.size()));
    for (const auto& [b, a] : acc) out.set(b, a.sum / static_cast<double>(a.count), a.count);
    return out;
}

VisibilityFunction calibrate_zero_baseline(VisibilityFunction vis)
{
    const int red = vis.redundancy(Baseline{});
    vis.set_v0(0.0, red);
    return vis;
}

uint64_t fnv1a64(std::string_view data)
{
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string geometry_hash(const ArrayGeometry& geom)
{
    std::ostringstream s;
    s.precision(17);
    s << geom.pitch_x() << ' ' << geom.pitch_y() << ' ' << geom.wavelength();
    for (const auto& p : geom.positions()) s << ';' << p.x << ',' << p.y;
    return hex64(fnv1a64(s.str()));
}

void write_visibility_dump(std::ostream& out, const VisibilityFunction& vis,
                           const std::map<std::string, std::string>& header)
{
    out << "# CMI visibility dump v1\n";
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << '\n';
    out << "# u v re im redundancy\n";
    char line[160];
    for (const auto& [b, s] : vis.samples()) {
        std::snprintf(line, sizeof line, "%d %d %.17g %.17g %d\n", b.u, b.v, s.value.real(), s.value.imag(),
                      s.redundancy);
        out << line;
    }
}

VisibilityFunction read_visibility_dump(std::istream& in, std::map<std::string, std::string>* header)
{
    VisibilityFunction vis;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (header) {
                const auto eq = line.find(" = ");
                if (eq != std::string::npos && line.size() > 2) (*header)[line.substr(2, eq - 2)] = line.substr(eq + 3);
            }
            continue;
        }
        std::istringstream ls(line);
        Baseline b;
        double re, im;
        int red;
        if (!(ls >> b.u >> b.v >> re >> im >> red))
            throw std::invalid_argument("visibility dump line " + std::to_string(lineno) + ": expected 'u v re im redundancy'");
        // canonical half only; set() restores the conjugate
        if (b.u > 0 || (b.u == 0 && b.v > 0) || b == Baseline{}) vis.set(b, {re, im}, red);
    }
    return vis;
}

} // namespace cmi
