// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/geometry.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cmi {

using cplx = std::complex<double>;

struct VisSample {
    cplx value;
    int redundancy = 0;
};

// Complex samples on the integer u-v grid. Every write also stores the
// conjugate at (-u, -v), so conjugate symmetry holds by construction.
class VisibilityFunction {
public:
    void set(Baseline b, cplx value, int redundancy = 1);
    void set_v0(double v0, int redundancy);

    bool contains(Baseline b) const { return samples_.contains(b); }
    cplx value(Baseline b) const;
    int redundancy(Baseline b) const;
    double v0() const { return value(Baseline{}).real(); }

    const std::map<Baseline, VisSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

private:
    std::map<Baseline, VisSample> samples_;
};

// Correlation estimate for one element pair, V_ab = <s_a conj(s_b)>.
struct PairVisibility {
    std::size_t a = 0;
    std::size_t b = 0;
    cplx value;
};

// Maps pair correlations onto baselines (x_a - x_b, y_a - y_b), averaging
// pairs that share a baseline (unweighted), and sets v_0 with multiplicity N.
VisibilityFunction assemble_visibilities(std::span<const PairVisibility> pairs, const ArrayGeometry& geom, double v0);

VisibilityFunction calibrate_zero_baseline(VisibilityFunction vis);

uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t v);
std::string geometry_hash(const ArrayGeometry& geom);

// Text records "u v re im redundancy" after '#'-prefixed "key = value" headers.
void write_visibility_dump(std::ostream& out, const VisibilityFunction& vis,
                           const std::map<std::string, std::string>& header);
VisibilityFunction read_visibility_dump(std::istream& in, std::map<std::string, std::string>* header = nullptr);

} // namespace cmi
