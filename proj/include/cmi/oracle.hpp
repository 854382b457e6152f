// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/rfchain.hpp"
#include "cmi/visibility.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace cmi {

// Conventional complex correlator per pair on unmodulated streams:
// V_ab = mean(s_a conj(s_b)), v_0 = mean autocorrelation. Baseline mapping
// and redundancy averaging are shared with demod.
VisibilityFunction correlator_bank(std::span<const ElementStream> streams, const ArrayGeometry& geom,
                                   unsigned workers = 1);

struct SampleDelta {
    Baseline baseline;
    cplx delta; // B - A
};

struct ComparisonReport {
    double rms_rel_error = 0.0;
    double max_rel_error = 0.0;
    std::vector<SampleDelta> deltas;
};

class CoverageMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Errors are |B - A| / max|A| over every stored sample (both half-planes).
ComparisonReport compare(const VisibilityFunction& a, const VisibilityFunction& b);

} // namespace cmi
