// SPDX-License-Identifier: Apache-2.0

#include "cmi/oracle.hpp"
#include "cmi/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmi {

VisibilityFunction correlator_bank(std::span<const ElementStream> streams, const ArrayGeometry& geom, unsigned workers)
{
    const std::size_t n = geom.size();
    if (streams.size() != n)
        throw std::invalid_argument("correlator_bank: " + std::to_string(streams.size()) + " streams for " +
                                    std::to_string(n) + " elements");
    const std::size_t len = streams.front().samples.size();
    for (const auto& s : streams)
        if (s.samples.size() != len) throw std::invalid_argument("correlator_bank: stream lengths differ");
    if (len == 0) throw std::invalid_argument("correlator_bank: empty streams");

    std::vector<std::pair<std::size_t, std::size_t>> index;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) index.emplace_back(a, b);
    std::vector<cplx> corr(index.size());
    parallel_for(index.size(), workers, [&](std::size_t k) {
        const auto& sa = streams[index[k].first].samples;
        const auto& sb = streams[index[k].second].samples;
        cplx acc{};
        for (std::size_t t = 0; t < len; ++t) acc += sa[t] * std::conj(sb[t]);
        corr[k] = acc / static_cast<double>(len);
    });

    std::vector<PairVisibility> pairs;
    double v0 = 0;
    for (std::size_t k = 0; k < index.size(); ++k) {
        const auto [a, b] = index[k];
        if (a == b) v0 += corr[k].real();
        else pairs.push_back({a, b, corr[k]});
    }
    return assemble_visibilities(pairs, geom, v0 / static_cast<double>(n));
}

ComparisonReport compare(const VisibilityFunction& a, const VisibilityFunction& b)
{
    if (a.size() != b.size())
        throw CoverageMismatch("coverage mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                               " samples");
    double scale = 0;
    for (const auto& [bl, s] : a.samples()) {
        if (!b.contains(bl))
            throw CoverageMismatch("coverage mismatch at (" + std::to_string(bl.u) + ", " + std::to_string(bl.v) + ")");
        scale = std::max(scale, std::abs(s.value));
    }
    if (scale == 0) throw std::invalid_argument("compare: reference visibilities are all zero");

    ComparisonReport rep;
    double sq = 0;
    for (const auto& [bl, s] : a.samples()) {
        const cplx d = b.value(bl) - s.value;
        const double rel = std::abs(d) / scale;
        sq += rel * rel;
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
        rep.deltas.push_back({bl, d});
    }
    rep.rms_rel_error = std::sqrt(sq / static_cast<double>(a.size()));
    return rep;
}

} // namespace cmi
