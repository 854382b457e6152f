// SPDX-License-Identifier: Apache-2.0

#include "cmi/demod.hpp"

#include <bit>
#include <numbers>
#include <string>

namespace cmi {

std::vector<double> chip_average(std::span<const double> p, std::size_t samples_per_chip)
{
    if (samples_per_chip == 0) throw std::invalid_argument("samples_per_chip must be >= 1");
    if (p.size() % samples_per_chip != 0)
        throw std::invalid_argument("power stream length " + std::to_string(p.size()) +
                                    " is not a multiple of samples_per_chip");
    std::vector<double> out(p.size() / samples_per_chip);
    for (std::size_t c = 0; c < out.size(); ++c) {
        double acc = 0;
        for (std::size_t k = 0; k < samples_per_chip; ++k) acc += p[c * samples_per_chip + k];
        out[c] = acc / static_cast<double>(samples_per_chip);
    }
    return out;
}

namespace {

double correlate(std::span<const double> chips, const Code& product)
{
    if (product.length() != chips.size())
        throw std::invalid_argument("code product length " + std::to_string(product.length()) +
                                    " does not match " + std::to_string(chips.size()) + " chips");
    double acc = 0;
    for (std::size_t t = 0; t < chips.size(); ++t) acc += product[t] * chips[t];
    return acc / static_cast<double>(chips.size());
}

double mean(std::span<const double> v)
{
    double acc = 0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

} // namespace

double demodulate_component(std::span<const double> p, const Code& product, std::size_t samples_per_chip)
{
    const auto chips = chip_average(p, samples_per_chip);
    return correlate(chips, product);
}

std::vector<double> RunPlan::offsets(std::size_t run, std::size_t n_elements) const
{
    std::vector<double> th(n_elements, 0.0);
    for (std::size_t e : runs.at(run).quadrature) th.at(e) = std::numbers::pi / 2.0;
    return th;
}

RunPlan plan_three_runs(std::size_t n_elements)
{
    if (n_elements < 2) throw std::invalid_argument("run plan needs at least two elements");
    const auto label_bits = static_cast<std::size_t>(std::bit_width(n_elements - 1));
    const std::size_t n_runs = std::max<std::size_t>(3, 1 + label_bits);

    RunPlan plan;
    plan.runs.resize(n_runs);
    for (std::size_t r = 1; r <= label_bits; ++r) {
        const std::size_t bit = label_bits - r;
        for (std::size_t e = 0; e < n_elements; ++e)
            if ((e >> bit) & 1) plan.runs[r].quadrature.push_back(e);
    }
    for (std::size_t r = 0; r < n_runs; ++r) {
        auto& run = plan.runs[r];
        if (r > 0 && run.quadrature.empty()) continue;
        std::vector<bool> quad(n_elements, false);
        for (auto e : run.quadrature) quad[e] = true;
        for (std::size_t a = 0; a < n_elements; ++a)
            for (std::size_t b = a + 1; b < n_elements; ++b) {
                if (quad[a] == quad[b]) run.extracted.push_back({a, b, Component::re, 1});
                else run.extracted.push_back({a, b, Component::im, quad[b] ? 1 : -1});
            }
    }
    return plan;
}

VisibilityFunction demodulate_all(std::span<const std::vector<double>> p_per_run, std::span<const Code> codes,
                                  const RunPlan& plan, const ArrayGeometry& geom, std::size_t samples_per_chip)
{
    const std::size_t n = geom.size();
    if (codes.size() < n) throw std::invalid_argument("demodulate_all: fewer codes than elements");
    if (p_per_run.size() != plan.runs.size())
        throw std::invalid_argument("demodulate_all: power streams do not match the run plan");

    struct Acc {
        double sum = 0;
        int count = 0;
    };
    std::vector<Acc> re(n * n), im(n * n);
    double dc_sum = 0;
    int dc_runs = 0;

    for (std::size_t r = 0; r < plan.runs.size(); ++r) {
        const auto& run = plan.runs[r];
        if (run.extracted.empty()) continue;
        if (p_per_run[r].empty())
            throw IncompleteVisibility("run " + std::to_string(r + 1) + " has extractions but no power stream");
        const auto chips = chip_average(p_per_run[r], samples_per_chip);
        dc_sum += mean(chips) / static_cast<double>(n);
        ++dc_runs;
        for (const auto& ex : run.extracted) {
            const double value =
                ex.sign * correlate(chips, code_product(codes[ex.a], codes[ex.b])) / kBinaryProductGain;
            auto& acc = (ex.component == Component::re ? re : im)[ex.a * n + ex.b];
            acc.sum += value;
            ++acc.count;
        }
    }

    std::vector<PairVisibility> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto& rv = re[a * n + b];
            const auto& iv = im[a * n + b];
            if (rv.count == 0 || iv.count == 0)
                throw IncompleteVisibility("no " + std::string(rv.count == 0 ? "real" : "imaginary") +
                                           " reading for pair (" + std::to_string(a + 1) + ", " +
                                           std::to_string(b + 1) + ")");
            pairs.push_back({a, b, cplx(rv.sum / rv.count, iv.sum / iv.count)});
        }
    return assemble_visibilities(pairs, geom, dc_runs ? dc_sum / dc_runs : 0.0);
}

VisibilityFunction demodulate_concurrent(std::span<const double> p, std::span<const Code> i_codes,
                                         std::span<const Code> q_codes, const ArrayGeometry& geom,
                                         std::size_t samples_per_chip)
{
    const std::size_t n = geom.size();
    if (i_codes.size() < n || q_codes.size() < n)
        throw std::invalid_argument("demodulate_concurrent: " + std::to_string(2 * n) + " BOCP codes required, got " +
                                    std::to_string(i_codes.size() + q_codes.size()));
    const auto chips = chip_average(p, samples_per_chip);
    const double v0 = mean(chips) / static_cast<double>(n);

    std::vector<PairVisibility> pairs;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double re = 0.5 * (correlate(chips, code_product(i_codes[a], i_codes[b])) +
                                     correlate(chips, code_product(q_codes[a], q_codes[b])));
            const double im = 0.5 * (correlate(chips, code_product(i_codes[a], q_codes[b])) -
                                     correlate(chips, code_product(i_codes[b], q_codes[a])));
            pairs.push_back({a, b, cplx(re, im)});
        }
    return assemble_visibilities(pairs, geom, v0);
}

double frame_time(std::size_t runs, std::size_t code_length, double chip_rate)
{
    return static_cast<double>(runs * code_length) / chip_rate;
}

} // namespace cmi
