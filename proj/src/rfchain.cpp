// SPDX-License-Identifier: Apache-2.0

#include "cmi/rfchain.hpp"
#include "cmi/parallel.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace cmi {

namespace {

constexpr uint64_t kEmitterStream = 1;
constexpr uint64_t kReceiverStream = 2;

uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

void SimParams::validate() const
{
    if (!(sample_rate > 0)) throw std::invalid_argument("sample_rate must be > 0");
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("bandwidth must be > 0");
    if (code_length == 0) throw std::invalid_argument("code_length must be >= 1");
    if (samples_per_chip == 0) throw std::invalid_argument("samples_per_chip must be >= 1");
    if (!(receiver_temp >= 0)) throw std::invalid_argument("receiver_temp must be >= 0");
    if (filter_taps == 0 || filter_taps % 2 == 0) throw std::invalid_argument("filter_taps must be odd");
    if (mode == SimMode::passband) {
        if (!(carrier_hz > 0)) throw std::invalid_argument("passband mode needs carrier > 0");
        if (sample_rate < 4.0 * carrier_hz) throw std::invalid_argument("passband mode needs sample_rate >= 4 * carrier");
        if (bandwidth_hz >= carrier_hz) throw std::invalid_argument("passband mode needs bandwidth < carrier");
    }
}

uint64_t substream_seed(uint64_t seed, uint64_t run, uint64_t kind, uint64_t id)
{
    uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ run);
    h = splitmix64(h ^ (kind << 56));
    return splitmix64(h ^ id);
}

std::vector<double> lowpass_fir(std::size_t taps, double cutoff, bool unit_power)
{
    if (taps == 0 || taps % 2 == 0) throw std::invalid_argument("FIR length must be odd");
    if (!(cutoff > 0) || cutoff > 0.5) throw std::invalid_argument("FIR cutoff must be in (0, 0.5]");
    std::vector<double> h(taps);
    const double mid = static_cast<double>(taps - 1) / 2.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double t = static_cast<double>(i) - mid;
        const double sinc = t == 0 ? 2.0 * cutoff : std::sin(2.0 * std::numbers::pi * cutoff * t) / (std::numbers::pi * t);
        const double w = taps == 1 ? 1.0
                                   : 0.42 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / (2.0 * mid)) +
                                         0.08 * std::cos(4.0 * std::numbers::pi * static_cast<double>(i) / (2.0 * mid));
        h[i] = sinc * w;
    }
    double norm = 0;
    for (double v : h) norm += unit_power ? v * v : v;
    norm = unit_power ? std::sqrt(norm) : norm;
    for (double& v : h) v /= norm;
    return h;
}

std::vector<cplx> band_limited_noise(std::size_t n, double power, const SimParams& params, uint64_t substream)
{
    std::mt19937_64 rng(substream);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double cutoff = params.bandwidth_hz / (2.0 * params.sample_rate);
    const double amp = std::sqrt(power);

    if (cutoff >= 0.5 || params.filter_taps == 1) {
        std::vector<cplx> out(n);
        for (auto& s : out) s = amp * cplx(normal(rng), normal(rng));
        return out;
    }

    const auto h = lowpass_fir(params.filter_taps, cutoff, true);
    const std::size_t taps = h.size();
    std::vector<cplx> white(n + taps - 1);
    for (auto& s : white) s = cplx(normal(rng), normal(rng));
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double re = 0, im = 0;
        const cplx* x = white.data() + i;
        for (std::size_t k = 0; k < taps; ++k) {
            re += h[k] * x[k].real();
            im += h[k] * x[k].imag();
        }
        out[i] = amp * cplx(re, im);
    }
    return out;
}

std::vector<ElementStream> synthesize(const Scene& scene, const ArrayGeometry& geom, const SimParams& params,
                                      uint64_t run)
{
    params.validate();
    scene.validate();
    const std::size_t n = params.total_samples();
    const std::size_t n_emit = scene.emitters.size();
    const std::size_t n_elem = geom.size();

    std::vector<std::vector<cplx>> sources(n_emit);
    parallel_for(n_emit, params.workers, [&](std::size_t k) {
        sources[k] = band_limited_noise(n, scene.emitters[k].brightness, params,
                                        substream_seed(params.seed, run, kEmitterStream, k));
    });

    std::vector<ElementStream> out(n_elem);
    const double noise_power = params.receiver_temp + scene.background;
    parallel_for(n_elem, params.workers, [&](std::size_t e) {
        auto& s = out[e];
        s.element_id = e;
        if (noise_power > 0) {
            s.samples = band_limited_noise(n, noise_power, params, substream_seed(params.seed, run, kReceiverStream, e));
        } else {
            s.samples.assign(n, cplx{});
        }
        const auto& p = geom.positions()[e];
        for (std::size_t k = 0; k < n_emit; ++k) {
            const auto& em = scene.emitters[k];
            const cplx phase = std::polar(
                1.0, 2.0 * std::numbers::pi * (geom.pitch_x() * p.x * em.l + geom.pitch_y() * p.y * em.m));
            const auto& src = sources[k];
            for (std::size_t i = 0; i < n; ++i) s.samples[i] += src[i] * phase;
        }
    });
    return out;
}

std::vector<ElementStream> modulate(std::vector<ElementStream> streams, std::span<const Code> i_codes,
                                    std::span<const Code> q_codes, std::span<const double> offsets,
                                    std::size_t samples_per_chip)
{
    const std::size_t n = streams.size();
    if (i_codes.size() != n)
        throw std::invalid_argument("modulate: " + std::to_string(i_codes.size()) + " i-codes for " +
                                    std::to_string(n) + " streams");
    if (!q_codes.empty() && q_codes.size() != n)
        throw std::invalid_argument("modulate: " + std::to_string(q_codes.size()) + " q-codes for " +
                                    std::to_string(n) + " streams");
    if (!offsets.empty() && offsets.size() != n)
        throw std::invalid_argument("modulate: offset count does not match stream count");
    if (samples_per_chip == 0) throw std::invalid_argument("modulate: samples_per_chip must be >= 1");

    const bool quadrature = !q_codes.empty();
    for (std::size_t e = 0; e < n; ++e) {
        auto& s = streams[e];
        const Code& ic = i_codes[e];
        if (ic.length() * samples_per_chip != s.samples.size() ||
            (quadrature && q_codes[e].length() != ic.length()))
            throw std::invalid_argument("modulate: code length does not match stream " + std::to_string(e));
        s.static_offset = offsets.empty() ? 0.0 : offsets[e];
        const cplx static_rot = std::polar(1.0, s.static_offset);
        for (std::size_t chip = 0; chip < ic.length(); ++chip) {
            const cplx rot = quadrature ? cplx(ic[chip], q_codes[e][chip]) * (1.0 / std::numbers::sqrt2) * static_rot
                                        : static_cast<double>(ic[chip]) * static_rot;
            cplx* x = s.samples.data() + chip * samples_per_chip;
            for (std::size_t k = 0; k < samples_per_chip; ++k) x[k] *= rot;
        }
    }
    return streams;
}

std::vector<cplx> combine(std::span<const ElementStream> streams, double combiner_gain)
{
    if (streams.empty()) return {};
    const std::size_t n = streams.front().samples.size();
    std::vector<cplx> out(n);
    for (const auto& s : streams) {
        if (s.samples.size() != n) throw std::invalid_argument("combine: stream length mismatch");
        for (std::size_t i = 0; i < n; ++i) out[i] += s.samples[i];
    }
    for (auto& v : out) v *= combiner_gain;
    return out;
}

std::vector<double> combine(std::span<const std::vector<double>> streams, double combiner_gain)
{
    if (streams.empty()) return {};
    const std::size_t n = streams.front().size();
    std::vector<double> out(n, 0.0);
    for (const auto& s : streams) {
        if (s.size() != n) throw std::invalid_argument("combine: stream length mismatch");
        for (std::size_t i = 0; i < n; ++i) out[i] += s[i];
    }
    for (auto& v : out) v *= combiner_gain;
    return out;
}

std::vector<double> to_passband(std::span<const cplx> envelope, const SimParams& params)
{
    std::vector<double> out(envelope.size());
    const double w = 2.0 * std::numbers::pi * params.carrier_hz / params.sample_rate;
    for (std::size_t i = 0; i < envelope.size(); ++i)
        out[i] = std::numbers::sqrt2 * (envelope[i] * std::polar(1.0, w * static_cast<double>(i))).real();
    return out;
}

std::vector<double> detect_power(std::span<const cplx> s_sum)
{
    std::vector<double> p(s_sum.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s_sum[i]);
    return p;
}

std::vector<double> detect_power(std::span<const double> s_sum, const SimParams& params)
{
    const std::size_t n = s_sum.size();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = s_sum[i] * s_sum[i];

    const double cutoff = std::min(0.5, params.carrier_hz / params.sample_rate);
    const auto h = lowpass_fir(params.filter_taps, cutoff, false);
    const auto half = static_cast<std::ptrdiff_t>(h.size() / 2);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0, weight = 0;
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            const auto j = static_cast<std::ptrdiff_t>(i) + k;
            if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) continue;
            const double hk = h[static_cast<std::size_t>(k + half)];
            acc += hk * sq[static_cast<std::size_t>(j)];
            weight += hk;
        }
        p[i] = acc / weight; // renormalized at the edges
    }
    return p;
}

void write_stream_dump(std::ostream& out, std::span<const ElementStream> streams, const std::string& params_hash)
{
    static_assert(std::endian::native == std::endian::little, "stream dump assumes a little-endian host");
    const std::size_t length = streams.empty() ? 0 : streams.front().samples.size();
    out << "CMI-STREAMS 1\n"
        << "elements " << streams.size() << "\n"
        << "length " << length << "\n"
        << "params_hash " << params_hash << "\n"
        << "format float32le re,im interleaved, element-major\n"
        << "end\n";
    for (const auto& s : streams) {
        for (const auto& v : s.samples) {
            const float pair[2] = {static_cast<float>(v.real()), static_cast<float>(v.imag())};
            out.write(reinterpret_cast<const char*>(pair), sizeof pair);
        }
    }
}

} // namespace cmi
