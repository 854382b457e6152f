// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "cmi/codegen.hpp"
#include "cmi/geometry.hpp"
#include "cmi/scene.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cmi {

using cplx = std::complex<double>;

enum class SimMode { envelope, passband };

struct SimParams {
    double sample_rate = 1.0;        // samples/s; normalized units are fine
    double carrier_hz = 0.25;        // passband mode only
    double bandwidth_hz = 0.5;       // two-sided RF bandwidth seen at the envelope
    std::size_t code_length = 1024;  // L, chips per run
    std::size_t samples_per_chip = 64;
    double receiver_temp = 0.0;      // T_RT, uncorrelated per-element noise power
    double combiner_gain = 1.0;      // k_c
    SimMode mode = SimMode::envelope;
    std::size_t filter_taps = 63;    // band-limiting FIR length (odd)
    uint64_t seed = 1;
    unsigned workers = 1;

    std::size_t total_samples() const { return code_length * samples_per_chip; }
    double chip_rate() const { return sample_rate / static_cast<double>(samples_per_chip); }
    // tau_LF: one code period
    double integration_time() const { return static_cast<double>(total_samples()) / sample_rate; }
    void validate() const;
};

struct ElementStream {
    std::vector<cplx> samples; // complex envelope
    std::size_t element_id = 0;
    double static_offset = 0.0; // Theta, radians
};

// Deterministic RNG seed for one (seed, run, kind, id) substream.
uint64_t substream_seed(uint64_t seed, uint64_t run, uint64_t kind, uint64_t id);

// Windowed-sinc low-pass, cutoff in cycles/sample (0 < cutoff <= 0.5).
// `unit_power` normalizes sum h^2 = 1 (noise shaping), otherwise sum h = 1.
std::vector<double> lowpass_fir(std::size_t taps, double cutoff, bool unit_power);

// Band-limited complex Gaussian noise of the given power.
std::vector<cplx> band_limited_noise(std::size_t n, double power, const SimParams& params, uint64_t substream);

// Each emitter is an independent band-limited Gaussian process with power
// T_k; element n receives sum_k a_k(t) exp(j 2 pi (px x_n l_k + py y_n m_k))
// plus its own receiver noise (T_RT + scene background). `run` selects an
// independent realization for sequential acquisitions.
std::vector<ElementStream> synthesize(const Scene& scene, const ArrayGeometry& geom, const SimParams& params,
                                      uint64_t run = 0);

// Per chip t, element n is rotated by c_n(t) e^{j Theta_n} (binary mode,
// q_codes empty) or by (i_n(t) + j q_n(t)) / sqrt(2) e^{j Theta_n}.
std::vector<ElementStream> modulate(std::vector<ElementStream> streams, std::span<const Code> i_codes,
                                    std::span<const Code> q_codes, std::span<const double> offsets,
                                    std::size_t samples_per_chip);

std::vector<cplx> combine(std::span<const ElementStream> streams, double combiner_gain = 1.0);
std::vector<double> combine(std::span<const std::vector<double>> streams, double combiner_gain = 1.0);

// Envelope z -> sqrt(2) Re{z e^{j w_o t}}; power preserving.
std::vector<double> to_passband(std::span<const cplx> envelope, const SimParams& params);

// |s|^2
std::vector<double> detect_power(std::span<const cplx> s_sum);
// s^2 followed by a low-pass stage removing the 2 w_o term
std::vector<double> detect_power(std::span<const double> s_sum, const SimParams& params);

// Binary dump: text header then little-endian float32 (re, im) pairs.
void write_stream_dump(std::ostream& out, std::span<const ElementStream> streams, const std::string& params_hash);

} // namespace cmi
