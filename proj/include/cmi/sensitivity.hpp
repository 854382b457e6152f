// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace cmi {

struct RadiometricParams {
    std::size_t n_elements = 1;
    double t_sys = 0.0;     // kelvin, T_A + T_RT
    double bandwidth = 0.0; // RF bandwidth, Hz
    double tau = 0.0;       // post-detection integration, s
    std::size_t pixels = 1;
    double k_e = 1.0;

    void validate() const;
};

// Post-detection bandwidth implied by an integrator of length tau.
double lf_bandwidth(double tau);

// K_e T_sys / sqrt(bw tau)
double delta_t_min(double k_e, double t_sys, double bandwidth, double tau);

// N T_sys / sqrt(bw tau)
double delta_t_vis(std::size_t n_elements, double t_sys, double bandwidth, double tau);

// T_sys sqrt(N_p) / sqrt(bw tau)
double delta_t_image(double t_sys, std::size_t pixels, double bandwidth, double tau);

// N T_sys sqrt(N_p) / sqrt(bw tau). Valid while N dT << N T_sys.
double delta_t_image_cmi(std::size_t n_elements, double t_sys, std::size_t pixels, double bandwidth, double tau);

struct SensitivityReport {
    double vis = 0.0;
    double image = 0.0;
    double image_cmi = 0.0;
};

SensitivityReport evaluate(const RadiometricParams& p);

} // namespace cmi
