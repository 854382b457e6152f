// SPDX-License-Identifier: Apache-2.0

#include "cmi/sensitivity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cmi {

namespace {

void require_positive(double v, const char* name)
{
    if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

} // namespace

void RadiometricParams::validate() const
{
    if (n_elements == 0) throw std::invalid_argument("n_elements must be > 0");
    if (pixels == 0) throw std::invalid_argument("pixels must be > 0");
    require_positive(t_sys, "t_sys");
    require_positive(bandwidth, "bandwidth");
    require_positive(tau, "tau");
    require_positive(k_e, "k_e");
}

double lf_bandwidth(double tau)
{
    require_positive(tau, "tau");
    return 1.0 / (2.0 * tau);
}

double delta_t_min(double k_e, double t_sys, double bandwidth, double tau)
{
    require_positive(k_e, "k_e");
    require_positive(t_sys, "t_sys");
    require_positive(bandwidth, "bandwidth");
    require_positive(tau, "tau");
    return k_e * t_sys / std::sqrt(bandwidth * tau);
}

double delta_t_vis(std::size_t n_elements, double t_sys, double bandwidth, double tau)
{
    if (n_elements == 0) throw std::invalid_argument("n_elements must be > 0");
    return delta_t_min(static_cast<double>(n_elements), t_sys, bandwidth, tau);
}

double delta_t_image(double t_sys, std::size_t pixels, double bandwidth, double tau)
{
    if (pixels == 0) throw std::invalid_argument("pixels must be > 0");
    return delta_t_min(std::sqrt(static_cast<double>(pixels)), t_sys, bandwidth, tau);
}

double delta_t_image_cmi(std::size_t n_elements, double t_sys, std::size_t pixels, double bandwidth, double tau)
{
    if (n_elements == 0) throw std::invalid_argument("n_elements must be > 0");
    return static_cast<double>(n_elements) * delta_t_image(t_sys, pixels, bandwidth, tau);
}

SensitivityReport evaluate(const RadiometricParams& p)
{
    p.validate();
    return {delta_t_vis(p.n_elements, p.t_sys, p.bandwidth, p.tau), delta_t_image(p.t_sys, p.pixels, p.bandwidth, p.tau),
            delta_t_image_cmi(p.n_elements, p.t_sys, p.pixels, p.bandwidth, p.tau)};
}

} // namespace cmi
