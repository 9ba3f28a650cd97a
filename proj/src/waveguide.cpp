#include "mlamatch/waveguide.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mlamatch {

FrequencyPoint frequency_point(double f_hz) {
    if (!std::isfinite(f_hz) || f_hz <= 0.0) {
        throw std::invalid_argument("frequency must be positive and finite, got " +
                                    std::to_string(f_hz) + " Hz");
    }
    const double omega = 2.0 * pi * f_hz;
    return {f_hz, omega, omega / speed_of_light};
}

void validate(const GuideSection& sec) {
    if (!std::isfinite(sec.width_a) || sec.width_a <= 0.0)
        throw std::invalid_argument("guide width_a must be positive");
    if (!std::isfinite(sec.height_b) || sec.height_b <= 0.0)
        throw std::invalid_argument("guide height_b must be positive");
    if (!std::isfinite(sec.length_l) || sec.length_l < 0.0)
        throw std::invalid_argument("guide length_l must be nonnegative");
    if (!std::isfinite(sec.eps_r) || sec.eps_r < 1.0)
        throw std::invalid_argument("guide eps_r must be >= 1");
    if (!std::isfinite(sec.tan_delta) || sec.tan_delta < 0.0)
        throw std::invalid_argument("guide tan_delta must be nonnegative");
}

double cutoff_frequency(const GuideSection& sec, int m) {
    validate(sec);
    if (m < 1) throw std::invalid_argument("mode index must be positive");
    return m * speed_of_light / (2.0 * sec.width_a * std::sqrt(sec.eps_r));
}

ModalParams modal_params(const GuideSection& sec, const FrequencyPoint& fp, int m) {
    validate(sec);
    if (m < 1 || m % 2 == 0) {
        throw std::invalid_argument("TE_m0 index must be an odd positive integer, got " +
                                    std::to_string(m));
    }
    const double kc = m * pi / sec.width_a;
    const cplx eps(sec.eps_r, -sec.eps_r * sec.tan_delta);
    const cplx arg = eps * (fp.k0 * fp.k0) - kc * kc;
    if (std::abs(arg) <= 1e-12 * sec.eps_r * fp.k0 * fp.k0) {
        throw std::domain_error("TE" + std::to_string(m) + "0 mode is degenerate at f = " +
                                std::to_string(fp.f) +
                                " Hz (exact cutoff, impedance undefined)");
    }
    // Propagating: beta real positive. Evanescent: -j|beta| so the forward
    // factor exp(-j beta z) decays. With loss the principal square root of a
    // lower-half-plane argument already lands at Re > 0, Im < 0.
    cplx beta;
    if (arg.imag() == 0.0 && arg.real() < 0.0) {
        beta = cplx(0.0, -std::sqrt(-arg.real()));
    } else {
        beta = std::sqrt(arg);
    }
    const cplx z_pv = (fp.omega * mu0 / beta) * (2.0 * sec.height_b / sec.width_a);
    return {m, beta, z_pv, 1.0 / z_pv};
}

}  // namespace mlamatch
