#pragma once

#include <complex>

#include "mlamatch/constants.hpp"

namespace mlamatch {

using cplx = std::complex<double>;

/// One point of a frequency grid with its derived angular frequency and
/// free-space wavenumber.
struct FrequencyPoint {
    double f;      // Hz
    double omega;  // rad/s
    double k0;     // rad/m
};

FrequencyPoint frequency_point(double f_hz);

/// A uniform rectangular waveguide piece. width_a is the broad dimension,
/// height_b the narrow one; the cross section is filled with a dielectric
/// of relative permittivity eps_r (lossless unless tan_delta > 0).
struct GuideSection {
    double width_a;   // m
    double height_b;  // m
    double length_l;  // m
    double eps_r;     // dimensionless, >= 1
    double tan_delta = 0.0;
};

void validate(const GuideSection& sec);

/// TE_m0 modal quantities of one section at one frequency.
///
/// beta is real positive above cutoff and -j|beta| below it, so that the
/// forward factor exp(-j beta z) decays along +z in an evanescent section.
/// z_pv is the power-voltage impedance (omega*mu0/beta)*(2*height_b/width_a);
/// E-plane steps at fixed width and fill reduce to plain height ratios in it.
struct ModalParams {
    int mode_m;
    cplx beta;    // rad/m
    cplx z_pv;    // ohm
    cplx y_char;  // 1/z_pv
};

/// TE_m0 cutoff frequency of a section, Hz.
double cutoff_frequency(const GuideSection& sec, int m);

/// Modal parameters for odd TE_m0. Throws std::domain_error at exact cutoff
/// (beta = 0, impedance undefined) and std::invalid_argument on bad inputs.
ModalParams modal_params(const GuideSection& sec, const FrequencyPoint& fp, int m);

}  // namespace mlamatch
