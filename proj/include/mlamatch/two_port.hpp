#pragma once

#include <span>

#include "mlamatch/waveguide.hpp"

namespace mlamatch {

/// 2x2 complex wave-amplitude transmission matrix of one junction or
/// section. The state vector is [reflected; incident] and a matrix maps
/// aperture-side (port 2) waves to input-side (port 1) waves, so a chain
/// reads as the plain left-to-right product with the aperture at the right
/// and the input reflection is the bilinear map
/// (t11*G + t12)/(t21*G + t22) of the load reflection G.
struct TransmissionMatrix {
    cplx t11{1.0}, t12{0.0}, t21{0.0}, t22{1.0};

    static TransmissionMatrix identity() { return {}; }

    cplx det() const { return t11 * t22 - t12 * t21; }

    friend TransmissionMatrix operator*(const TransmissionMatrix& a,
                                        const TransmissionMatrix& b) {
        return {a.t11 * b.t11 + a.t12 * b.t21, a.t11 * b.t12 + a.t12 * b.t22,
                a.t21 * b.t11 + a.t22 * b.t21, a.t21 * b.t12 + a.t22 * b.t22};
    }
};

/// Uniform line of electrical behaviour exp(-j*beta*l) forward:
/// diag(exp(-j beta l), exp(+j beta l)). Unit determinant.
TransmissionMatrix t_line(cplx beta, double length);

/// Homogeneous waveguide section on its dominant TE10 mode.
TransmissionMatrix t_hw(const GuideSection& sec, const FrequencyPoint& fp);

/// Ideal impedance-step junction between two guides, as power waves:
/// (1/tau) [[1, rho], [rho, 1]] with rho = (z_right - z_left)/(z_right + z_left)
/// and tau = sqrt(1 - rho^2). Serves both the fill (eps) junctions and the
/// E-plane (height) steps, which differ only through z_pv.
TransmissionMatrix t_interface(cplx z_left, cplx z_right);

/// Wave T-matrix of a shunt admittance y normalized to the local line
/// (y = Y * z0): [[1 - y/2, -y/2], [y/2, 1 + y/2]]. Unit determinant.
TransmissionMatrix t_shunt(cplx y_normalized);

/// Ordinary left-to-right product of the listed matrices.
TransmissionMatrix cascade(std::span<const TransmissionMatrix> matrices);

/// Input reflection of a network terminated by gamma_ap:
/// (t11*gamma_ap + t12) / (t21*gamma_ap + t22).
/// Throws std::runtime_error when the denominator is singular.
cplx gamma_in(const TransmissionMatrix& t, cplx gamma_ap);

}  // namespace mlamatch
