#include "mlamatch/two_port.hpp"

#include <cmath>
#include <stdexcept>

namespace mlamatch {

TransmissionMatrix t_line(cplx beta, double length) {
    if (!std::isfinite(length) || length < 0.0)
        throw std::invalid_argument("line length must be nonnegative");
    const cplx jbl = cplx(0.0, 1.0) * beta * length;
    return {std::exp(-jbl), 0.0, 0.0, std::exp(jbl)};
}

TransmissionMatrix t_hw(const GuideSection& sec, const FrequencyPoint& fp) {
    return t_line(modal_params(sec, fp, 1).beta, sec.length_l);
}

TransmissionMatrix t_interface(cplx z_left, cplx z_right) {
    const double scale = std::abs(z_left) + std::abs(z_right);
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("junction impedances must be nonzero and finite");
    const cplx sum = z_left + z_right;
    if (std::abs(sum) <= 1e-15 * scale)
        throw std::runtime_error("singular junction: impedances sum to zero");
    const cplx rho = (z_right - z_left) / sum;
    const cplx tau2 = 1.0 - rho * rho;
    if (std::abs(tau2) <= 1e-30)
        throw std::runtime_error("singular junction: total reflection");
    const cplx inv_tau = 1.0 / std::sqrt(tau2);
    return {inv_tau, rho * inv_tau, rho * inv_tau, inv_tau};
}

TransmissionMatrix t_shunt(cplx y_normalized) {
    const cplx h = 0.5 * y_normalized;
    return {1.0 - h, -h, h, 1.0 + h};
}

TransmissionMatrix cascade(std::span<const TransmissionMatrix> matrices) {
    if (matrices.empty())
        throw std::invalid_argument("cascade of an empty section list");
    TransmissionMatrix acc = matrices[0];
    for (std::size_t k = 1; k < matrices.size(); ++k) acc = acc * matrices[k];
    return acc;
}

cplx gamma_in(const TransmissionMatrix& t, cplx gamma_ap) {
    const cplx den = t.t21 * gamma_ap + t.t22;
    if (std::abs(den) < 1e-30)
        throw std::runtime_error("singular network: reflection denominator vanishes");
    return (t.t11 * gamma_ap + t.t12) / den;
}

}  // namespace mlamatch
