#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mlamatch/constants.hpp"

namespace oracles {

using mlamatch::cplx;
using mlamatch::mu0;
using mlamatch::pi;

namespace {

// Aperture mode kernels, written directly from the Fourier transform of the
// TE_m0 aperture field (m odd): height factor b*sinc(ky*b/2) and width factor
// 2*m*pi*a*(+/-1)*cos(kx*a/2) / ((m*pi)^2 - (kx*a)^2).
double kernel_c0(double ky, double b) {
    const double u = 0.5 * ky * b;
    if (std::abs(u) < 1e-12) return b;
    return b * std::sin(u) / u;
}

double kernel_cm(double cos_half_kxa, double kxa, double a, int m) {
    const double sign = (((m - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    const double mpi = m * pi;
    const double den = (mpi - kxa) * (mpi + kxa);
    if (std::abs(den) < 1e-9) return 0.5 * a;  // removable singularity limit
    return 2.0 * mpi * a * sign * cos_half_kxa / den;
}

// Air-side spectral kz with the decaying branch below the light circle.
cplx spectral_kz(double k0, double k_rho) {
    const double d = (k0 - k_rho) * (k0 + k_rho);
    if (d >= 0.0) return cplx(std::sqrt(d), 0.0);
    return cplx(0.0, -std::sqrt(-d));
}

struct PairAccumulator {
    std::vector<std::pair<int, int>> pairs;
    std::vector<cplx> sums;
};

// Shared per-point work: the scalar spectral weight times every requested
// kernel product. modes_max covers all indices appearing in `pairs`.
void accumulate_point(PairAccumulator& acc, double kx, double ky, double a,
                      double b, double k0, cplx inv_kz_weight) {
    const double kxa = kx * a;
    const double cos_half = std::cos(0.5 * kxa);
    const double c0 = kernel_c0(ky, b);
    const cplx common = inv_kz_weight * ((k0 - kx) * (k0 + kx) * c0 * c0);
    for (std::size_t p = 0; p < acc.pairs.size(); ++p) {
        const double ci = kernel_cm(cos_half, kxa, a, acc.pairs[p].first);
        const double cj = kernel_cm(cos_half, kxa, a, acc.pairs[p].second);
        acc.sums[p] += common * (ci * cj);
    }
}

}  // namespace

std::vector<cplx> brute_force_mutuals(const mlamatch::GuideSection& geom,
                                      const mlamatch::FrequencyPoint& fp,
                                      const std::vector<std::pair<int, int>>& pairs,
                                      const BruteForceSpec& spec) {
    const double a = geom.width_a;
    const double b = geom.height_b;
    const double k0 = fp.k0;
    const double L = spec.extent * k0;
    const double ring = spec.annulus * k0;
    const double band = spec.refine_band * k0;
    const double h = 2.0 * L / spec.n;

    PairAccumulator acc;
    acc.pairs = pairs;
    acc.sums.assign(pairs.size(), cplx(0.0, 0.0));

    // Cartesian sweep: plain midpoint cells away from the ring; cells within
    // `band` of it are subdivided so the circular exclusion boundary is
    // resolved far below the cell size.
    const double sub_h = h / spec.subdivision;
    for (int iy = 0; iy < spec.n; ++iy) {
        const double ky = -L + (iy + 0.5) * h;
        for (int ix = 0; ix < spec.n; ++ix) {
            const double kx = -L + (ix + 0.5) * h;
            const double k_rho = std::hypot(kx, ky);
            if (std::abs(k_rho - k0) < band) {
                for (int sy = 0; sy < spec.subdivision; ++sy) {
                    const double sky = ky - 0.5 * h + (sy + 0.5) * sub_h;
                    for (int sx = 0; sx < spec.subdivision; ++sx) {
                        const double skx = kx - 0.5 * h + (sx + 0.5) * sub_h;
                        const double kr = std::hypot(skx, sky);
                        if (kr > L || std::abs(kr - k0) <= ring) continue;
                        accumulate_point(acc, skx, sky, a, b, k0,
                                         sub_h * sub_h / spectral_kz(k0, kr));
                    }
                }
            } else if (k_rho <= L) {
                accumulate_point(acc, kx, ky, a, b, k0,
                                 h * h / spectral_kz(k0, k_rho));
            }
        }
    }

    // Polar ring around k_rho = k0: substituting s^2 = |k0^2 - k_rho^2|
    // absorbs the 1/kz singularity exactly, leaving smooth integrands.
    // Visible side contributes ds (real), evanescent side +j ds.
    const auto ring_angular = [&](double k_rho) {
        PairAccumulator ang;
        ang.pairs = pairs;
        ang.sums.assign(pairs.size(), cplx(0.0, 0.0));
        const double dphi = 2.0 * pi / spec.n_phi;
        for (int t = 0; t < spec.n_phi; ++t) {
            const double phi = (t + 0.5) * dphi;
            accumulate_point(ang, k_rho * std::cos(phi), k_rho * std::sin(phi), a,
                             b, k0, cplx(dphi, 0.0));
        }
        return ang.sums;
    };
    const double s_in = k0 * std::sqrt(1.0 - (1.0 - spec.annulus) * (1.0 - spec.annulus));
    const double s_out = k0 * std::sqrt((1.0 + spec.annulus) * (1.0 + spec.annulus) - 1.0);
    for (int r = 0; r < spec.n_radial; ++r) {
        const double si = (r + 0.5) * s_in / spec.n_radial;
        const auto inner = ring_angular(std::sqrt(k0 * k0 - si * si));
        const double so = (r + 0.5) * s_out / spec.n_radial;
        const auto outer = ring_angular(std::sqrt(k0 * k0 + so * so));
        for (std::size_t p = 0; p < acc.sums.size(); ++p)
            acc.sums[p] += (s_in / spec.n_radial) * inner[p] +
                           cplx(0.0, s_out / spec.n_radial) * outer[p];
    }

    const double prefactor =
        2.0 / (a * b * fp.omega * mu0 * 4.0 * pi * pi);
    for (cplx& y : acc.sums) y *= prefactor;
    return acc.sums;
}

cplx brute_force_aperture_admittance(const mlamatch::GuideSection& geom,
                                     const mlamatch::FrequencyPoint& fp,
                                     const mlamatch::ModeSet& modes,
                                     const BruteForceSpec& spec) {
    // independently computed TE_m0 guide admittance beta_m / (omega mu0),
    // with the decaying branch for modes below cutoff
    const auto guide_y = [&](int m) {
        const double arg = geom.eps_r * fp.k0 * fp.k0 -
                           (m * pi / geom.width_a) * (m * pi / geom.width_a);
        const cplx beta = (arg >= 0.0) ? cplx(std::sqrt(arg), 0.0)
                                       : cplx(0.0, -std::sqrt(-arg));
        return beta / (fp.omega * mu0);
    };

    std::vector<std::pair<int, int>> pairs{{1, 1}};
    for (std::size_t k = 1; k < modes.modes.size(); ++k) {
        pairs.emplace_back(modes.modes[k], 1);
        pairs.emplace_back(modes.modes[k], modes.modes[k]);
    }
    const auto y = brute_force_mutuals(geom, fp, pairs, spec);

    cplx total = y[0];
    for (std::size_t k = 1; k < modes.modes.size(); ++k) {
        const cplx y_m1 = y[2 * k - 1];
        const cplx y_mm = y[2 * k];
        const cplx y_m0 = guide_y(modes.modes[k]);
        const cplx dm = -y_m1 / (y_mm + y_m0);
        total += 2.0 * dm * y_m1 + dm * dm * (y_mm + y_m0);
    }
    return total / guide_y(1);
}

TouchstoneData parse_touchstone_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    TouchstoneData data;
    bool have_option_line = false;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '!') {
            data.comments.push_back(line.substr(1));
            continue;
        }
        if (line[0] == '#') {
            std::istringstream fields(line.substr(1));
            std::string unit, param, format, r;
            if (!(fields >> unit >> param >> format >> r >> data.z_ref))
                throw std::runtime_error(path + ": malformed option line: " + line);
            if (unit != "GHz" || param != "S" || format != "RI" || r != "R")
                throw std::runtime_error(path + ": unsupported option line: " + line);
            have_option_line = true;
            continue;
        }
        if (!have_option_line)
            throw std::runtime_error(path + ": data before option line");
        std::istringstream fields(line);
        std::array<double, 3> row{};
        if (!(fields >> row[0] >> row[1] >> row[2]))
            throw std::runtime_error(path + ": malformed data row: " + line);
        std::string extra;
        if (fields >> extra)
            throw std::runtime_error(path + ": one-port rows need 3 columns: " + line);
        data.rows.push_back(row);
    }
    if (!have_option_line) throw std::runtime_error(path + ": no option line");
    return data;
}

}  // namespace oracles
