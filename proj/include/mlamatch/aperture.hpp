#pragma once

#include <vector>

#include "mlamatch/errors.hpp"
#include "mlamatch/waveguide.hpp"

namespace mlamatch {

/// Ordered odd TE_m0 mode indices entering the aperture admittance series.
struct ModeSet {
    std::vector<int> modes{1, 3, 5};
};

void validate(const ModeSet& ms);

/// Controls for the spectral-domain quadrature. The visible region
/// (k_rho < k) is integrated with nodes_visible Gauss-Legendre nodes under
/// the substitution k_rho = k sin t; the evanescent tail gets
/// nodes_evanescent nodes per decade of k_rho/k out to k_rho_max * k under
/// k_rho = k cosh u. The azimuthal rule uses 2 * nodes_visible nodes. All
/// counts double together until successive estimates agree to rel_tol.
struct QuadratureSpec {
    int nodes_visible = 48;
    int nodes_evanescent = 32;
    double k_rho_max = 40.0;
    double rel_tol = 1e-3;
};

void validate(const QuadratureSpec& q);

/// Height kernel b * sinc(ky*b/2). Even in ky.
double c0(double ky, double b);

/// Width kernel 2*m*pi*a * j^(m-1) * cos(kx*a/2) / ((m*pi)^2 - (kx*a)^2)
/// for odd m; real-valued (j^(m-1) = +/-1) and even in kx. The removable
/// singularity at |kx*a| = m*pi takes its finite limit.
double cm(double kx, double a, int m);

/// Half-space mutual admittance Y_ij between aperture modes i and j
/// (siemens, TE wave-admittance normalization). Symmetric in (i, j).
/// Throws QuadratureError if node doubling stalls above q.rel_tol.
cplx mutual_admittance(int i, int j, const GuideSection& geom,
                       const FrequencyPoint& fp, const QuadratureSpec& q);

/// Mode-coupling coefficient D_m = -Y_m1 / (Y_mm + Y_m0).
cplx mode_coupling_dm(cplx y_m1, cplx y_mm, cplx y_m0);

/// Guide-side TE_m0 wave admittance beta_m/(omega*mu0) of the antenna guide.
cplx guide_wave_admittance(const GuideSection& geom, const FrequencyPoint& fp, int m);

/// Aperture admittance normalized to the TE10 guide admittance:
///   y_ap = Y11/Y10 + 2 sum_m D_m Y_m1/Y10 + sum_m D_m^2 (Y_mm + Y_m0)/Y10
/// over the higher modes m of the set. Requires f above the TE10 cutoff.
cplx aperture_admittance(const GuideSection& geom, const FrequencyPoint& fp,
                         const ModeSet& modes, const QuadratureSpec& q);

/// Aperture reflection (1 - y_ap) / (1 + y_ap).
cplx aperture_reflection(cplx y_ap);

/// Precomputed aperture data on a frequency grid. Immutable once built;
/// independent of any matching network, so one table serves a whole GA run.
struct ApertureModel {
    GuideSection geometry{};
    std::vector<FrequencyPoint> grid;
    std::vector<cplx> y_ap;
    std::vector<cplx> gamma_ap;

    std::size_t size() const { return grid.size(); }
};

/// Tabulates y_ap and gamma_ap over the grid, one OpenMP task per point.
/// Any per-point failure aborts with the failing frequency in the message.
ApertureModel build_aperture_model(const GuideSection& geom,
                                   const std::vector<FrequencyPoint>& grid,
                                   const ModeSet& modes, const QuadratureSpec& q);

/// Single-threaded reference used by the tests and the benchmark;
/// bit-identical to the parallel build.
ApertureModel build_aperture_model_serial(const GuideSection& geom,
                                          const std::vector<FrequencyPoint>& grid,
                                          const ModeSet& modes,
                                          const QuadratureSpec& q);

}  // namespace mlamatch
