// Independent reference implementations used only by the tests. Everything
// here is deliberately reimplemented from first principles (no calls into the
// library's numerics) so that agreement is evidence, not tautology.
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mlamatch/aperture.hpp"
#include "mlamatch/waveguide.hpp"

namespace oracles {

/// Controls for the brute-force spectral integration. The defaults were
/// chosen by convergence study: halving n roughly quadruples the error, and
/// at n = 2000 the result agrees with a much deeper adaptive evaluation to
/// ~2.5e-4 relative.
struct BruteForceSpec {
    int n = 2000;            // Cartesian grid cells per axis over [-L, L]
    double extent = 40.0;    // L in units of k0
    double annulus = 0.05;   // half-width of the polar ring around k0, in k0
    double refine_band = 0.2;  // cells this close to the ring get subdivided
    int subdivision = 32;    // midpoint subcells per axis inside the band
    int n_radial = 400;      // midpoint nodes for each half of the ring
    int n_phi = 720;         // azimuthal midpoint nodes over the full circle
};

/// Half-space mutual admittances Y_ij for several (i, j) mode pairs at once,
/// by midpoint summation over a uniform Cartesian spectral grid plus polar
/// treatment of the 1/kz ring singularity at k_rho = k0.
std::vector<mlamatch::cplx> brute_force_mutuals(
    const mlamatch::GuideSection& geom, const mlamatch::FrequencyPoint& fp,
    const std::vector<std::pair<int, int>>& pairs,
    const BruteForceSpec& spec = {});

/// Normalized aperture admittance assembled from brute_force_mutuals and an
/// independently computed guide admittance for each mode of the set.
mlamatch::cplx brute_force_aperture_admittance(
    const mlamatch::GuideSection& geom, const mlamatch::FrequencyPoint& fp,
    const mlamatch::ModeSet& modes, const BruteForceSpec& spec = {});

/// Minimal one-port Touchstone v1 reader for format checks: records the
/// option line fields, the reference impedance, and the data rows. Throws
/// std::runtime_error on anything it does not understand.
struct TouchstoneData {
    double z_ref = 0.0;
    std::vector<std::array<double, 3>> rows;  // f_ghz, re, im
    std::vector<std::string> comments;
};

TouchstoneData parse_touchstone_file(const std::string& path);

}  // namespace oracles
