#include "mlamatch/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlamatch {

void validate(const ModeSet& ms) {
    if (ms.modes.empty())
        throw std::invalid_argument("mode set must not be empty");
    if (ms.modes.front() != 1)
        throw std::invalid_argument("mode set must start with the dominant mode 1");
    for (std::size_t k = 0; k < ms.modes.size(); ++k) {
        if (ms.modes[k] < 1 || ms.modes[k] % 2 == 0)
            throw std::invalid_argument("mode set entries must be odd positive integers");
        if (k > 0 && ms.modes[k] <= ms.modes[k - 1])
            throw std::invalid_argument("mode set must be strictly increasing");
    }
}

void validate(const QuadratureSpec& q) {
    if (q.nodes_visible < 8 || q.nodes_evanescent < 8)
        throw std::invalid_argument("quadrature node counts must be at least 8");
    if (!std::isfinite(q.k_rho_max) || q.k_rho_max < 5.0)
        throw std::invalid_argument("quadrature k_rho_max must be at least 5");
    if (!(q.rel_tol > 0.0) || q.rel_tol > 0.1)
        throw std::invalid_argument("quadrature rel_tol must lie in (0, 0.1]");
}

double c0(double ky, double b) {
    if (b <= 0.0) throw std::invalid_argument("aperture height must be positive");
    const double u = ky * b / 2.0;
    if (std::abs(u) < 1e-6) return b * (1.0 - u * u / 6.0);
    return b * std::sin(u) / u;
}

double cm(double kx, double a, int m) {
    if (a <= 0.0) throw std::invalid_argument("aperture width must be positive");
    if (m < 1 || m % 2 == 0)
        throw std::invalid_argument("width kernel index must be odd positive");
    // j^(m-1) is real-valued (+/-1) for odd m
    const double sgn = (((m - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    const double x = std::abs(kx * a);
    const double mp = m * pi;
    const double d = x - mp;
    if (std::abs(d) < 1e-6) {
        // removable singularity: cos(x/2) ~ -sgn*sin(d/2), so the kernel
        // tends to a/2; expand sin(d/2)/d for stability right at the zero
        return mp * a * (1.0 - d * d / 24.0) / (2.0 * mp + d);
    }
    return 2.0 * mp * a * sgn * std::cos(x / 2.0) / ((mp - x) * (mp + x));
}

cplx mode_coupling_dm(cplx y_m1, cplx y_mm, cplx y_m0) {
    const cplx den = y_mm + y_m0;
    const double scale = std::abs(y_m1) + std::abs(y_mm) + std::abs(y_m0);
    if (std::abs(den) <= 1e-14 * scale || !(std::abs(den) > 0.0))
        throw std::runtime_error("degenerate resonance: Y_mm + Y_m0 vanishes");
    return -y_m1 / den;
}

cplx guide_wave_admittance(const GuideSection& geom, const FrequencyPoint& fp, int m) {
    return modal_params(geom, fp, m).beta / (fp.omega * mu0);
}

namespace {

struct GaussRule {
    std::vector<double> x, w;  // nodes and weights on [-1, 1]
};

/// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p1 = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            double p2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * k + 1.0) * x * p2 - k * p3) / (k + 1.0);
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// One pass of the first-quadrant spectral integral at fixed node counts.
/// Visible region through k_rho = k0 sin t (the 1/kz branch-point factor
/// cancels against the polar Jacobian), evanescent tail through
/// k_rho = k0 cosh u in panels split at decades of k_rho/k0. The tail
/// contributes the imaginary part (1/kz = +j/|kz| there).
cplx spectral_integral(int mi, int mj, double a, double b, double k0,
                       int n_vis, int n_eva, int n_phi, double krho_max) {
    const GaussRule gp = gauss_legendre(n_phi);
    const GaussRule gv = gauss_legendre(n_vis);
    const GaussRule ge = gauss_legendre(n_eva);

    std::vector<double> edges{1.0};
    for (double e = 10.0; e < krho_max; e *= 10.0) edges.push_back(e);
    edges.push_back(krho_max);

    const auto kernel = [&](double kx, double ky) {
        return (k0 * k0 - kx * kx) * c0(ky, b) * c0(ky, b) * cm(kx, a, mi) *
               cm(kx, a, mj);
    };

    double acc_re = 0.0, acc_im = 0.0;
    for (int p = 0; p < n_phi; ++p) {
        const double phi = 0.25 * pi * (gp.x[p] + 1.0);
        const double wphi = 0.25 * pi * gp.w[p];
        const double cp = std::cos(phi), sp = std::sin(phi);

        double vis = 0.0;
        for (int q = 0; q < n_vis; ++q) {
            const double t = 0.25 * pi * (gv.x[q] + 1.0);
            const double st = std::sin(t);
            const double krho = k0 * st;
            vis += 0.25 * pi * gv.w[q] * k0 * st * kernel(krho * cp, krho * sp);
        }

        double eva = 0.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double u0 = std::acosh(edges[e]);
            const double u1 = std::acosh(edges[e + 1]);
            for (int q = 0; q < n_eva; ++q) {
                const double u = 0.5 * (u1 - u0) * ge.x[q] + 0.5 * (u1 + u0);
                const double ch = std::cosh(u);
                const double krho = k0 * ch;
                eva += 0.5 * (u1 - u0) * ge.w[q] * k0 * ch * kernel(krho * cp, krho * sp);
            }
        }
        acc_re += wphi * vis;
        acc_im += wphi * eva;
    }
    return {acc_re, acc_im};
}

}  // namespace

cplx mutual_admittance(int i, int j, const GuideSection& geom,
                       const FrequencyPoint& fp, const QuadratureSpec& q) {
    validate(geom);
    validate(q);
    if (i < 1 || i % 2 == 0 || j < 1 || j % 2 == 0)
        throw std::invalid_argument("aperture mode indices must be odd positive");

    constexpr int max_doublings = 4;
    const double a = geom.width_a, b = geom.height_b, k0 = fp.k0;
    const double scale = 2.0 / (a * b * fp.omega * mu0 * pi * pi);

    int nv = q.nodes_visible, ne = q.nodes_evanescent, np = 2 * q.nodes_visible;
    cplx prev = scale * spectral_integral(i, j, a, b, k0, nv, ne, np, q.k_rho_max);
    for (int pass = 0; pass < max_doublings; ++pass) {
        nv *= 2;
        ne *= 2;
        np *= 2;
        const cplx cur = scale * spectral_integral(i, j, a, b, k0, nv, ne, np, q.k_rho_max);
        if (std::abs(cur - prev) <= q.rel_tol * std::abs(cur)) return cur;
        if (pass + 1 == max_doublings) {
            throw QuadratureError("aperture quadrature did not converge to " +
                                      std::to_string(q.rel_tol) + " for mode pair (" +
                                      std::to_string(i) + ", " + std::to_string(j) +
                                      ") at f = " + std::to_string(fp.f) + " Hz",
                                  prev, cur);
        }
        prev = cur;
    }
    return prev;  // unreachable; the loop always returns or throws
}

cplx aperture_admittance(const GuideSection& geom, const FrequencyPoint& fp,
                         const ModeSet& modes, const QuadratureSpec& q) {
    validate(geom);
    validate(modes);
    validate(q);
    if (fp.f <= cutoff_frequency(geom, 1))
        throw std::domain_error("aperture admittance requires f above the TE10 cutoff (" +
                                std::to_string(cutoff_frequency(geom, 1)) + " Hz), got " +
                                std::to_string(fp.f) + " Hz");

    const cplx y10 = guide_wave_admittance(geom, fp, 1);
    cplx y = mutual_admittance(1, 1, geom, fp, q);
    for (std::size_t k = 1; k < modes.modes.size(); ++k) {
        const int m = modes.modes[k];
        const cplx ym1 = mutual_admittance(m, 1, geom, fp, q);
        const cplx ymm = mutual_admittance(m, m, geom, fp, q);
        const cplx ym0 = guide_wave_admittance(geom, fp, m);
        const cplx dm = mode_coupling_dm(ym1, ymm, ym0);
        y += 2.0 * dm * ym1 + dm * dm * (ymm + ym0);
    }
    return y / y10;
}

cplx aperture_reflection(cplx y_ap) {
    const cplx den = 1.0 + y_ap;
    if (std::abs(den) < 1e-30)
        throw std::domain_error("aperture reflection pole: y_ap = -1");
    return (1.0 - y_ap) / den;
}

namespace {

struct ModelPoint {
    cplx y_ap;
    cplx gamma_ap;
};

/// Shared per-point computation so the serial and parallel builds are the
/// same code; failures are rewrapped with the offending frequency.
ModelPoint model_point(const GuideSection& geom, const FrequencyPoint& fp,
                       const ModeSet& modes, const QuadratureSpec& q) {
    try {
        const cplx y = aperture_admittance(geom, fp, modes, q);
        return {y, aperture_reflection(y)};
    } catch (const QuadratureError& e) {
        throw QuadratureError("aperture model failed at f = " + std::to_string(fp.f) +
                                  " Hz: " + e.what(),
                              e.previous_estimate(), e.last_estimate());
    } catch (const std::exception& e) {
        throw std::runtime_error("aperture model failed at f = " + std::to_string(fp.f) +
                                 " Hz: " + e.what());
    }
}

ApertureModel build_model(const GuideSection& geom,
                          const std::vector<FrequencyPoint>& grid,
                          const ModeSet& modes, const QuadratureSpec& q,
                          bool parallel) {
    validate(geom);
    validate(modes);
    validate(q);
    ApertureModel model;
    model.geometry = geom;
    model.grid = grid;
    const std::size_t n = grid.size();
    model.y_ap.resize(n);
    model.gamma_ap.resize(n);

    if (!parallel) {
        for (std::size_t k = 0; k < n; ++k) {
            const ModelPoint p = model_point(geom, grid[k], modes, q);
            model.y_ap[k] = p.y_ap;
            model.gamma_ap[k] = p.gamma_ap;
        }
        return model;
    }

    std::vector<std::exception_ptr> failures(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
        try {
            const ModelPoint p = model_point(geom, grid[k], modes, q);
            model.y_ap[k] = p.y_ap;
            model.gamma_ap[k] = p.gamma_ap;
        } catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return model;
}

}  // namespace

ApertureModel build_aperture_model(const GuideSection& geom,
                                   const std::vector<FrequencyPoint>& grid,
                                   const ModeSet& modes, const QuadratureSpec& q) {
    return build_model(geom, grid, modes, q, true);
}

ApertureModel build_aperture_model_serial(const GuideSection& geom,
                                          const std::vector<FrequencyPoint>& grid,
                                          const ModeSet& modes,
                                          const QuadratureSpec& q) {
    return build_model(geom, grid, modes, q, false);
}

}  // namespace mlamatch
