#include "mlamatch/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlamatch {

void validate(const MatchingConfig& cfg) {
    validate(cfg.antenna);
    for (std::size_t i = 0; i < cfg.lengths.size(); ++i) {
        if (!std::isfinite(cfg.lengths[i]) || cfg.lengths[i] < 0.0)
            throw std::invalid_argument("section length l" + std::to_string(i + 1) +
                                        " must be nonnegative");
    }
    for (std::size_t i = 0; i < cfg.heights.size(); ++i) {
        if (!std::isfinite(cfg.heights[i]) || cfg.heights[i] <= 0.0)
            throw std::invalid_argument("section height b" + std::to_string(i + 1) +
                                        " must be positive");
        if (cfg.heights[i] > cfg.antenna.height_b)
            throw std::invalid_argument("section height b" + std::to_string(i + 1) +
                                        " must not exceed the feed height");
    }
}

std::array<GuideSection, 5> network_sections(const MatchingConfig& cfg) {
    const GuideSection& ant = cfg.antenna;
    return {GuideSection{ant.width_a, ant.height_b, cfg.lengths[0], ant.eps_r, ant.tan_delta},
            GuideSection{ant.width_a, ant.height_b, cfg.lengths[1], 1.0, 0.0},
            GuideSection{ant.width_a, cfg.heights[0], cfg.lengths[2], ant.eps_r, ant.tan_delta},
            GuideSection{ant.width_a, cfg.heights[1], cfg.lengths[3], ant.eps_r, ant.tan_delta},
            GuideSection{ant.width_a, cfg.heights[2], cfg.lengths[4], ant.eps_r, ant.tan_delta}};
}

namespace {

/// Step susceptance of an abrupt E-plane height change between two sections
/// of equal width and fill, normalized to the line admittance on the
/// larger-height side: B/Y0 = (b beta / pi) * ln(csc(pi b'/(2 b))) with
/// b the larger and b' the smaller height. Zero below cutoff (beta has no
/// real part there) and zero for equal heights.
double step_susceptance_ratio(double b_large, double b_small, double beta_real) {
    if (b_small >= b_large) return 0.0;
    const double csc = 1.0 / std::sin(pi * b_small / (2.0 * b_large));
    return (b_large * beta_real / pi) * std::log(csc);
}

}  // namespace

TransmissionMatrix build_network(const MatchingConfig& cfg, const FrequencyPoint& fp) {
    validate(cfg);
    const auto secs = network_sections(cfg);
    std::array<ModalParams, 5> mp;
    for (std::size_t i = 0; i < secs.size(); ++i) mp[i] = modal_params(secs[i], fp, 1);

    std::vector<TransmissionMatrix> chain;
    chain.reserve(13);
    for (std::size_t i = 0; i < secs.size(); ++i) {
        chain.push_back(t_line(mp[i].beta, secs[i].length_l));
        if (i + 1 == secs.size()) break;
        const bool e_plane = (i == 2 || i == 3);
        const double bl = secs[i].height_b;
        const double br = secs[i + 1].height_b;
        if (cfg.step_susceptance && e_plane && bl != br) {
            // The shunt lives on the larger-height side of the ideal step,
            // where its normalizing line admittance is defined.
            const double y = step_susceptance_ratio(std::max(bl, br), std::min(bl, br),
                                                    mp[i].beta.real());
            const cplx jy(0.0, y);
            if (bl > br) {
                chain.push_back(t_shunt(jy));
                chain.push_back(t_interface(mp[i].z_pv, mp[i + 1].z_pv));
            } else {
                chain.push_back(t_interface(mp[i].z_pv, mp[i + 1].z_pv));
                chain.push_back(t_shunt(jy));
            }
        } else {
            chain.push_back(t_interface(mp[i].z_pv, mp[i + 1].z_pv));
        }
    }
    return cascade(chain);
}

}  // namespace mlamatch
