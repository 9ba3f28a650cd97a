#pragma once

#include <array>

#include "mlamatch/two_port.hpp"

namespace mlamatch {

/// The optimization vector of the five-section matching network plus the
/// fixed antenna geometry it feeds.
///
/// Section layout, input (reference plane P1) to aperture:
///   l1  dielectric, antenna height
///   l2  air gap,    antenna height
///   l3  dielectric, height b1
///   l4  dielectric, height b2
///   l5  dielectric, height b3
/// Fill junctions sit at l1|l2 and l2|l3; the E-plane steps at l3|l4 and
/// l4|l5. A different height assignment can be expressed by building the
/// section list manually and cascading it.
struct MatchingConfig {
    std::array<double, 5> lengths{};  // l1..l5, m
    std::array<double, 3> heights{};  // b1..b3, m
    GuideSection antenna{};           // width a, feed height b, eps_r
    bool step_susceptance = false;    // Marcuvitz E-plane step correction
};

void validate(const MatchingConfig& cfg);

/// The five physical sections of a configuration in cascade order.
std::array<GuideSection, 5> network_sections(const MatchingConfig& cfg);

/// Assembles the nine-factor product
///   T_hw1 T_ad1 T_hw2 T_ad2 T_hw3 T_es1 T_hw4 T_es2 T_hw5
/// for one frequency. Throws std::invalid_argument on an invalid config.
TransmissionMatrix build_network(const MatchingConfig& cfg, const FrequencyPoint& fp);

}  // namespace mlamatch
