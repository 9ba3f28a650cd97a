#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mlamatch/network.hpp"

using namespace mlamatch;

namespace {

const GuideSection kAntenna{0.017, 0.011, 0.0, 4.0, 0.0};

MatchingConfig config_of(std::array<double, 5> lengths, std::array<double, 3> heights,
                         const GuideSection& antenna = kAntenna) {
    MatchingConfig cfg;
    cfg.lengths = lengths;
    cfg.heights = heights;
    cfg.antenna = antenna;
    return cfg;
}

double max_entry_diff(const TransmissionMatrix& a, const TransmissionMatrix& b) {
    return std::max({std::abs(a.t11 - b.t11), std::abs(a.t12 - b.t12),
                     std::abs(a.t21 - b.t21), std::abs(a.t22 - b.t22)});
}

}  // namespace

TEST_CASE("configuration validation") {
    CHECK_NOTHROW(validate(config_of({1e-3, 0, 2e-3, 3e-3, 0}, {0.011, 5e-3, 8e-3})));

    CHECK_THROWS_AS(validate(config_of({-1e-3, 0, 0, 0, 0}, {5e-3, 5e-3, 5e-3})),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate(config_of({0, 0, 0, 0, 0}, {0.0, 5e-3, 5e-3})),
                    std::invalid_argument);
    // taller than the feed guide
    CHECK_THROWS_AS(validate(config_of({0, 0, 0, 0, 0}, {5e-3, 0.012, 5e-3})),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        build_network(config_of({0, 0, 0, 0, 0}, {5e-3, 0.012, 5e-3}),
                      frequency_point(9.75e9)),
        std::invalid_argument);
}

TEST_CASE("section layout: dielectric, air gap, then three stepped sections") {
    const MatchingConfig cfg =
        config_of({1e-3, 2e-3, 3e-3, 4e-3, 5e-3}, {9e-3, 7e-3, 5e-3});
    const auto secs = network_sections(cfg);

    for (int i = 0; i < 5; ++i) {
        CHECK(secs[i].width_a == kAntenna.width_a);
        CHECK(secs[i].length_l == cfg.lengths[i]);
    }
    CHECK(secs[0].height_b == kAntenna.height_b);
    CHECK(secs[1].height_b == kAntenna.height_b);
    CHECK(secs[2].height_b == 9e-3);
    CHECK(secs[3].height_b == 7e-3);
    CHECK(secs[4].height_b == 5e-3);

    CHECK(secs[0].eps_r == 4.0);
    CHECK(secs[1].eps_r == 1.0);  // the air gap
    CHECK(secs[1].tan_delta == 0.0);
    CHECK(secs[2].eps_r == 4.0);
    CHECK(secs[3].eps_r == 4.0);
    CHECK(secs[4].eps_r == 4.0);
}

TEST_CASE("all-zero lengths at feed height collapse to the identity") {
    const FrequencyPoint fp = frequency_point(9.75e9);

    // with a uniform air fill every junction joins identical sections,
    // so the cascade is the identity exactly
    const GuideSection air_feed{0.017, 0.011, 0.0, 1.0, 0.0};
    const MatchingConfig air_cfg =
        config_of({0, 0, 0, 0, 0}, {0.011, 0.011, 0.011}, air_feed);
    CHECK(max_entry_diff(build_network(air_cfg, fp),
                         TransmissionMatrix::identity()) == 0.0);

    // with a dielectric fill the two zero-length fill junctions cancel
    // to rounding error
    const MatchingConfig diel_cfg = config_of({0, 0, 0, 0, 0}, {0.011, 0.011, 0.011});
    const TransmissionMatrix t = build_network(diel_cfg, fp);
    CHECK(max_entry_diff(t, TransmissionMatrix::identity()) < 1e-12);
    const cplx g(0.37, -0.21);
    CHECK(std::abs(gamma_in(t, g) - g) < 1e-12);
}

TEST_CASE("zero air gap with matched first height removes two junctions") {
    const FrequencyPoint fp = frequency_point(9.75e9);
    // l2 = 0 and b1 = b: input section continues seamlessly into section 3
    const MatchingConfig cfg = config_of({2e-3, 0, 3e-3, 0, 0}, {0.011, 0.011, 0.011});
    const TransmissionMatrix t = build_network(cfg, fp);
    const cplx beta = modal_params(kAntenna, fp, 1).beta;
    CHECK(max_entry_diff(t, t_line(beta, 5e-3)) < 1e-12);
}

TEST_CASE("network determinant stays unity") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> len(0.0, 0.015);
    std::uniform_real_distribution<double> height(1e-3, 0.011);
    const FrequencyPoint fp = frequency_point(9.75e9);
    for (int k = 0; k < 50; ++k) {
        MatchingConfig cfg = config_of({len(rng), len(rng), len(rng), len(rng), len(rng)},
                                       {height(rng), height(rng), height(rng)});
        cfg.step_susceptance = (k % 2 == 1);
        CHECK(std::abs(build_network(cfg, fp).det() - 1.0) < 1e-12);
    }
}

TEST_CASE("quarter-wave transformer cancels the reflection") {
    const FrequencyPoint fp = frequency_point(9.75e9);
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> height(4e-3, 0.011);
    std::uniform_real_distribution<double> ratio(0.2, 1.0);

    for (int k = 0; k < 100; ++k) {
        // sections may not exceed the feed height, so step downward:
        // z_out/z_in = ratio in [0.2, 1)
        const double b_in = height(rng);
        const double b_out = b_in * ratio(rng);
        GuideSection antenna = kAntenna;
        antenna.height_b = b_in;

        // impedance is proportional to height here, so the geometric-mean
        // height realizes z2 = sqrt(z_in z_out); a quarter guide wavelength
        // of it matches z_out to z_in
        const double beta = modal_params(antenna, fp, 1).beta.real();
        const MatchingConfig cfg = config_of(
            {0, 0, 0, pi / (2.0 * beta), 0},
            {b_in, std::sqrt(b_in * b_out), b_out}, antenna);

        const cplx g = gamma_in(build_network(cfg, fp), cplx(0.0, 0.0));
        CHECK(std::abs(g) < 1e-10);
    }
}

TEST_CASE("step susceptance flag only affects height steps above cutoff") {
    const FrequencyPoint fp = frequency_point(9.75e9);

    // no height change: the flag is inert
    MatchingConfig flat = config_of({1e-3, 2e-3, 3e-3, 4e-3, 5e-3},
                                    {0.011, 0.011, 0.011});
    MatchingConfig flat_on = flat;
    flat_on.step_susceptance = true;
    CHECK(max_entry_diff(build_network(flat, fp), build_network(flat_on, fp)) == 0.0);

    // a real step: the fringing capacitance changes the network
    MatchingConfig stepped = config_of({1e-3, 2e-3, 3e-3, 4e-3, 5e-3},
                                       {0.011, 6e-3, 3e-3});
    MatchingConfig stepped_on = stepped;
    stepped_on.step_susceptance = true;
    CHECK(max_entry_diff(build_network(stepped, fp), build_network(stepped_on, fp)) >
          1e-6);
    CHECK(std::abs(build_network(stepped_on, fp).det() - 1.0) < 1e-12);

    // far below every cutoff beta has no real part and the correction
    // vanishes again
    const FrequencyPoint low = frequency_point(3e9);
    CHECK(max_entry_diff(build_network(stepped, low), build_network(stepped_on, low)) ==
          0.0);
}
