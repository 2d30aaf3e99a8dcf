// SPDX-License-Identifier: Apache-2.0
//
// Tests for steering vectors, the normalized correlation kernel, scenario
// drawing (statistics and determinism), and signal synthesis.

#include <catch_amalgamated.hpp>

#include <kronbeam/array_channel.hpp>

using namespace kronbeam;

namespace
{
// Direct evaluation of |v(phi)^H v(omega)| / n from the definition.
double brute_inner(double phi, double omega, int n)
{
    cplx acc(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        acc += std::conj(std::polar(1.0, i * phi)) * std::polar(1.0, i * omega);
    return std::abs(acc) / n;
}
} // namespace

TEST_CASE("phase angles canonicalize into [0, 2pi)", "[array]")
{
    REQUIRE(PhaseAngle(0.0).value() == 0.0);
    REQUIRE(PhaseAngle(two_pi).value() == 0.0);
    REQUIRE(PhaseAngle(-0.5).value() == Catch::Approx(two_pi - 0.5));
    REQUIRE(PhaseAngle(7.0 * two_pi + 1.0).value() == Catch::Approx(1.0));
    REQUIRE(PhaseAngle(std::nextafter(two_pi, 0.0)).value() < two_pi);
}

TEST_CASE("circular distance is symmetric and wraps", "[array]")
{
    REQUIRE(circular_distance(0.1, two_pi - 0.1) == Catch::Approx(0.2));
    REQUIRE(circular_distance(1.0, 2.5) == Catch::Approx(1.5));
    REQUIRE(circular_distance(2.5, 1.0) == Catch::Approx(1.5));
    REQUIRE(circular_distance(0.0, two_pi / 2.0) == Catch::Approx(two_pi / 2.0));
}

TEST_CASE("steering vector entries are the expected phasors", "[array]")
{
    PhaseAngle phi(0.77);
    cvec v = steering_vector(phi, 16);
    REQUIRE(v.size() == 16);
    for (int i = 0; i < 16; ++i)
    {
        REQUIRE(std::abs(std::abs(v[i]) - 1.0) < 1e-15);
        REQUIRE(std::abs(v[i] - std::polar(1.0, canonical_angle(0.77 * i))) < 1e-13);
    }
    REQUIRE(v[0] == cplx(1.0, 0.0));
    REQUIRE_THROWS_AS(steering_vector(phi, 1), std::invalid_argument);
}

TEST_CASE("physical-angle conversion lands in the phase domain", "[array]")
{
    // Half-wavelength spacing: phase difference = pi * cos(aoa).
    PhaseAngle p = phase_from_physical(0.0, 0.5, 1.0);
    REQUIRE(p.value() == Catch::Approx(two_pi / 2.0));
    PhaseAngle q = phase_from_physical(two_pi / 4.0, 0.5, 1.0);
    REQUIRE(q.value() < 1e-12);
    REQUIRE_THROWS_AS(phase_from_physical(0.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("normalized inner product matches brute force to 1e-12", "[array]")
{
    RngStream rng(2024);
    for (int n : {2, 3, 16, 128, 257})
        for (int rep = 0; rep < 40; ++rep)
        {
            double phi = rng.uniform_angle().value();
            double omega = rng.uniform_angle().value();
            double fast = normalized_inner_product(phi, omega, n);
            REQUIRE(fast >= 0.0);
            REQUIRE(fast <= 1.0);
            REQUIRE(std::fabs(fast - brute_inner(phi, omega, n)) < 1e-12);
        }
}

TEST_CASE("normalized inner product handles coincident directions", "[array]")
{
    REQUIRE(normalized_inner_product(1.3, 1.3, 64) == Catch::Approx(1.0));
    // Near-coincidence across the wrap.
    double a = 1e-12, b = two_pi - 1e-12;
    REQUIRE(normalized_inner_product(a, b, 64) == Catch::Approx(1.0).margin(1e-9));
    // Exact orthogonality at the main-lobe null spacing 2pi/N.
    REQUIRE(normalized_inner_product(0.5, 0.5 + two_pi / 64.0, 64) < 1e-12);
}

TEST_CASE("system config collects every violation", "[array]")
{
    SystemConfig cfg;
    cfg.antennas = 1;
    cfg.users = 0;
    cfg.pilotLength = 0;
    cfg.noiseVar = -1.0;
    auto v = cfg.violations();
    REQUIRE(v.size() >= 4);
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);

    SystemConfig ok;
    REQUIRE_NOTHROW(ok.validate());

    SystemConfig tooMany;
    tooMany.users = 8;
    tooMany.pilotLength = 4;
    REQUIRE_THROWS_WITH(tooMany.validate(),
                        Catch::Matchers::ContainsSubstring("orthogonal pilots"));
}

TEST_CASE("draw_scenario is deterministic for an identical stream", "[array]")
{
    SystemConfig cfg;
    cfg.antennas = 32;
    RngStream stream = RngStream(5).derive(3, 9);
    Scenario a = draw_scenario(cfg, stream);
    Scenario b = draw_scenario(cfg, stream);
    for (int k = 0; k < cfg.users; ++k)
        for (int l = 0; l < cfg.pathsPerUser; ++l)
        {
            REQUIRE(a.dataPaths[k][l].gain == b.dataPaths[k][l].gain);
            REQUIRE(a.dataPaths[k][l].angle.value() == b.dataPaths[k][l].angle.value());
        }
    for (int m = 0; m < cfg.interferers; ++m)
        REQUIRE(a.interfPaths[m].gain == b.interfPaths[m].gain);

    // Different trial index, different scenario.
    Scenario c = draw_scenario(cfg, RngStream(5).derive(3, 10));
    REQUIRE(a.dataPaths[0][0].gain != c.dataPaths[0][0].gain);
}

TEST_CASE("drawn gains and angles have the right first moments", "[array]")
{
    // 1e5 draws: complex-normal path gains with E|a|^2 = pathVar and uniform
    // angles with mean pi; both within 2%.
    SystemConfig cfg;
    cfg.antennas = 2;
    cfg.users = 1;
    cfg.interferers = 1;
    cfg.pathsPerUser = 1;
    cfg.pilotLength = 1;
    cfg.pathVar = {2.5};

    const int draws = 100000;
    double power = 0.0, angleMean = 0.0, interfPower = 0.0;
    cplx gainMean(0.0, 0.0);
    RngStream root(777);
    for (int t = 0; t < draws; ++t)
    {
        Scenario sc = draw_scenario(cfg, root.derive(0, t));
        power += std::norm(sc.dataPaths[0][0].gain);
        gainMean += sc.dataPaths[0][0].gain;
        angleMean += sc.dataPaths[0][0].angle.value();
        interfPower += std::norm(sc.interfPaths[0].gain);
    }
    power /= draws;
    interfPower /= draws;
    angleMean /= draws;
    gainMean /= static_cast<double>(draws);

    REQUIRE(power == Catch::Approx(2.5).epsilon(0.02));
    REQUIRE(interfPower == Catch::Approx(1.0).epsilon(0.02));
    REQUIRE(angleMean == Catch::Approx(two_pi / 2.0).epsilon(0.02));
    REQUIRE(std::abs(gainMean) < 0.02);
}

TEST_CASE("data channel is the gain-weighted sum of steering vectors", "[array]")
{
    std::vector<PathComponent> paths = {{cplx(2.0, 1.0), PhaseAngle(0.4)},
                                        {cplx(-0.5, 0.25), PhaseAngle(2.2)}};
    cvec g = synthesize_data_channel(paths, 16);
    cvec ref = cplx(2.0, 1.0) * steering_vector(PhaseAngle(0.4), 16) +
               cplx(-0.5, 0.25) * steering_vector(PhaseAngle(2.2), 16);
    REQUIRE((g - ref).norm() < 1e-13);
    REQUIRE_THROWS_AS(synthesize_data_channel({}, 16), std::invalid_argument);

    cvec h = synthesize_interference_channel(cplx(0.0, 3.0), PhaseAngle(1.0), 8);
    REQUIRE((h - cplx(0.0, 3.0) * steering_vector(PhaseAngle(1.0), 8)).norm() < 1e-13);
}

TEST_CASE("received signal assembles channels, symbols and noise", "[array]")
{
    SystemConfig cfg;
    cfg.antennas = 8;
    cfg.users = 2;
    cfg.interferers = 1;
    cfg.pathsPerUser = 1;
    cfg.pilotLength = 2;
    Scenario sc = draw_scenario(cfg, RngStream(1));

    cvec x(2);
    x << cplx(1, 1), cplx(-2, 0);
    cvec s(1);
    s << cplx(0, 1);
    cvec noise = cvec::Constant(8, cplx(0.1, -0.1));

    cvec y = received_signal(sc, x, s, noise);
    cvec ref = data_channel_matrix(sc) * x + interference_channel_matrix(sc) * s + noise;
    REQUIRE((y - ref).norm() < 1e-12);

    REQUIRE_THROWS_AS(received_signal(sc, cvec::Zero(3), s, noise), std::invalid_argument);
    REQUIRE_THROWS_AS(received_signal(sc, x, cvec::Zero(2), noise), std::invalid_argument);
    REQUIRE_THROWS_AS(received_signal(sc, x, s, cvec::Zero(4)), std::invalid_argument);
}

TEST_CASE("received training block follows Y = G P + H Q + noise", "[array]")
{
    SystemConfig cfg;
    cfg.antennas = 8;
    cfg.users = 2;
    cfg.interferers = 2;
    cfg.pathsPerUser = 2;
    cfg.pilotLength = 4;
    Scenario sc = draw_scenario(cfg, RngStream(3));

    rmat pilots(2, 4);
    pilots << 1, 1, 1, 1, 1, -1, 1, -1;
    rmat interf(2, 4);
    interf << 1, 1, -1, 1, -1, -1, -1, 1;
    cmat noise = cmat::Zero(8, 4);

    cmat y = received_training_matrix(sc, pilots, interf, noise);
    cmat ref = data_channel_matrix(sc) * pilots.cast<cplx>() +
               interference_channel_matrix(sc) * interf.cast<cplx>();
    REQUIRE((y - ref).norm() < 1e-12);

    REQUIRE_THROWS_AS(received_training_matrix(sc, pilots.leftCols(3), interf, noise),
                      std::invalid_argument);
}
