// SPDX-License-Identifier: Apache-2.0
//
// Tests for the digital stage: effective channels, the MMSE solution and its
// optimality, the fully digital benchmark, and the phase-only projections.

#include <catch_amalgamated.hpp>

#include <kronbeam/digital_design.hpp>
#include <kronbeam/linalg.hpp>
#include <kronbeam/metrics.hpp>
#include <kronbeam/monte_carlo.hpp>

using namespace kronbeam;

namespace
{
Scenario scenario(int n, int users, int interferers, int paths, std::uint64_t seed)
{
    SystemConfig cfg;
    cfg.antennas = n;
    cfg.users = users;
    cfg.interferers = interferers;
    cfg.pathsPerUser = paths;
    cfg.pilotLength = std::max(users, 1);
    return draw_scenario(cfg, RngStream(seed));
}

// Post-combining SINR of the digital stage's own objective: in-cell signals
// plus colored noise through the analog front end. This is the quantity the
// MMSE solution maximizes per user.
double reduced_sinr(const cmat& analog, const cvec& fbb, const Scenario& sc, int k)
{
    cmat gt = analog.adjoint() * data_channel_matrix(sc);
    double num = 0.0, den = sc.config.noiseVar * (analog * fbb).squaredNorm();
    for (int m = 0; m < sc.config.users; ++m)
    {
        double p = sc.config.user_power(m) * std::norm(fbb.dot(gt.col(m)));
        if (m == k)
            num = p;
        else
            den += p;
    }
    return num / den;
}
} // namespace

TEST_CASE("hermitian solve matches a dense reference", "[digital]")
{
    RngStream rng(17);
    for (int n : {1, 2, 5, 17, 40})
    {
        cmat b(n, 3);
        cmat m(n, n);
        for (int j = 0; j < n; ++j)
        {
            for (int i = 0; i < n; ++i)
                m(i, j) = rng.complex_normal();
            for (int c = 0; c < 3; ++c)
                b(j, c) = rng.complex_normal();
        }
        cmat a = m * m.adjoint() + cmat::Identity(n, n);
        cmat x = hermitian_solve(a, b);
        REQUIRE((a * x - b).norm() < 1e-9 * b.norm());
    }

    cmat notPd = -cmat::Identity(4, 4);
    REQUIRE_THROWS_AS(hermitian_solve(notPd, cmat::Identity(4, 4)), std::invalid_argument);
    REQUIRE_THROWS_AS(hermitian_solve(cmat::Identity(4, 3), cmat::Identity(4, 1)),
                      std::invalid_argument);
}

TEST_CASE("effective channel is the analog-projected channel matrix", "[digital]")
{
    Scenario sc = scenario(32, 3, 1, 2, 3);
    AnalogBeamformer analog = multiuser_analog(sc, prime_factorization(32));
    cmat gt = effective_channel(analog.matrix(), sc);
    REQUIRE(gt.rows() == 3);
    REQUIRE(gt.cols() == 3);
    cmat ref = analog.matrix().adjoint() * data_channel_matrix(sc);
    REQUIRE((gt - ref).norm() < 1e-10);
}

TEST_CASE("mmse digital maximizes the reduced SINR per user", "[digital]")
{
    // 1e4 random unit perturbations of each digital column never beat the
    // closed-form solution.
    Scenario sc = scenario(64, 4, 2, 2, 21);
    AnalogBeamformer analog = multiuser_analog(sc, prime_factorization(64));
    HybridBeamformer hybrid = mmse_digital(analog, sc);

    RngStream rng(5150);
    for (int k = 0; k < sc.config.users; ++k)
    {
        double best = reduced_sinr(hybrid.analog, hybrid.digital.col(k), sc, k);
        int tries = k == 0 ? 10000 : 1000; // full budget on one user, spot checks after
        for (int t = 0; t < tries; ++t)
        {
            cvec pert(sc.config.users);
            for (int i = 0; i < sc.config.users; ++i)
                pert[i] = rng.complex_normal();
            cvec cand = hybrid.digital.col(k) + 0.1 * pert.normalized();
            REQUIRE(reduced_sinr(hybrid.analog, cand, sc, k) <= best * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("single-user digital stage is a scalar and SINR-invariant", "[digital]")
{
    // With K = 1 the digital stage reduces to a positive scalar times the
    // matched direction, and any nonzero scalar yields the same SINR.
    Scenario sc = scenario(64, 1, 2, 2, 8);
    AnalogBeamformer analog = multiuser_analog(sc, prime_factorization(64));
    HybridBeamformer hybrid = mmse_digital(analog, sc);
    REQUIRE(hybrid.digital.rows() == 1);
    REQUIRE(hybrid.digital.cols() == 1);

    double r1 = user_rate(hybrid, sc, 0);
    HybridBeamformer scaled = hybrid;
    scaled.digital *= cplx(3.7, -1.2);
    double r2 = user_rate(scaled, sc, 0);
    REQUIRE(r1 == Catch::Approx(r2).epsilon(1e-12));
}

TEST_CASE("fully digital MMSE maximizes per-user SINR over all combiners", "[digital]")
{
    // The interference-aware MMSE column is the max-SINR receiver; random
    // N-dimensional perturbations cannot improve the full Eq-10 SINR.
    Scenario sc = scenario(32, 2, 2, 2, 31);
    cmat f = fully_digital_mmse(sc);

    auto full_sinr = [&sc](const cvec& w, int k) {
        double num = 0.0, den = sc.config.noiseVar * w.squaredNorm();
        for (int m = 0; m < sc.config.users; ++m)
        {
            double p = sc.config.user_power(m) *
                       std::norm(w.dot(synthesize_data_channel(sc.dataPaths[m], 32)));
            (m == k ? num : den) += p;
        }
        for (int i = 0; i < sc.config.interferers; ++i)
            den += sc.config.interferer_power(i) *
                   std::norm(w.dot(synthesize_interference_channel(sc.interfPaths[i].gain,
                                                                   sc.interfPaths[i].angle, 32)));
        return num / den;
    };

    RngStream rng(999);
    for (int k = 0; k < 2; ++k)
    {
        double best = full_sinr(f.col(k), k);
        for (int t = 0; t < 2000; ++t)
        {
            cvec pert(32);
            for (int i = 0; i < 32; ++i)
                pert[i] = rng.complex_normal();
            cvec cand = f.col(k) + 0.05 * f.col(k).norm() * pert.normalized();
            REQUIRE(full_sinr(cand, k) <= best * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("equal gain keeps phases and maps zeros to one", "[digital]")
{
    cvec g(4);
    g << cplx(3.0, 4.0), cplx(0.0, -2.0), cplx(0.0, 0.0), cplx(-1.0, 0.0);
    cvec f = equal_gain_beamformer(g);
    for (int i = 0; i < 4; ++i)
        REQUIRE(std::abs(std::abs(f[i]) - 1.0) < 1e-15);
    REQUIRE(std::abs(f[0] - cplx(0.6, 0.8)) < 1e-12);
    REQUIRE(std::abs(f[1] - cplx(0.0, -1.0)) < 1e-12);
    REQUIRE(f[2] == cplx(1.0, 0.0));
    REQUIRE(std::abs(f[3] - cplx(-1.0, 0.0)) < 1e-12);

    // Projection of an unconstrained column is the same operation.
    REQUIRE((analog_mmse_projection(g) - f).norm() == 0.0);
}

TEST_CASE("phase-aligned combining collects the full coherent gain", "[digital]")
{
    // On a single-path channel, equal-gain combining attains |f^H g| = N |a|.
    std::vector<PathComponent> paths = {{cplx(1.5, -2.0), PhaseAngle(0.9)}};
    cvec g = synthesize_data_channel(paths, 64);
    cvec f = equal_gain_beamformer(g);
    REQUIRE(std::abs(f.dot(g)) == Catch::Approx(64.0 * std::abs(paths[0].gain)).epsilon(1e-12));
}
