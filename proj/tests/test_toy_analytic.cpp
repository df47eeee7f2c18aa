#include "omring/errors.hpp"
#include "omring/toy_analytic.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include <numbers>

using namespace omring;
using testing::linspace;

TEST_CASE("diode point")
{
    const ToyParams p{1.0, 1.0, 0.0, 5.0};
    const ToyTransmission t = toy_transmission(p, 0.0);
    CHECK(std::abs(t.t_r - 1.0) < 1e-10);
    CHECK(std::abs(t.t_l) < 1e-10);
    CHECK(toy_isolation_contrast(p, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matches the rotating-wave reference on a grid")
{
    for (double g : {0.0, 0.3, 2.0, 7.0})
        for (double gamma : {0.0, 0.05})
            for (double d : linspace(-9.7, 9.7, 97))
            {
                const ToyParams p{1.0, 0.4, gamma, g};
                const ToyTransmission t = toy_transmission(p, d);
                CHECK(std::abs(t.t_r - testing::rwa_t_right(1.0, 0.4, gamma, g, d)) < 1e-13);
                CHECK(std::abs(t.t_l - testing::all_pass(1.0, 0.4, d)) < 1e-13);
            }
}

TEST_CASE("no pump means reciprocal transmission")
{
    const ToyParams p{1.0, 0.6, 0.02, 0.0};
    for (double d : linspace(-10.0, 10.0, 201))
    {
        const ToyTransmission t = toy_transmission(p, d);
        CHECK(std::abs(t.t_r - t.t_l) < 1e-15);
        CHECK(toy_isolation_contrast(p, d) == doctest::Approx(0.0));
    }
}

TEST_CASE("lossless transmission is unitary")
{
    for (double g : {0.5, 5.0, 20.0})
    {
        const ToyParams p{1.0, 0.0, 0.0, g};
        for (double d : linspace(-50.0, 50.0, 2001))
        {
            const ToyTransmission t = toy_transmission(p, d);
            CHECK(std::abs(std::abs(t.t_r) - 1.0) < 1e-12);
            CHECK(std::abs(std::abs(t.t_l) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("lossless transparency point")
{
    const ToyParams p{1.0, 0.0, 0.0, 3.0};
    const ToyTransmission t = toy_transmission(p, 0.0);
    CHECK(std::abs(t.t_r - 1.0) < 1e-15);
    CHECK(std::abs(t.t_l + 1.0) < 1e-15);
    const PhaseShift s = toy_phase_shift(p, 0.0);
    CHECK(s.theta_r == doctest::Approx(0.0));
    CHECK(std::abs(s.theta_l) == doctest::Approx(std::numbers::pi));
    CHECK(std::abs(s.delta_theta - std::numbers::pi) < 1e-10);
}

TEST_CASE("passive device never amplifies")
{
    for (double ki : {0.0, 0.01, 1.0, 3.0})
        for (double gamma : {0.0, 0.1})
            for (double g : {0.0, 1.0, 5.0})
            {
                const ToyParams p{1.0, ki, gamma, g};
                for (double d : linspace(-30.0, 30.0, 1201))
                {
                    const ToyTransmission t = toy_transmission(p, d);
                    CHECK(std::abs(t.t_r) <= 1.0 + 1e-14);
                    CHECK(std::abs(t.t_l) <= 1.0 + 1e-14);
                }
            }
}

TEST_CASE("transparency resonances split by twice the coupling")
{
    // Lossless: |t| == 1, so the dressed resonances show up as maxima of
    // |1 - t_R|, expected at d = +-G.
    const double g = 20.0;
    const ToyParams p{1.0, 0.0, 0.0, g};
    const auto depth = [&](double d) { return -std::abs(1.0 - toy_transmission(p, d).t_r); };
    const auto hi = boost::math::tools::brent_find_minima(depth, 1.0, 40.0, 50);
    const auto lo = boost::math::tools::brent_find_minima(depth, -40.0, -1.0, 50);
    CHECK(hi.first - lo.first == doctest::Approx(2.0 * g).epsilon(0.05));
    CHECK(std::abs(1.0 - toy_transmission(p, 0.0).t_r) < 1e-15);
}

TEST_CASE("over-coupled transmission floor")
{
    // The left transmission is pump independent; its minimum over the band is
    // the on-resonance value ((kappa - kappa_in) / (kappa + kappa_in))^2.
    const double floor = std::pow(0.99 / 1.01, 2);
    for (double g : linspace(1.0, 10.0, 19))
    {
        const ToyParams p{1.0, 0.01, 0.0, g};
        double lowest = 1.0;
        for (double d : linspace(-2.0, 2.0, 401))
        {
            const ToyTransmission t = toy_transmission(p, d);
            lowest = std::min({lowest, std::norm(t.t_r), std::norm(t.t_l)});
        }
        CHECK(lowest == doctest::Approx(floor).epsilon(1e-12));
        if (g >= 3.0)
        {
            for (double d : linspace(-2.0, 2.0, 401))
                CHECK(std::norm(toy_transmission(p, d).t_r) > 0.99);
        }
    }
}

TEST_CASE("far-detuned probe bypasses the ring")
{
    const ToyParams p{1.0, 0.0, 0.0, 4.0};
    for (double d : {1e6, -1e6})
    {
        const PhaseShift s = toy_phase_shift(p, d);
        CHECK(std::abs(s.theta_r) < 1e-5);
        CHECK(std::abs(s.theta_l) < 1e-5);
        CHECK(std::abs(s.delta_theta) < 1e-5);
    }
}

TEST_CASE("undefined phase is an error")
{
    // Critical coupling, no pump: t_L(0) == 0.
    CHECK_THROWS_AS(toy_phase_shift(ToyParams{1.0, 1.0, 0.0, 0.0}, 0.0), NumericalError);
}

TEST_CASE("isolation contrast of the strongly pumped critically coupled ring")
{
    // With t_R ~ 1 the contrast is 4 kappa^2 / (4 kappa^2 + d^2) >= 1/2 for |d| <= 2.
    const ToyParams p{1.0, 1.0, 0.0, 60.0};
    for (double d : linspace(-2.0, 2.0, 81))
    {
        const double want = 4.0 / (4.0 + d * d);
        CHECK(toy_isolation_contrast(p, d) == doctest::Approx(want).epsilon(2e-3));
        CHECK(toy_isolation_contrast(p, d) >= 0.5 - 2e-3);
    }
}

TEST_CASE("principal angle and unwrapping")
{
    CHECK(principal_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(principal_angle(3.0 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(principal_angle(0.25) == 0.25);

    std::vector<double> raw;
    std::vector<double> truth;
    for (int k = 0; k < 200; ++k)
    {
        const double phi = 0.1 * k;
        truth.push_back(phi);
        raw.push_back(principal_angle(phi));
    }
    const std::vector<double> un = unwrap_phases(raw);
    for (std::size_t k = 0; k < un.size(); ++k)
        CHECK(un[k] == doctest::Approx(truth[k]).epsilon(1e-12));

    const std::vector<double> gap{0.1, std::nan(""), 0.2};
    const std::vector<double> out = unwrap_phases(gap);
    CHECK(std::isnan(out[1]));
    CHECK(out[2] == doctest::Approx(0.2));
}
