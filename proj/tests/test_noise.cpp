#include "omring/errors.hpp"
#include "omring/noise_thermal.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <boost/math/tools/minima.hpp>

#include <numbers>
#include <random>

using namespace omring;
using testing::linspace;

namespace
{

LinearizedModel noisy(double g, double kappa_in = 1.0, double omega_m = 20.0)
{
    LinearizedModel m = testing::diode_model(g);
    m.kappa_in = kappa_in;
    m.omega_m = omega_m;
    m.delta = -omega_m;
    m.gamma_m = 1e-3;
    return m;
}

constexpr double n_th = 1000.0; // heating rate gamma_m N_th = 1

} // namespace

TEST_CASE("approximate density vanishes without thermal phonons")
{
    const LinearizedModel m = noisy(2.0);
    for (double w : linspace(10.0, 30.0, 41))
        CHECK(noise_spectral_density(m, 0.0, w, NoiseMethod::approx) == 0.0);
}

TEST_CASE("approximate density at the mechanical frequency")
{
    for (double g : {0.3, 1.0, 5.0})
    {
        const LinearizedModel m = noisy(g);
        const double want = 2.0 * m.gamma_m * n_th * m.kappa / (g * g);
        CHECK(std::abs(noise_spectral_density(m, n_th, m.omega_m, NoiseMethod::approx) - want) <=
              1e-12 * want);
    }
}

TEST_CASE("denominator identity and finiteness")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k)
    {
        const double g = 10.0 * u(rng);
        const double kt = 0.01 + 5.0 * u(rng);
        const double x = std::pow(20.0 * (u(rng) - 0.5), 2);
        const double expanded = std::pow(g, 4) - 2.0 * g * g * x + (kt * kt + x) * x;
        const double square = (g * g - x) * (g * g - x) + kt * kt * x;
        CHECK(square >= 0.0);
        CHECK(expanded == doctest::Approx(square).epsilon(1e-9).scale(std::pow(g * g + x + kt * kt, 2)));
    }
    const LinearizedModel m = noisy(3.0);
    for (double w : linspace(0.0, 40.0, 4001))
        CHECK(std::isfinite(approx_noise_density(m, 1.0, w)));
}

TEST_CASE("weak coupling up-converts roughly all heating into the pulse")
{
    // Intrinsic damping well below the optical damping G^2/kappa_t, same heating rate.
    LinearizedModel m = noisy(0.1);
    m.gamma_m = 1e-5;
    const double hot = 1e5;
    const double delta_b = 0.1 * 0.1 / m.kappa;
    const NoiseReport r = noise_power(m, hot, Band::around(m.omega_m, delta_b));
    const double estimate = m.gamma_m * hot / delta_b;
    CHECK(r.n_noise_per_pulse > estimate / 3.0);
    CHECK(r.n_noise_per_pulse < estimate * 3.0);
    CHECK(r.power_estimate == doctest::Approx(m.gamma_m * hot));
}

TEST_CASE("strong coupling suppresses the in-band noise")
{
    const double g = 5.0;
    const LinearizedModel m = noisy(g);
    const NoiseReport r = noise_power(m, n_th, Band::around(m.omega_m, m.kappa));
    const double ratio = r.flux_exact / (m.gamma_m * n_th);
    const double want = std::pow(m.kappa / g, 2);
    CHECK(ratio > want / 3.0);
    CHECK(ratio < want * 3.0);
}

TEST_CASE("empty band carries no flux")
{
    const LinearizedModel m = noisy(2.0);
    const NoiseReport r = noise_power(m, n_th, Band{20.0, 20.0});
    CHECK(r.flux_exact == 0.0);
    CHECK(r.flux_approx == 0.0);
    CHECK(r.power_estimate == 0.0);
    CHECK(r.n_noise_per_pulse == 0.0);
}

TEST_CASE("flux is linear in the thermal drive")
{
    const LinearizedModel m = noisy(2.0);
    const Band band = Band::around(m.omega_m, 3.0);
    const NoiseReport r0 = noise_power(m, 0.0, band);
    const NoiseReport r1 = noise_power(m, 500.0, band);
    const NoiseReport r2 = noise_power(m, 1000.0, band);
    CHECK(r2.flux_exact - r1.flux_exact == doctest::Approx(r1.flux_exact - r0.flux_exact).epsilon(1e-7));
    CHECK(r2.flux_approx == doctest::Approx(2.0 * r1.flux_approx).epsilon(1e-7));
    CHECK(approx_noise_flux(m, 2.0, band) == doctest::Approx(2.0 * approx_noise_flux(m, 1.0, band)).epsilon(1e-7));
}

TEST_CASE("split peaks of the approximate density")
{
    LinearizedModel m = noisy(0.0);
    const double g = 5.0 * m.kappa_total();
    m.g_r = g;
    const auto neg = [&](double w) { return -approx_noise_density(m, 1.0, w); };
    const auto upper = boost::math::tools::brent_find_minima(neg, m.omega_m + 1.0, m.omega_m + 2.0 * g, 50);
    const auto lower = boost::math::tools::brent_find_minima(neg, m.omega_m - 2.0 * g, m.omega_m - 1.0, 50);
    CHECK(upper.first - m.omega_m == doctest::Approx(g).epsilon(0.1));
    CHECK(m.omega_m - lower.first == doctest::Approx(g).epsilon(0.1));
    const auto pos = [&](double w) { return approx_noise_density(m, 1.0, w); };
    const auto valley = boost::math::tools::brent_find_minima(pos, m.omega_m - 0.5 * g, m.omega_m + 0.5 * g, 50);
    CHECK(std::abs(valley.first - m.omega_m) < 1e-6 * g);
}

TEST_CASE("exact and approximate densities agree in the resolved regime")
{
    for (double g : {0.5, 2.0, 5.0})
    {
        LinearizedModel m = noisy(g);
        m.omega_m = 20.0 * m.kappa_total();
        m.delta = -m.omega_m;
        for (double w : linspace(m.omega_m - m.kappa, m.omega_m + m.kappa, 41))
        {
            const double exact = noise_spectral_density(m, n_th, w, NoiseMethod::exact);
            const double approx = noise_spectral_density(m, n_th, w, NoiseMethod::approx);
            CHECK(std::abs(exact - approx) <= 0.2 * approx);
        }
    }
}

TEST_CASE("physical units")
{
    const LinearizedModel m = noisy(2.0);
    const double unit = 2.0 * std::numbers::pi * 5e6;
    const double carrier = 2.0 * std::numbers::pi * 193e12;
    const NoiseReport r = noise_power(m, n_th, Band::around(m.omega_m, 1.0), NoiseMethod::exact,
                                      NoiseUnits{unit, carrier});
    REQUIRE(r.power_watts);
    CHECK(*r.flux_per_second == doctest::Approx(r.flux_exact * unit));
    CHECK(*r.power_watts == doctest::Approx(1.054571817e-34 * carrier * r.flux_exact * unit));

    const NoiseReport plain = noise_power(m, n_th, Band::around(m.omega_m, 1.0));
    CHECK_FALSE(plain.flux_per_second);
    CHECK_FALSE(plain.power_watts);
}

TEST_CASE("noise errors")
{
    const LinearizedModel m = noisy(2.0);
    CHECK_THROWS_AS(noise_power(m, -1.0, Band{19.0, 21.0}), InvalidParameters);
    CHECK_THROWS_AS(noise_power(m, 1.0, Band{21.0, 19.0}), InvalidParameters);
    CHECK_THROWS_AS(noise_power(noisy(12.0), 1.0, Band{19.0, 21.0}), UnstableModel);
    CHECK_THROWS_AS(approx_noise_density(noisy(0.0), 1.0, 20.0), NumericalError);
}
