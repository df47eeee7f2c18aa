#ifndef OMRING_NOISE_THERMAL_HPP
#define OMRING_NOISE_THERMAL_HPP

#include "omring/core_model.hpp"

#include <optional>

namespace omring
{

enum class NoiseMethod
{
    // normally ordered output density from the full solver's mechanical
    // column, thermal bath <xi^+ xi> = N_th, <xi xi^+> = N_th + 1
    exact,
    // red-sideband resonant closed form, valid near omega = omega_m
    approx,
};

// Frequency band [lo, hi] in rotating-frame Fourier frequency.
struct Band
{
    double lo = 0.0;
    double hi = 0.0;

    double center() const { return 0.5 * (lo + hi); }
    // Delta B: the band is [center - Delta B, center + Delta B].
    double half_width() const { return 0.5 * (hi - lo); }
    static Band around(double center, double half_width)
    {
        return Band{center - half_width, center + half_width};
    }
};

// Physical scale of the internal rate unit; both optional.
struct NoiseUnits
{
    std::optional<double> rate_unit; // rad/s per internal unit
    std::optional<double> omega_c;   // carrier, rad/s
};

struct NoiseReport
{
    Band band;
    double n_th = 0.0;
    NoiseMethod method = NoiseMethod::exact;
    // Photons per internal time unit, integral of density * d omega / 2 pi.
    double flux_exact = 0.0;
    double flux_approx = 0.0;
    // gamma_m N_th kappa Delta B / |G_R|^2, photons per internal time unit.
    double power_estimate = 0.0;
    // Photons in a pulse of length 1 / Delta B, from the selected method.
    double n_noise_per_pulse = 0.0;
    double quadrature_error = 0.0;

    // Set when NoiseUnits::rate_unit is known.
    std::optional<double> flux_per_second;
    std::optional<double> power_estimate_per_second;
    // Set when both rate_unit and omega_c are known.
    std::optional<double> power_watts;
    std::optional<double> power_estimate_watts;
};

// Throws UnstableModel for an unstable model and InvalidParameters for n_th < 0.
double noise_spectral_density(const LinearizedModel &model, double n_th, double omega,
                              NoiseMethod method);

// Closed form with the phonon heating rate gamma_m * N_th as one parameter,
// which keeps the gamma_m -> 0 limit at finite heating rate accessible.
double approx_noise_density(const LinearizedModel &model, double heating_rate, double omega);

// Adaptive Gauss-Kronrod over the band (relative tolerance 1e-8), split at
// omega_m and omega_m +- |G_R|. Throws QuadratureError on non-convergence.
NoiseReport noise_power(const LinearizedModel &model, double n_th, Band band,
                        NoiseMethod method = NoiseMethod::exact, const NoiseUnits &units = {});

// Integral of approx_noise_density for a given heating rate.
double approx_noise_flux(const LinearizedModel &model, double heating_rate, Band band);

} // namespace omring

#endif
