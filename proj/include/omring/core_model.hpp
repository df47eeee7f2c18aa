#ifndef OMRING_CORE_MODEL_HPP
#define OMRING_CORE_MODEL_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace omring
{

using cplx = std::complex<double>;

// Physical parameters of the ring, its waveguide couplings and the
// mechanical mode. All rates share one unit; the library works in units of
// the waveguide-1 coupling kappa, so a typical device has kappa == 1.
//
// Field decay conventions: the resonator field decays at kappa into
// waveguide 1, kappa_prime into waveguide 2 and kappa_in intrinsically
// (energy rates are twice these). The mechanical field b decays at
// gamma_m / 2.
struct DeviceParams
{
    double omega_m = 20.0;
    double kappa = 1.0;
    double kappa_prime = 0.0;
    double kappa_in = 1.0;
    double gamma_m = 0.0;
    double g0 = 0.0;
    cplx beta{0.0, 0.0};
    // Bare pump detuning omega_L - omega_c.
    double delta0 = -20.0;
    // Optical carrier in rad/s; only used to convert photon flux to watts.
    std::optional<double> omega_c;
    // rad/s corresponding to one internal rate unit, when the parameters
    // were converted from physical (Hz) inputs.
    std::optional<double> rate_unit;

    double kappa_total() const { return kappa + kappa_prime + kappa_in; }
};

// Throws InvalidParameters if an invariant is violated. Returns
// non-fatal warnings (e.g. gamma_m not small against omega_m).
std::vector<std::string> validate(const DeviceParams &params);

// Classical drive amplitudes entering the right- and left-circulating modes
// from waveguide 1.
struct PumpDrive
{
    cplx amplitude_right{0.0, 0.0};
    cplx amplitude_left{0.0, 0.0};
};

struct PumpSteadyState
{
    cplx alpha_r{0.0, 0.0};
    cplx alpha_l{0.0, 0.0};
    double b_static = 0.0;
    // Detuning with the static optomechanical shift absorbed.
    double delta = 0.0;
    // Bare detuning consistent with delta and the intracavity photon number.
    double delta0 = 0.0;
    int iterations = 0;

    double photon_number() const { return std::norm(alpha_r) + std::norm(alpha_l); }
};

// Everything the scattering solvers need: enhanced couplings, detuning,
// mode coupling and decay rates.
struct LinearizedModel
{
    cplx g_r{0.0, 0.0};
    cplx g_l{0.0, 0.0};
    double delta = 0.0;
    cplx beta{0.0, 0.0};
    double omega_m = 20.0;
    double kappa = 1.0;
    double kappa_prime = 0.0;
    double kappa_in = 1.0;
    double gamma_m = 0.0;

    double kappa_total() const { return kappa + kappa_prime + kappa_in; }
};

// Builds a model directly from couplings, bypassing the pump calculation.
LinearizedModel make_model(const DeviceParams &params, cplx g_r, cplx g_l, double delta);

// Steady state for a detuning that already contains the optomechanical shift.
PumpSteadyState steady_state_pump_at(const DeviceParams &params, const PumpDrive &drive,
                                     double shifted_delta);

// Self-consistent steady state starting from the bare detuning params.delta0.
// Iterates delta <- delta0 + 2 g0^2 n / omega_m to relative tolerance 1e-12.
PumpSteadyState steady_state_pump(const DeviceParams &params, const PumpDrive &drive);

LinearizedModel linearize(const DeviceParams &params, const PumpSteadyState &pump);

// Left-circulating drive that exactly cancels the backscattered pump for a
// given right drive, evaluated at the shifted detuning.
cplx cancellation_drive(const DeviceParams &params, cplx drive_right, double shifted_delta);

// Hz inputs (cycles per second) converted to rad/s and then normalized so
// that kappa == 1 (or kappa_total == 1 when kappa is zero). rate_unit
// records the rad/s per unit.
struct PhysicalRates
{
    double omega_m_hz = 0.0;
    double kappa_hz = 0.0;
    double kappa_prime_hz = 0.0;
    double kappa_in_hz = 0.0;
    double gamma_m_hz = 0.0;
    double g0_hz = 0.0;
    cplx beta_hz{0.0, 0.0};
    double delta0_hz = 0.0;
    std::optional<double> carrier_hz;
};

DeviceParams normalize(const PhysicalRates &rates);

} // namespace omring

#endif
