#include "omring/core_model.hpp"

#include "omring/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace omring
{
namespace
{

void require(bool condition, const char *message)
{
    if (!condition)
        throw InvalidParameters(message);
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Solves
//   (i delta - kt) aR - i beta* aL = 2 kappa E
//   (i delta - kt) aL - i beta  aR = 2 kappa E'
void solve_pump_fields(const DeviceParams &p, const PumpDrive &drive, double delta,
                       PumpSteadyState &out)
{
    const cplx z{-p.kappa_total(), delta};
    const cplx det = z * z + std::norm(p.beta);
    const double scale = std::norm(z) + std::norm(p.beta);
    if (std::abs(det) <= 1e-14 * scale)
        throw PumpSolveError("pump system singular: (i delta - kappa_t)^2 + |beta|^2 = 0");

    const cplx i{0.0, 1.0};
    const cplx e = 2.0 * p.kappa * drive.amplitude_right;
    const cplx e_left = 2.0 * p.kappa * drive.amplitude_left;
    out.alpha_r = (z * e + i * std::conj(p.beta) * e_left) / det;
    out.alpha_l = (i * p.beta * e + z * e_left) / det;
}

void fill_static_from_delta(const DeviceParams &p, PumpSteadyState &out)
{
    const double n = out.photon_number();
    out.b_static = -p.g0 * n / p.omega_m;
    out.delta0 = out.delta - 2.0 * p.g0 * p.g0 * n / p.omega_m;
}

} // namespace

std::vector<std::string> validate(const DeviceParams &p)
{
    require(std::isfinite(p.omega_m) && p.omega_m > 0.0, "omega_m must be positive");
    require(std::isfinite(p.kappa) && p.kappa >= 0.0, "kappa must be non-negative");
    require(std::isfinite(p.kappa_prime) && p.kappa_prime >= 0.0,
            "kappa_prime must be non-negative");
    require(std::isfinite(p.kappa_in) && p.kappa_in >= 0.0, "kappa_in must be non-negative");
    require(std::isfinite(p.gamma_m) && p.gamma_m >= 0.0, "gamma_m must be non-negative");
    require(std::isfinite(p.g0), "g0 must be finite");
    require(finite(p.beta), "beta must be finite");
    require(std::isfinite(p.delta0), "delta0 must be finite");
    require(p.kappa_total() > 0.0, "kappa + kappa_prime + kappa_in must be positive");
    if (p.omega_c)
        require(std::isfinite(*p.omega_c) && *p.omega_c > 0.0, "omega_c must be positive");
    if (p.rate_unit)
        require(std::isfinite(*p.rate_unit) && *p.rate_unit > 0.0, "rate unit must be positive");

    std::vector<std::string> warnings;
    if (p.gamma_m > p.omega_m / 10.0)
    {
        std::ostringstream os;
        os << "gamma_m = " << p.gamma_m << " exceeds omega_m/10; Langevin model assumes gamma_m << omega_m";
        warnings.push_back(os.str());
    }
    return warnings;
}

LinearizedModel make_model(const DeviceParams &p, cplx g_r, cplx g_l, double delta)
{
    LinearizedModel m;
    m.g_r = g_r;
    m.g_l = g_l;
    m.delta = delta;
    m.beta = p.beta;
    m.omega_m = p.omega_m;
    m.kappa = p.kappa;
    m.kappa_prime = p.kappa_prime;
    m.kappa_in = p.kappa_in;
    m.gamma_m = p.gamma_m;
    return m;
}

PumpSteadyState steady_state_pump_at(const DeviceParams &p, const PumpDrive &drive,
                                     double shifted_delta)
{
    validate(p);
    if (!finite(drive.amplitude_right) || !finite(drive.amplitude_left) ||
        !std::isfinite(shifted_delta))
        throw InvalidParameters("pump drive and detuning must be finite");

    PumpSteadyState out;
    out.delta = shifted_delta;
    solve_pump_fields(p, drive, shifted_delta, out);
    fill_static_from_delta(p, out);
    return out;
}

PumpSteadyState steady_state_pump(const DeviceParams &p, const PumpDrive &drive)
{
    validate(p);
    if (!finite(drive.amplitude_right) || !finite(drive.amplitude_left))
        throw InvalidParameters("pump drive must be finite");

    constexpr int max_iterations = 200;
    constexpr double tolerance = 1e-12;
    const double shift_per_photon = 2.0 * p.g0 * p.g0 / p.omega_m;

    PumpSteadyState out;
    out.delta = p.delta0;
    for (int it = 1; it <= max_iterations; ++it)
    {
        solve_pump_fields(p, drive, out.delta, out);
        const double next = p.delta0 + shift_per_photon * out.photon_number();
        const double step = std::abs(next - out.delta);
        out.delta = next;
        out.iterations = it;
        if (step <= tolerance * std::max(std::abs(next), p.kappa_total()))
        {
            out.b_static = -p.g0 * out.photon_number() / p.omega_m;
            out.delta0 = p.delta0;
            return out;
        }
        if (!std::isfinite(next))
            break;
    }
    throw PumpSolveError("self-consistent detuning did not converge (possible multistable pump regime)");
}

LinearizedModel linearize(const DeviceParams &p, const PumpSteadyState &pump)
{
    return make_model(p, p.g0 * pump.alpha_r, p.g0 * pump.alpha_l, pump.delta);
}

cplx cancellation_drive(const DeviceParams &p, cplx drive_right, double shifted_delta)
{
    if (!(p.kappa_total() > 0.0))
        throw InvalidParameters("kappa_total must be positive");
    const cplx z{-p.kappa_total(), shifted_delta};
    const cplx i{0.0, 1.0};
    return -i * p.beta * drive_right / z;
}

DeviceParams normalize(const PhysicalRates &r)
{
    const double unit_hz = r.kappa_hz > 0.0 ? r.kappa_hz
                                            : r.kappa_hz + r.kappa_prime_hz + r.kappa_in_hz;
    if (!(unit_hz > 0.0) || !std::isfinite(unit_hz))
        throw InvalidParameters("cannot normalize rates: total optical decay must be positive");

    DeviceParams p;
    p.omega_m = r.omega_m_hz / unit_hz;
    p.kappa = r.kappa_hz / unit_hz;
    p.kappa_prime = r.kappa_prime_hz / unit_hz;
    p.kappa_in = r.kappa_in_hz / unit_hz;
    p.gamma_m = r.gamma_m_hz / unit_hz;
    p.g0 = r.g0_hz / unit_hz;
    p.beta = r.beta_hz / unit_hz;
    p.delta0 = r.delta0_hz / unit_hz;
    p.rate_unit = 2.0 * std::numbers::pi * unit_hz;
    if (r.carrier_hz)
        p.omega_c = 2.0 * std::numbers::pi * *r.carrier_hz;
    return p;
}

} // namespace omring
