#include "omring/toy_analytic.hpp"

#include "omring/errors.hpp"

#include <cmath>
#include <numbers>

namespace omring
{
namespace
{

void check_rates(const ToyParams &p)
{
    if (!(p.kappa >= 0.0) || !(p.kappa_in >= 0.0) || !(p.gamma_m >= 0.0) || !(p.g_r >= 0.0))
        throw InvalidParameters("toy model rates must be non-negative");
}

} // namespace

double principal_angle(double angle)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::remainder(angle, two_pi);
    if (a <= -std::numbers::pi)
        a += two_pi;
    return a;
}

std::vector<double> unwrap_phases(std::span<const double> phases)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out(phases.begin(), phases.end());
    double offset = 0.0;
    double last = std::nan("");
    // NaN samples pass through and do not break the unwrapping of later ones
    for (std::size_t k = 0; k < out.size(); ++k)
    {
        if (std::isnan(phases[k]))
            continue;
        if (!std::isnan(last))
            offset -= two_pi * std::round((phases[k] - last) / two_pi);
        out[k] = phases[k] + offset;
        last = phases[k];
    }
    return out;
}

ToyTransmission toy_transmission(const ToyParams &p, double delta)
{
    check_rates(p);
    const cplx i{0.0, 1.0};
    ToyTransmission t;
    t.delta = delta;
    const cplx bare_den = p.kappa_in + p.kappa - i * delta;
    t.t_l = (p.kappa_in - p.kappa - i * delta) / bare_den;

    const cplx mech = p.gamma_m / 2.0 - i * delta;
    const cplx den = p.g_r * p.g_r + mech * bare_den;
    // At g_r = gamma_m = delta = 0 both numerator and denominator vanish;
    // the limit is the bare resonator response.
    if (den == cplx{0.0, 0.0})
        t.t_r = t.t_l;
    else
        t.t_r = 1.0 - 2.0 * mech * p.kappa / den;
    return t;
}

PhaseShift toy_phase_shift(const ToyParams &p, double delta)
{
    const ToyTransmission t = toy_transmission(p, delta);
    if (std::abs(t.t_r) == 0.0 || std::abs(t.t_l) == 0.0)
        throw NumericalError("phase undefined: transmission amplitude vanishes");
    PhaseShift s;
    s.theta_r = std::arg(t.t_r);
    s.theta_l = std::arg(t.t_l);
    // arg returns [-pi, pi]; fold -pi onto pi
    if (s.theta_r == -std::numbers::pi)
        s.theta_r = std::numbers::pi;
    if (s.theta_l == -std::numbers::pi)
        s.theta_l = std::numbers::pi;
    s.delta_theta = principal_angle(s.theta_r - s.theta_l);
    return s;
}

double toy_isolation_contrast(const ToyParams &p, double delta)
{
    const ToyTransmission t = toy_transmission(p, delta);
    return std::norm(t.t_r) - std::norm(t.t_l);
}

} // namespace omring
