#ifndef OMRING_TOY_ANALYTIC_HPP
#define OMRING_TOY_ANALYTIC_HPP

#include "omring/core_model.hpp"

#include <span>
#include <vector>

namespace omring
{

// Idealized single-waveguide device in the rotating-wave approximation:
// pump on the red sideband, no mode coupling, no counter-rotating terms.
// Reflections vanish identically, so only the two transmissions remain.
struct ToyParams
{
    double kappa = 1.0;
    double kappa_in = 1.0;
    double gamma_m = 0.0;
    double g_r = 0.0; // |G_R|
};

struct ToyTransmission
{
    cplx t_r{1.0, 0.0};
    cplx t_l{1.0, 0.0};
    double delta = 0.0;
};

struct PhaseShift
{
    double theta_r = 0.0;
    double theta_l = 0.0;
    double delta_theta = 0.0; // principal value of theta_r - theta_l
};

// delta is the probe detuning from the optical resonance.
ToyTransmission toy_transmission(const ToyParams &p, double delta);

// Throws NumericalError when either transmission vanishes (phase undefined).
PhaseShift toy_phase_shift(const ToyParams &p, double delta);

// |t_R|^2 - |t_L|^2
double toy_isolation_contrast(const ToyParams &p, double delta);

// Wraps any angle into (-pi, pi].
double principal_angle(double angle);

// Removes 2 pi jumps between consecutive samples, keeping the first value.
std::vector<double> unwrap_phases(std::span<const double> phases);

} // namespace omring

#endif
