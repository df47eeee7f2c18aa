#ifndef OMRING_SQUEEZING_HPP
#define OMRING_SQUEEZING_HPP

#include "omring/core_model.hpp"

namespace omring
{

// Phase-sensitive transmission of the right-moving probe for a single
// waveguide, beta = 0, G_L = 0, red-sideband pump (Delta = -omega_m), no
// mechanical damping:
//   f_out(w) = alpha(w) f_in(w) + eta(w) f_in^+(-w)
struct PhaseSensitivePair
{
    cplx alpha{1.0, 0.0};
    cplx eta{0.0, 0.0};
    double omega = 0.0; // rotating-frame Fourier frequency
    double delta = 0.0; // probe detuning from resonance, omega - omega_m
};

// Throws NumericalError if the common denominator vanishes.
PhaseSensitivePair appendix_coefficients(double kappa, double kappa_in, cplx g, double omega_m,
                                         double omega);

inline PhaseSensitivePair appendix_coefficients_at_detuning(double kappa, double kappa_in, cplx g,
                                                            double omega_m, double delta)
{
    return appendix_coefficients(kappa, kappa_in, g, omega_m, delta + omega_m);
}

// |eta / alpha|; throws NumericalError when alpha == 0.
double squeezing_ratio(const PhaseSensitivePair &pair);

} // namespace omring

#endif
