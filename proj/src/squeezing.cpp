#include "omring/squeezing.hpp"

#include "omring/errors.hpp"

#include <cmath>

namespace omring
{

PhaseSensitivePair appendix_coefficients(double kappa, double kappa_in, cplx g, double omega_m,
                                         double omega)
{
    if (!(kappa >= 0.0) || !(kappa_in >= 0.0) || !(omega_m > 0.0))
        throw InvalidParameters("rates must be non-negative and omega_m positive");

    const cplx i{0.0, 1.0};
    const double g2 = std::norm(g);
    const double split = omega * omega - omega_m * omega_m;
    const cplx loss = kappa + kappa_in - i * omega;

    const cplx w_in = omega + i * kappa_in;
    const cplx w_k = omega_m + i * kappa;

    PhaseSensitivePair pair;
    pair.omega = omega;
    pair.delta = omega - omega_m;
    if (g2 == 0.0)
    {
        // common factor (omega^2 - omega_m^2) cancelled
        const cplx bare = loss * loss + omega_m * omega_m;
        if (bare == cplx{0.0, 0.0})
            throw NumericalError("phase-sensitive transmission denominator vanishes");
        pair.alpha = -(w_in * w_in - w_k * w_k) / bare;
        pair.eta = 0.0;
        return pair;
    }

    const cplx den = 4.0 * g2 * omega_m * omega_m + split * (loss * loss + omega_m * omega_m);
    if (den == cplx{0.0, 0.0})
        throw NumericalError("phase-sensitive transmission denominator vanishes");
    const cplx num = 4.0 * g2 * omega_m * w_k - split * (w_in * w_in - w_k * w_k);
    pair.alpha = num / den;
    pair.eta = 4.0 * i * g * g * kappa * omega_m / den;
    return pair;
}

double squeezing_ratio(const PhaseSensitivePair &pair)
{
    if (std::abs(pair.alpha) == 0.0)
        throw NumericalError("squeezing ratio undefined: alpha vanishes");
    return std::abs(pair.eta / pair.alpha);
}

} // namespace omring
