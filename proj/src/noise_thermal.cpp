#include "omring/noise_thermal.hpp"

#include "omring/errors.hpp"
#include "omring/full_solver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

namespace omring
{
namespace
{

constexpr double relative_tolerance = 1e-8;
constexpr double hbar = 1.054571817e-34; // J s

void require_stable(const LinearizedModel &model)
{
    const StabilityReport report = stability_check(build_coupling_matrix(model));
    if (!report.stable)
        throw UnstableModel("noise density requires a strictly stable model", report.margin);
}

double exact_density(const LinearizedModel &model, const CouplingMatrix &m, double n_th,
                     double omega)
{
    const PortScattering s = scattering_matrix_unchecked(model, m, omega);
    const int out = static_cast<int>(Channel::wg1_right);
    return std::norm(s.s_mech(out, 0)) * n_th + std::norm(s.s_mech(out, 1)) * (n_th + 1.0);
}

struct Integral
{
    double value = 0.0;
    double error = 0.0;
};

Integral integrate(const std::function<double(double)> &f, const LinearizedModel &model, Band band)
{
    Integral total;
    if (!(band.hi > band.lo))
        return total;

    std::vector<double> cuts{band.lo, band.hi};
    const double g = std::abs(model.g_r);
    for (double c : {model.omega_m - g, model.omega_m, model.omega_m + g})
        if (c > band.lo && c < band.hi)
            cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    using boost::math::quadrature::gauss_kronrod;
    double l1 = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    {
        double err = 0.0;
        double panel_l1 = 0.0;
        total.value += gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1], 25,
                                                            relative_tolerance, &err, &panel_l1);
        total.error += err;
        l1 += panel_l1;
    }
    if (total.error > relative_tolerance * l1 && total.error > 1e-300)
    {
        std::ostringstream os;
        os << "noise quadrature did not converge: achieved relative error " << total.error / l1;
        throw QuadratureError(os.str(), total.error / l1);
    }
    total.value /= 2.0 * std::numbers::pi;
    total.error /= 2.0 * std::numbers::pi;
    return total;
}

} // namespace

double approx_noise_density(const LinearizedModel &model, double heating_rate, double omega)
{
    const double g2 = std::norm(model.g_r);
    const double kt = model.kappa_total();
    const double x = (omega - model.omega_m) * (omega - model.omega_m);
    // (G^2 - x)^2 + kt^2 x, the same polynomial as G^4 - 2 G^2 x + (kt^2 + x) x
    const double den = (g2 - x) * (g2 - x) + kt * kt * x;
    if (den == 0.0)
        throw NumericalError("approximate noise density diverges (G_R = 0 at omega = omega_m)");
    return 2.0 * heating_rate * model.kappa * g2 / den;
}

double noise_spectral_density(const LinearizedModel &model, double n_th, double omega,
                              NoiseMethod method)
{
    if (!(n_th >= 0.0))
        throw InvalidParameters("thermal occupation must be non-negative");
    require_stable(model);
    if (method == NoiseMethod::approx)
        return approx_noise_density(model, model.gamma_m * n_th, omega);
    return exact_density(model, build_coupling_matrix(model), n_th, omega);
}

double approx_noise_flux(const LinearizedModel &model, double heating_rate, Band band)
{
    return integrate([&](double w) { return approx_noise_density(model, heating_rate, w); },
                     model, band)
        .value;
}

NoiseReport noise_power(const LinearizedModel &model, double n_th, Band band, NoiseMethod method,
                        const NoiseUnits &units)
{
    if (!(n_th >= 0.0))
        throw InvalidParameters("thermal occupation must be non-negative");
    if (!std::isfinite(band.lo) || !std::isfinite(band.hi) || band.hi < band.lo)
        throw InvalidParameters("noise band must be a finite interval with lo <= hi");
    require_stable(model);

    const CouplingMatrix m = build_coupling_matrix(model);
    NoiseReport r;
    r.band = band;
    r.n_th = n_th;
    r.method = method;

    const Integral exact = integrate([&](double w) { return exact_density(model, m, n_th, w); },
                                     model, band);
    const Integral approx = integrate(
        [&](double w) { return approx_noise_density(model, model.gamma_m * n_th, w); }, model, band);
    r.flux_exact = exact.value;
    r.flux_approx = approx.value;
    r.quadrature_error = method == NoiseMethod::exact ? exact.error : approx.error;

    const double delta_b = band.half_width();
    const double g2 = std::norm(model.g_r);
    r.power_estimate = delta_b > 0.0 ? model.gamma_m * n_th * model.kappa * delta_b / g2 : 0.0;
    const double flux = method == NoiseMethod::exact ? r.flux_exact : r.flux_approx;
    r.n_noise_per_pulse = delta_b > 0.0 ? flux / delta_b : 0.0;

    if (units.rate_unit)
    {
        r.flux_per_second = flux * *units.rate_unit;
        r.power_estimate_per_second = r.power_estimate * *units.rate_unit;
        if (units.omega_c)
        {
            r.power_watts = hbar * *units.omega_c * *r.flux_per_second;
            r.power_estimate_watts = hbar * *units.omega_c * *r.power_estimate_per_second;
        }
    }
    return r;
}

} // namespace omring
