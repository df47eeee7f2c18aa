#include "omring/analysis.hpp"

#include "omring/errors.hpp"
#include "omring/full_solver.hpp"
#include "omring/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omring
{
namespace
{

// Walks from 0 in direction sign until the contrast drops below threshold,
// then bisects the crossing.
double find_edge(const ContrastFunction &contrast, const BandwidthOptions &o, double sign,
                 bool &truncated)
{
    double inside = 0.0;
    double outside = 0.0;
    bool crossed = false;
    for (double x = o.step; x <= o.max_extent + 0.5 * o.step; x += o.step)
    {
        if (contrast(sign * x) < o.threshold)
        {
            outside = x;
            crossed = true;
            break;
        }
        inside = x;
    }
    if (!crossed)
    {
        truncated = true;
        return sign * inside;
    }
    while (outside - inside > o.edge_tolerance)
    {
        const double mid = 0.5 * (inside + outside);
        if (contrast(sign * mid) >= o.threshold)
            inside = mid;
        else
            outside = mid;
    }
    return sign * 0.5 * (inside + outside);
}

BandwidthOptions options_for(double kappa_total, double g, double beta, double threshold)
{
    BandwidthOptions o;
    o.threshold = threshold;
    const double feature = std::min({kappa_total, g * g / kappa_total, g});
    o.max_extent = 10.0 * (kappa_total + g + beta);
    o.step = std::max(feature / 100.0, o.max_extent * 1e-6);
    o.edge_tolerance = std::min(1e-7 * kappa_total, o.step / 16.0);
    return o;
}

} // namespace

BandwidthResult isolation_bandwidth(const ContrastFunction &contrast, const BandwidthOptions &o)
{
    if (!(o.step > 0.0) || !(o.max_extent > 0.0) || !(o.edge_tolerance > 0.0))
        throw InvalidParameters("bandwidth search needs positive step, extent and tolerance");

    BandwidthResult r;
    r.threshold = o.threshold;
    r.contrast_at_center = contrast(0.0);
    if (!(r.contrast_at_center >= o.threshold))
    {
        r.diagnostic = "no isolation at delta = 0: contrast below threshold";
        return r;
    }
    bool truncated = false;
    r.hi = find_edge(contrast, o, +1.0, truncated);
    r.lo = find_edge(contrast, o, -1.0, truncated);
    r.width = r.hi - r.lo;
    if (truncated)
        r.diagnostic = "isolation window reaches the search limit";
    return r;
}

double full_contrast(const LinearizedModel &model, double delta)
{
    const PortScattering s = scattering_matrix(model, delta - model.delta);
    return std::norm(s.optical(Channel::wg1_right, Channel::wg1_right)) -
           std::norm(s.optical(Channel::wg1_left, Channel::wg1_left));
}

BandwidthResult isolation_bandwidth(const LinearizedModel &model, double threshold)
{
    const CouplingMatrix m = build_coupling_matrix(model);
    const StabilityReport stability = stability_check(m);
    if (!stability.stable)
        throw UnstableModel("isolation bandwidth requires a strictly stable model", stability.margin);

    const auto contrast = [&](double delta) {
        const PortScattering s = scattering_matrix_unchecked(model, m, delta - model.delta);
        return std::norm(s.optical(Channel::wg1_right, Channel::wg1_right)) -
               std::norm(s.optical(Channel::wg1_left, Channel::wg1_left));
    };
    return isolation_bandwidth(contrast, options_for(model.kappa_total(), std::abs(model.g_r),
                                                     std::abs(model.beta), threshold));
}

BandwidthResult toy_isolation_bandwidth(const ToyParams &params, double threshold)
{
    const auto contrast = [&](double delta) { return toy_isolation_contrast(params, delta); };
    return isolation_bandwidth(contrast, options_for(params.kappa + params.kappa_in, params.g_r,
                                                     0.0, threshold));
}

SweepTable bandwidth_contour(const LinearizedModel &base, std::span<const double> beta_grid,
                             std::span<const double> g_r_grid, double threshold, unsigned threads)
{
    const std::size_t nb = beta_grid.size();
    const std::size_t ng = g_r_grid.size();
    std::vector<BandwidthResult> results(nb * ng);
    std::vector<std::string> status(nb * ng, "ok");

    parallel_for(nb * ng, threads, [&](std::size_t k) {
        LinearizedModel model = base;
        model.beta = beta_grid[k / ng];
        model.g_r = g_r_grid[k % ng];
        model.g_l = 0.0;
        try
        {
            results[k] = isolation_bandwidth(model, threshold);
            if (!results[k].diagnostic.empty() && results[k].width > 0.0)
                status[k] = "truncated";
        }
        catch (const UnstableModel &)
        {
            status[k] = "unstable";
        }
        catch (const NumericalError &)
        {
            status[k] = "numerical";
        }
    });

    SweepTable table;
    table.columns = {"beta", "g_r", "width", "lo", "hi", "status"};
    table.add_metadata("bandwidth.threshold", format_number(threshold));
    table.add_metadata("bandwidth.definition", "|t_R|^2 - |t_L|^2 >= threshold around delta = 0");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < nb * ng; ++k)
    {
        const bool ok = status[k] == "ok" || status[k] == "truncated";
        table.rows.push_back({beta_grid[k / ng], g_r_grid[k % ng], ok ? results[k].width : nan,
                              ok ? results[k].lo : nan, ok ? results[k].hi : nan, status[k]});
    }
    return table;
}

SweepTable pump_imbalance_curve(const DeviceParams &params, std::span<const double> delta_grid)
{
    SweepTable table;
    table.columns = {"delta", "abs_alpha_r2", "abs_alpha_l2", "ratio_l_over_r"};
    table.add_metadata("drive", "unit right drive, shifted detuning");
    const PumpDrive drive{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    for (double delta : delta_grid)
    {
        const PumpSteadyState s = steady_state_pump_at(params, drive, delta);
        table.rows.push_back({delta, std::norm(s.alpha_r), std::norm(s.alpha_l),
                              std::abs(s.alpha_l) / std::abs(s.alpha_r)});
    }
    return table;
}

std::string to_string(CouplingRegime r) { return r == CouplingRegime::strong ? "strong" : "weak"; }

std::string to_string(PortRegime r)
{
    switch (r)
    {
    case PortRegime::critically_coupled: return "critically-coupled";
    case PortRegime::over_coupled: return "over-coupled";
    case PortRegime::under_coupled: return "under-coupled";
    case PortRegime::add_drop: return "add-drop";
    case PortRegime::other: return "other";
    }
    return "other";
}

std::string to_string(SidebandRegime r)
{
    return r == SidebandRegime::resolved ? "resolved" : "unresolved";
}

std::string RegimeClassification::summary() const
{
    return to_string(coupling) + " coupling, sideband " + to_string(sideband) + ", " + to_string(port);
}

RegimeClassification classify_regime(const DeviceParams &params, const LinearizedModel &model)
{
    RegimeClassification c;
    const double kt = model.kappa_total();
    c.coupling = std::abs(model.g_r) > kt ? CouplingRegime::strong : CouplingRegime::weak;
    c.sideband = model.omega_m > 4.0 * kt ? SidebandRegime::resolved : SidebandRegime::unresolved;

    const double k = params.kappa;
    const double kp = params.kappa_prime;
    const double ki = params.kappa_in;
    constexpr double band = 0.1;
    if (k > 0.0 && kp == 0.0 && std::abs(k - ki) <= band * k)
        c.port = PortRegime::critically_coupled;
    else if (k > 0.0 && kp == 0.0 && ki <= band * k)
        c.port = PortRegime::over_coupled;
    else if (k > 0.0 && std::abs(k - kp) <= band * k && ki <= band * k)
        c.port = PortRegime::add_drop;
    else if (kp == 0.0 && ki > k)
        c.port = PortRegime::under_coupled;
    else
        c.port = PortRegime::other;
    return c;
}

} // namespace omring
