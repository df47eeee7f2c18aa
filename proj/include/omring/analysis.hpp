#ifndef OMRING_ANALYSIS_HPP
#define OMRING_ANALYSIS_HPP

#include "omring/core_model.hpp"
#include "omring/sweep_table.hpp"
#include "omring/toy_analytic.hpp"

#include <functional>
#include <span>
#include <string>

namespace omring
{

inline constexpr double default_contrast_threshold = 0.5;

// Isolation window: the maximal interval around delta = 0 on which
// |t_R|^2 - |t_L|^2 stays at or above the threshold.
struct BandwidthResult
{
    double width = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double threshold = default_contrast_threshold;
    double contrast_at_center = 0.0;
    // Empty on success; explains a zero width or a truncated window.
    std::string diagnostic;
};

struct BandwidthOptions
{
    double threshold = default_contrast_threshold;
    // Marching step; the window edges are then bisected to edge_tolerance.
    double step = 0.0;
    double max_extent = 0.0;
    double edge_tolerance = 1e-7;
};

using ContrastFunction = std::function<double(double delta)>;

// Requires positive step and max_extent in options.
BandwidthResult isolation_bandwidth(const ContrastFunction &contrast, const BandwidthOptions &options);

// Contrast of the wg1 transmissions from the full solver.
// Throws UnstableModel for an unstable model.
BandwidthResult isolation_bandwidth(const LinearizedModel &model,
                                    double threshold = default_contrast_threshold);

// Same definition evaluated on the rotating-wave closed form.
BandwidthResult toy_isolation_bandwidth(const ToyParams &params,
                                        double threshold = default_contrast_threshold);

// |t_R(delta)|^2 - |t_L(delta)|^2 from the full solver, wg1 diagonal.
double full_contrast(const LinearizedModel &model, double delta);

// Rows (beta, g_r, width, lo, hi, status) over beta_grid x g_r_grid, with
// G_L forced to zero and beta taken real. Failed cells carry NaN widths.
SweepTable bandwidth_contour(const LinearizedModel &base, std::span<const double> beta_grid,
                             std::span<const double> g_r_grid,
                             double threshold = default_contrast_threshold, unsigned threads = 0);

// Rows (delta, abs_alpha_r2, abs_alpha_l2, ratio_l_over_r) for a unit right
// drive, evaluated at each shifted detuning.
SweepTable pump_imbalance_curve(const DeviceParams &params, std::span<const double> delta_grid);

enum class CouplingRegime
{
    weak,
    strong,
};

enum class PortRegime
{
    critically_coupled,
    over_coupled,
    under_coupled,
    add_drop,
    other,
};

enum class SidebandRegime
{
    resolved,
    unresolved,
};

// Thresholds: strong iff |G_R| > kappa_t; resolved iff omega_m > 4 kappa_t;
// port labels use 10% bands relative to kappa.
struct RegimeClassification
{
    CouplingRegime coupling = CouplingRegime::weak;
    PortRegime port = PortRegime::other;
    SidebandRegime sideband = SidebandRegime::unresolved;

    std::string summary() const;
};

std::string to_string(CouplingRegime r);
std::string to_string(PortRegime r);
std::string to_string(SidebandRegime r);

RegimeClassification classify_regime(const DeviceParams &params, const LinearizedModel &model);

} // namespace omring

#endif
