#include "omring/full_solver.hpp"

#include "omring/errors.hpp"
#include "omring/parallel.hpp"
#include "omring/toy_analytic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace omring
{

std::string_view channel_name(Channel c)
{
    switch (c)
    {
    case Channel::wg1_right: return "wg1_R";
    case Channel::wg1_left: return "wg1_L";
    case Channel::wg2_right: return "wg2_R";
    case Channel::wg2_left: return "wg2_L";
    }
    return "?";
}

Channel parse_channel(std::string_view name)
{
    for (Channel c : all_channels)
        if (channel_name(c) == name)
            return c;
    throw InvalidParameters("unknown channel '" + std::string(name) +
                            "' (expected wg1_R, wg1_L, wg2_R or wg2_L)");
}

int channel_waveguide(Channel c)
{
    return (c == Channel::wg1_right || c == Channel::wg1_left) ? 1 : 2;
}

bool channel_is_right(Channel c) { return c == Channel::wg1_right || c == Channel::wg2_right; }

double channel_coupling(const LinearizedModel &model, Channel c)
{
    return std::sqrt(2.0 * (channel_waveguide(c) == 1 ? model.kappa : model.kappa_prime));
}

namespace
{

int annihilation_slot(Channel c) { return channel_is_right(c) ? slot_a_r : slot_a_l; }

} // namespace

CouplingMatrix build_coupling_matrix(const LinearizedModel &model)
{
    const cplx i{0.0, 1.0};
    const cplx gr = model.g_r;
    const cplx gl = model.g_l;
    const cplx grc = std::conj(gr);
    const cplx glc = std::conj(gl);
    const cplx b = model.beta;
    const cplx bc = std::conj(b);
    const double wm = model.omega_m;
    const double d = model.delta;
    const double kt = model.kappa_total();
    const double gm = model.gamma_m;

    Matrix6c k;
    // clang-format off
    k << wm - i * gm / 2.0, grc,         glc,         0.0,                gr,          gl,
         gr,                -d - i * kt, bc,          gr,                 0.0,         0.0,
         gl,                b,           -d - i * kt, gl,                 0.0,         0.0,
         0.0,               -grc,        -glc,        -wm - i * gm / 2.0, -gr,         -gl,
         -grc,              0.0,         0.0,         -grc,               d - i * kt,  -b,
         -glc,              0.0,         0.0,         -glc,               -bc,         d - i * kt;
    // clang-format on
    return CouplingMatrix{i * k};
}

StabilityReport stability_check(const CouplingMatrix &m)
{
    Eigen::ComplexEigenSolver<Matrix6c> solver(m.m, /*computeEigenvectors=*/false);
    StabilityReport report;
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue computation failed");
    double margin = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (int k = 0; k < 6; ++k)
    {
        report.eigenvalues[k] = solver.eigenvalues()[k];
        margin = std::min(margin, report.eigenvalues[k].real());
        scale = std::max(scale, std::abs(report.eigenvalues[k]));
    }
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    report.margin = margin;
    // Round-off in the eigensolver is ~eps * |M|; a margin inside that band
    // is treated as marginal, not stable.
    report.stable = margin > 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
    return report;
}

Matrix6c response_matrix(const CouplingMatrix &m, double omega, double *condition)
{
    const cplx i{0.0, 1.0};
    const Matrix6c a = -m.m + i * omega * Matrix6c::Identity();
    Eigen::PartialPivLU<Matrix6c> lu(a);
    const double rcond = lu.rcond();
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (condition)
        *condition = cond;
    if (!(cond <= max_condition_number))
    {
        std::ostringstream os;
        os << "probe at an undamped resonance: condition number " << cond << " at omega = " << omega;
        throw SingularSystem(os.str(), cond);
    }
    return lu.inverse();
}

PortScattering scattering_matrix_unchecked(const LinearizedModel &model, const CouplingMatrix &m,
                                           double omega)
{
    PortScattering s;
    s.omega = omega;
    const Matrix6c t = response_matrix(m, omega, &s.condition);
    const double sqrt_gamma = std::sqrt(model.gamma_m);

    for (Channel out : all_channels)
    {
        const int o = static_cast<int>(out);
        const int row = annihilation_slot(out);
        const double c_out = channel_coupling(model, out);
        for (Channel in : all_channels)
        {
            const int n = static_cast<int>(in);
            const int col = annihilation_slot(in);
            const double c_in = channel_coupling(model, in);
            s.s_optical(o, n) = c_out * c_in * t(row, col) + (o == n ? 1.0 : 0.0);
            s.s_conjugate(o, n) = c_out * c_in * t(row, col + 3);
        }
        s.s_mech(o, 0) = c_out * sqrt_gamma * t(row, slot_b);
        s.s_mech(o, 1) = c_out * sqrt_gamma * t(row, slot_b_dag);
    }
    return s;
}

namespace
{

void require_stable(const StabilityReport &report)
{
    if (!report.stable)
    {
        std::ostringstream os;
        os << "linearized model is not strictly stable (min Re(lambda) = " << report.margin << ")";
        throw UnstableModel(os.str(), report.margin);
    }
}

} // namespace

PortScattering scattering_matrix(const LinearizedModel &model, double omega)
{
    const CouplingMatrix m = build_coupling_matrix(model);
    require_stable(stability_check(m));
    return scattering_matrix_unchecked(model, m, omega);
}

SweepTable transmission_spectrum(const LinearizedModel &model, std::span<const double> omega_grid,
                                 Channel in, Channel out, const SpectrumOptions &options)
{
    const CouplingMatrix m = build_coupling_matrix(model);
    require_stable(stability_check(m));

    SweepTable table;
    table.columns = {"omega", "delta", "re", "im", "abs2", "phase", "status"};
    table.add_metadata("element", std::string(channel_name(in)) + " -> " + std::string(channel_name(out)));
    table.add_metadata("phase", options.unwrap_phase ? "unwrapped" : "principal value (-pi, pi]");

    const std::size_t n = omega_grid.size();
    std::vector<cplx> amplitude(n, cplx{std::nan(""), std::nan("")});
    std::vector<std::string> status(n, "ok");
    parallel_for(n, options.threads, [&](std::size_t k) {
        try
        {
            amplitude[k] = scattering_matrix_unchecked(model, m, omega_grid[k]).optical(out, in);
        }
        catch (const SingularSystem &)
        {
            status[k] = "singular";
        }
    });

    std::vector<double> phase(n);
    for (std::size_t k = 0; k < n; ++k)
        phase[k] = std::arg(amplitude[k]);
    if (options.unwrap_phase)
        phase = unwrap_phases(phase);

    table.rows.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double w = omega_grid[k];
        table.rows.push_back({w, w + model.delta, amplitude[k].real(), amplitude[k].imag(),
                              std::norm(amplitude[k]), phase[k], status[k]});
    }
    return table;
}

} // namespace omring
