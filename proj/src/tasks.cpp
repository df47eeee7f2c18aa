#include "omring/tasks.hpp"

#include "omring/analysis.hpp"
#include "omring/errors.hpp"
#include "omring/full_solver.hpp"
#include "omring/noise_thermal.hpp"
#include "omring/oracle.hpp"
#include "omring/parallel.hpp"
#include "omring/squeezing.hpp"
#include "omring/toy_analytic.hpp"

#include <cmath>
#include <limits>

namespace omring
{
namespace
{

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double verify_tolerance = 1e-6;

std::string num(double v) { return format_number(v); }

std::string num(cplx v)
{
    if (v.imag() == 0.0)
        return num(v.real());
    return num(v.real()) + (std::signbit(v.imag()) ? " - " : " + ") + num(std::abs(v.imag())) + "i";
}

unsigned threads_for(const RunConfig &config)
{
    return config.threads ? config.threads : default_thread_count();
}

void add_header(SweepTable &t, const RunConfig &config, const ResolvedModel &resolved)
{
    const DeviceParams &d = config.device;
    const LinearizedModel &m = resolved.model;
    t.add_metadata("version", version_string);
    t.add_metadata("task", std::string(task_name(config.task)));
    t.add_metadata("units", config.units == UnitMode::hz ? "hz (rates normalized to kappa)" : "kappa");
    t.add_metadata("convention.fourier", "exp(-i omega t)");
    t.add_metadata("convention.detuning", "delta = omega + Delta (probe detuning from resonance)");
    t.add_metadata("convention.dynamics", "dv/dt = -M v - inputs, v = (b, a_R, a_L, b+, a_R+, a_L+)");
    t.add_metadata("convention.damping", "field decay kappa per port; mechanical field decay gamma_m/2");
    t.add_metadata("bandwidth.threshold", num(config.threshold));
    if (d.rate_unit)
        t.add_metadata("rate_unit_rad_per_s", num(*d.rate_unit));
    if (d.omega_c)
        t.add_metadata("omega_c_rad_per_s", num(*d.omega_c));
    t.add_metadata("device.omega_m", num(d.omega_m));
    t.add_metadata("device.kappa", num(d.kappa));
    t.add_metadata("device.kappa_prime", num(d.kappa_prime));
    t.add_metadata("device.kappa_in", num(d.kappa_in));
    t.add_metadata("device.gamma_m", num(d.gamma_m));
    t.add_metadata("device.g0", num(d.g0));
    t.add_metadata("device.beta", num(d.beta));
    t.add_metadata("device.delta0", num(d.delta0));
    t.add_metadata("model.source", resolved.pump ? "pump steady state" : "direct coupling");
    t.add_metadata("model.g_r", num(m.g_r));
    t.add_metadata("model.g_l", num(m.g_l));
    t.add_metadata("model.delta", num(m.delta));
    for (const std::string &w : validate(d))
        t.add_metadata("warning", w);
}

std::vector<Cell> complex_cells(cplx v) { return {v.real(), v.imag()}; }

// Transmissions on the wg1 diagonal, toy or full.
struct Transmission
{
    cplx t_r{nan, nan};
    cplx t_l{nan, nan};
    std::string status = "ok";
};

std::vector<Transmission> wg1_transmissions(const RunConfig &config, const LinearizedModel &model,
                                            const std::vector<double> &deltas)
{
    std::vector<Transmission> out(deltas.size());
    if (config.solver == SolverKind::toy)
    {
        const ToyParams toy{model.kappa, model.kappa_in, model.gamma_m, std::abs(model.g_r)};
        for (std::size_t k = 0; k < deltas.size(); ++k)
        {
            const ToyTransmission t = toy_transmission(toy, deltas[k]);
            out[k].t_r = t.t_r;
            out[k].t_l = t.t_l;
        }
        return out;
    }
    const CouplingMatrix m = build_coupling_matrix(model);
    const StabilityReport stability = stability_check(m);
    if (!stability.stable)
        throw UnstableModel("linearized dynamics is not strictly stable", stability.margin);
    parallel_for(deltas.size(), threads_for(config), [&](std::size_t k) {
        try
        {
            const PortScattering s = scattering_matrix_unchecked(model, m, deltas[k] - model.delta);
            out[k].t_r = s.optical(Channel::wg1_right, Channel::wg1_right);
            out[k].t_l = s.optical(Channel::wg1_left, Channel::wg1_left);
        }
        catch (const SingularSystem &)
        {
            out[k].status = "singular";
        }
    });
    return out;
}

std::string solver_label(const RunConfig &config)
{
    return config.solver == SolverKind::toy ? "toy (rotating-wave closed form)" : "full";
}

SweepTable run_pump(const RunConfig &config, const ResolvedModel &resolved)
{
    if (!config.pump)
        throw ConfigError("task pump needs a [pump] section");
    if (config.pump->curve)
    {
        const std::vector<double> grid = config.grid.values();
        return pump_imbalance_curve(config.device, grid);
    }
    const PumpSteadyState &s = *resolved.pump;
    SweepTable t;
    t.columns = {"alpha_r_re", "alpha_r_im", "alpha_l_re", "alpha_l_im", "abs_alpha_r2", "abs_alpha_l2",
                 "photon_number", "b_static", "delta", "delta0", "g_r_re", "g_r_im", "g_l_re", "g_l_im",
                 "iterations"};
    const LinearizedModel &m = resolved.model;
    t.rows.push_back({s.alpha_r.real(), s.alpha_r.imag(), s.alpha_l.real(), s.alpha_l.imag(),
                      std::norm(s.alpha_r), std::norm(s.alpha_l), s.photon_number(), s.b_static, s.delta,
                      s.delta0, m.g_r.real(), m.g_r.imag(), m.g_l.real(), m.g_l.imag(),
                      static_cast<double>(s.iterations)});
    return t;
}

SweepTable run_spectrum(const RunConfig &config, const LinearizedModel &model)
{
    const std::vector<double> deltas = config.grid.values();
    if (config.channel_in)
    {
        std::vector<double> omegas(deltas.size());
        for (std::size_t k = 0; k < deltas.size(); ++k)
            omegas[k] = deltas[k] - model.delta;
        return transmission_spectrum(model, omegas, *config.channel_in, *config.channel_out,
                                     SpectrumOptions{config.unwrap_phase, threads_for(config)});
    }
    SweepTable t;
    t.add_metadata("solver", solver_label(config));
    t.columns = {"delta", "abs_tR2", "abs_tL2", "tR_re", "tR_im", "tL_re", "tL_im", "contrast", "status"};
    const std::vector<Transmission> tr = wg1_transmissions(config, model, deltas);
    for (std::size_t k = 0; k < deltas.size(); ++k)
    {
        const double r2 = std::norm(tr[k].t_r);
        const double l2 = std::norm(tr[k].t_l);
        t.rows.push_back({deltas[k], r2, l2, tr[k].t_r.real(), tr[k].t_r.imag(), tr[k].t_l.real(),
                          tr[k].t_l.imag(), r2 - l2, tr[k].status});
    }
    return t;
}

SweepTable run_phase(const RunConfig &config, const LinearizedModel &model)
{
    const std::vector<double> deltas = config.grid.values();
    const std::vector<Transmission> tr = wg1_transmissions(config, model, deltas);
    const std::size_t n = deltas.size();
    std::vector<double> theta_r(n, nan);
    std::vector<double> theta_l(n, nan);
    std::vector<std::string> status(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        status[k] = tr[k].status;
        if (status[k] != "ok")
            continue;
        if (std::abs(tr[k].t_r) == 0.0 || std::abs(tr[k].t_l) == 0.0)
        {
            status[k] = "phase undefined";
            continue;
        }
        theta_r[k] = std::arg(tr[k].t_r);
        theta_l[k] = std::arg(tr[k].t_l);
    }
    std::vector<double> delta_theta(n, nan);
    for (std::size_t k = 0; k < n; ++k)
        if (status[k] == "ok")
            delta_theta[k] = principal_angle(theta_r[k] - theta_l[k]);
    if (config.unwrap_phase)
    {
        theta_r = unwrap_phases(theta_r);
        theta_l = unwrap_phases(theta_l);
    }

    SweepTable t;
    t.add_metadata("solver", solver_label(config));
    t.add_metadata("phase", config.unwrap_phase ? "unwrapped" : "principal value (-pi, pi]");
    t.columns = {"delta", "theta_r", "theta_l", "delta_theta", "abs_tR2", "abs_tL2", "status"};
    for (std::size_t k = 0; k < n; ++k)
        t.rows.push_back({deltas[k], theta_r[k], theta_l[k], delta_theta[k], std::norm(tr[k].t_r),
                          std::norm(tr[k].t_l), status[k]});
    return t;
}

SweepTable run_bandwidth(const RunConfig &config, const LinearizedModel &model)
{
    const BandwidthResult r = isolation_bandwidth(model, config.threshold);
    SweepTable t;
    t.add_metadata("bandwidth.definition", "|t_R|^2 - |t_L|^2 >= threshold around delta = 0");
    t.columns = {"threshold", "width", "lo", "hi", "contrast_at_center", "diagnostic"};
    t.rows.push_back({r.threshold, r.width, r.lo, r.hi, r.contrast_at_center,
                      r.diagnostic.empty() ? std::string("ok") : r.diagnostic});
    return t;
}

SweepTable run_contour(const RunConfig &config, const LinearizedModel &model)
{
    const std::vector<double> betas = config.beta_grid.values();
    const std::vector<double> gs = config.g_grid.values();
    return bandwidth_contour(model, betas, gs, config.threshold, threads_for(config));
}

Band noise_band(const RunConfig &config, const LinearizedModel &model)
{
    if (config.band)
        return *config.band;
    const double half = config.band_half_width.value_or(model.kappa_total());
    return Band::around(model.omega_m, half);
}

SweepTable run_noise(const RunConfig &config, const LinearizedModel &model)
{
    SweepTable t;
    t.add_metadata("noise.flux_units", "photons per internal time unit; density integrated over d omega / 2 pi");
    if (config.noise_density)
    {
        t.columns = {"offset", "omega", "density_exact", "density_approx"};
        for (double x : config.grid.values())
        {
            const double w = model.omega_m + x;
            t.rows.push_back({x, w, noise_spectral_density(model, config.n_th, w, NoiseMethod::exact),
                              noise_spectral_density(model, config.n_th, w, NoiseMethod::approx)});
        }
        return t;
    }
    const NoiseReport r = noise_power(model, config.n_th, noise_band(config, model), config.noise_method,
                                      NoiseUnits{config.device.rate_unit, config.device.omega_c});
    t.columns = {"band_lo",
                 "band_hi",
                 "half_width",
                 "n_th",
                 "method",
                 "flux_exact",
                 "flux_approx",
                 "power_estimate",
                 "n_noise_per_pulse",
                 "quadrature_error",
                 "flux_per_second",
                 "power_estimate_per_second",
                 "power_watts",
                 "power_estimate_watts"};
    t.rows.push_back({r.band.lo, r.band.hi, r.band.half_width(), r.n_th,
                      std::string(r.method == NoiseMethod::exact ? "exact" : "approx"), r.flux_exact,
                      r.flux_approx, r.power_estimate, r.n_noise_per_pulse, r.quadrature_error,
                      r.flux_per_second.value_or(nan), r.power_estimate_per_second.value_or(nan),
                      r.power_watts.value_or(nan), r.power_estimate_watts.value_or(nan)});
    return t;
}

SweepTable run_squeezing(const RunConfig &config, const LinearizedModel &model)
{
    SweepTable t;
    std::string violated;
    if (model.beta != cplx{})
        violated += " beta";
    if (model.g_l != cplx{})
        violated += " g_l";
    if (model.kappa_prime != 0.0)
        violated += " kappa_prime";
    if (model.gamma_m != 0.0)
        violated += " gamma_m";
    if (model.delta != -model.omega_m)
        violated += " delta";
    t.add_metadata("squeezing.assumptions", violated.empty() ? "satisfied" : "violated:" + violated);

    const CouplingMatrix m = build_coupling_matrix(model);
    const bool stable = stability_check(m).stable;
    t.add_metadata("squeezing.full_solver", stable ? "evaluated" : "skipped (unstable model)");

    t.columns = {"delta",       "omega",       "alpha_re",    "alpha_im", "eta_re", "eta_im", "ratio",
                 "full_alpha_re", "full_alpha_im", "full_eta_re", "full_eta_im", "status"};
    for (double delta : config.grid.values())
    {
        const double omega = delta + model.omega_m;
        std::vector<Cell> row{delta, omega};
        std::string status = "ok";
        try
        {
            const PhaseSensitivePair p =
                appendix_coefficients(model.kappa, model.kappa_in, model.g_r, model.omega_m, omega);
            row.insert(row.end(), {p.alpha.real(), p.alpha.imag(), p.eta.real(), p.eta.imag(),
                                   squeezing_ratio(p)});
        }
        catch (const NumericalError &)
        {
            row.insert(row.end(), {nan, nan, nan, nan, nan});
            status = "closed form undefined";
        }
        cplx full_alpha{nan, nan};
        cplx full_eta{nan, nan};
        if (stable)
        {
            try
            {
                const PortScattering s = scattering_matrix_unchecked(model, m, delta - model.delta);
                full_alpha = s.optical(Channel::wg1_right, Channel::wg1_right);
                full_eta = s.conjugate(Channel::wg1_right, Channel::wg1_right);
            }
            catch (const SingularSystem &)
            {
                status = "singular";
            }
        }
        for (const Cell &c : complex_cells(full_alpha))
            row.push_back(c);
        for (const Cell &c : complex_cells(full_eta))
            row.push_back(c);
        row.push_back(status);
        t.rows.push_back(std::move(row));
    }
    return t;
}

SweepTable run_classify(const RunConfig &config, const LinearizedModel &model)
{
    const RegimeClassification c = classify_regime(config.device, model);
    SweepTable t;
    t.add_metadata("classify.rules",
                   "strong iff |G_R| > kappa_t; resolved iff omega_m > 4 kappa_t; port bands 10% of kappa");
    t.columns = {"summary", "coupling", "sideband", "port", "abs_g_r", "kappa_t", "omega_m"};
    t.rows.push_back({c.summary(), to_string(c.coupling), to_string(c.sideband), to_string(c.port),
                      std::abs(model.g_r), model.kappa_total(), model.omega_m});
    return t;
}

TaskResult run_verify(const RunConfig &config, const LinearizedModel &model)
{
    const CouplingMatrix m = build_coupling_matrix(model);
    const StabilityReport stability = stability_check(m);
    const std::vector<double> deltas = config.grid.values();

    struct Sample
    {
        Channel in;
        double delta;
    };
    std::vector<Sample> samples;
    for (Channel in : config.verify_inputs)
        for (double d : deltas)
            samples.push_back({in, d});

    std::vector<OracleResult> oracle(samples.size());
    std::vector<bool> skipped(samples.size(), false);
    parallel_for(samples.size(), threads_for(config), [&](std::size_t k) {
        const Probe probe{samples[k].in, samples[k].delta, cplx{1.0, 0.0}};
        if (probe.delta - model.delta == 0.0)
        {
            skipped[k] = true;
            return;
        }
        oracle[k] = time_domain_response(make_run(model, probe));
    });

    TaskResult result;
    SweepTable &t = result.table;
    t.add_metadata("verify.stable", stability.stable ? "true" : "false");
    t.add_metadata("verify.margin", num(stability.margin));
    t.add_metadata("verify.tolerance", num(verify_tolerance));
    t.add_metadata("verify.error", "|oracle - solver| / max(1, max over outputs |solver|) for the same unit input");
    t.columns = {"in",        "out",       "delta",  "oracle_re", "oracle_im",
                 "solver_re", "solver_im", "rel_error", "status"};
    std::size_t failures = 0;
    for (std::size_t k = 0; k < samples.size(); ++k)
    {
        const Sample &s = samples[k];
        std::array<cplx, 4> solver;
        solver.fill(cplx{nan, nan});
        std::string solver_status = "ok";
        if (stability.stable)
        {
            try
            {
                const PortScattering ps = scattering_matrix_unchecked(model, m, s.delta - model.delta);
                for (Channel out : all_channels)
                    solver[static_cast<std::size_t>(out)] = ps.optical(out, s.in);
            }
            catch (const SingularSystem &)
            {
                solver_status = "singular";
            }
        }
        double scale = 0.0;
        for (const cplx &v : solver)
            scale = std::max(scale, std::abs(v));

        for (Channel out : all_channels)
        {
            const cplx sv = solver[static_cast<std::size_t>(out)];
            const cplx ov = skipped[k] ? cplx{nan, nan} : oracle[k].at(out);
            double err = nan;
            std::string status;
            if (skipped[k])
                status = "skipped (zero probe frequency)";
            else if (!stability.stable)
            {
                status = oracle[k].status == OracleStatus::diverged ? "diverged as expected"
                                                                    : "mismatch: no divergence";
                if (oracle[k].status != OracleStatus::diverged)
                    ++failures;
            }
            else if (oracle[k].status == OracleStatus::diverged)
            {
                status = "mismatch: diverged";
                ++failures;
            }
            else if (solver_status != "ok")
                status = solver_status;
            else
            {
                err = std::abs(ov - sv) / std::max(scale, 1.0);
                if (oracle[k].status == OracleStatus::not_settled)
                {
                    status = "mismatch: not settled";
                    ++failures;
                }
                else if (err < verify_tolerance)
                    status = "ok";
                else
                {
                    status = "mismatch";
                    ++failures;
                }
            }
            if (oracle[k].status == OracleStatus::diverged)
                t.rows.push_back({std::string(channel_name(s.in)), std::string(channel_name(out)), s.delta,
                                  nan, nan, sv.real(), sv.imag(), err, status});
            else
                t.rows.push_back({std::string(channel_name(s.in)), std::string(channel_name(out)), s.delta,
                                  ov.real(), ov.imag(), sv.real(), sv.imag(), err, status});
        }
    }
    t.add_metadata("verify.result", failures == 0 ? "pass" : "fail");
    if (failures)
        result.failure = std::to_string(failures) + " oracle sample(s) disagree with the frequency-domain solver";
    return result;
}

} // namespace

ResolvedModel resolve_model(const RunConfig &config)
{
    ResolvedModel r;
    if (config.pump)
    {
        const PumpSettings &p = *config.pump;
        PumpDrive drive{p.drive, cplx{0.0, 0.0}};
        if (p.cancel_left)
            drive.amplitude_left = cancellation_drive(config.device, p.drive, *p.delta);
        r.pump = p.delta ? steady_state_pump_at(config.device, drive, *p.delta)
                         : steady_state_pump(config.device, drive);
        r.model = linearize(config.device, *r.pump);
    }
    else
    {
        const DirectCoupling c = config.coupling.value_or(DirectCoupling{{}, {}, config.device.delta0});
        r.model = make_model(config.device, c.g_r, c.g_l, c.delta);
    }
    return r;
}

TaskResult execute(const RunConfig &config)
{
    const ResolvedModel resolved = resolve_model(config);
    const LinearizedModel &model = resolved.model;
    TaskResult result;
    switch (config.task)
    {
    case Task::pump: result.table = run_pump(config, resolved); break;
    case Task::spectrum: result.table = run_spectrum(config, model); break;
    case Task::phase: result.table = run_phase(config, model); break;
    case Task::bandwidth: result.table = run_bandwidth(config, model); break;
    case Task::contour: result.table = run_contour(config, model); break;
    case Task::noise: result.table = run_noise(config, model); break;
    case Task::squeezing: result.table = run_squeezing(config, model); break;
    case Task::classify: result.table = run_classify(config, model); break;
    case Task::verify: result = run_verify(config, model); break;
    }
    // Common header first, task-specific metadata after it.
    SweepTable header;
    add_header(header, config, resolved);
    result.table.metadata.insert(result.table.metadata.begin(), header.metadata.begin(),
                                 header.metadata.end());
    return result;
}

int exit_code_for(const std::exception &error)
{
    if (dynamic_cast<const UnstableModel *>(&error))
        return 3;
    if (dynamic_cast<const InvalidParameters *>(&error))
        return 2;
    return 4;
}

std::string error_line(const std::exception &error)
{
    std::string kind = "internal";
    if (dynamic_cast<const ConfigError *>(&error))
        kind = "config";
    else if (dynamic_cast<const InvalidParameters *>(&error))
        kind = "invalid_parameters";
    else if (dynamic_cast<const UnstableModel *>(&error))
        kind = "unstable_model";
    else if (dynamic_cast<const SingularSystem *>(&error))
        kind = "singular_system";
    else if (dynamic_cast<const QuadratureError *>(&error))
        kind = "quadrature";
    else if (dynamic_cast<const PumpSolveError *>(&error))
        kind = "pump_solve";
    else if (dynamic_cast<const NumericalError *>(&error))
        kind = "numerical";

    std::string message = error.what();
    for (char &c : message)
        if (c == '\n' || c == '\r')
            c = ' ';
    std::string line = "omring: error kind=" + kind + " exit=" + std::to_string(exit_code_for(error)) +
                       " message=\"" + message + "\"";
    if (const auto *u = dynamic_cast<const UnstableModel *>(&error))
        line += " margin=" + format_number(u->margin());
    if (const auto *s = dynamic_cast<const SingularSystem *>(&error))
        line += " condition=" + format_number(s->condition());
    return line;
}

} // namespace omring
