#include "omring/oracle.hpp"

#include "omring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace omring
{
namespace
{

using Vector6c = Eigen::Matrix<cplx, 6, 1>;

constexpr double steps_per_fastest_rate = 50.0;
constexpr double decay_exponent = 40.0;
constexpr std::size_t max_steps = 50'000'000;

double probe_omega(const TimeDomainRun &run) { return run.probe.delta - run.model.delta; }

double step_bound(const LinearizedModel &model, double omega)
{
    const double fastest =
        std::max({model.omega_m, std::abs(model.delta), model.kappa_total(), std::abs(omega)});
    return 1.0 / (steps_per_fastest_rate * fastest);
}

int drive_slot(Channel c) { return channel_is_right(c) ? slot_a_r : slot_a_l; }

} // namespace

TimeDomainRun make_run(const LinearizedModel &model, const Probe &probe)
{
    TimeDomainRun run;
    run.model = model;
    run.probe = probe;
    const double omega = probe_omega(run);
    if (omega == 0.0 || !std::isfinite(omega))
        throw InvalidParameters("time-domain probe needs a non-zero rotating-frame frequency");

    const double period = 2.0 * std::numbers::pi / std::abs(omega);
    const double steps_per_period = std::ceil(period / step_bound(model, omega));
    run.dt = period / steps_per_period;

    const StabilityReport stability = stability_check(build_coupling_matrix(model));
    const double kt = model.kappa_total();
    double wanted;
    if (stability.stable)
        wanted = decay_exponent / std::min(kt, stability.margin);
    else
        wanted = 50.0 / kt;
    // the projection window needs at least 4 whole periods
    const double periods = std::max(std::ceil(wanted / period), 16.0);
    run.duration = periods * period;
    return run;
}

void validate_run(const TimeDomainRun &run)
{
    const double omega = probe_omega(run);
    if (omega == 0.0 || !std::isfinite(omega))
        throw InvalidParameters("time-domain probe needs a non-zero rotating-frame frequency");
    if (!(run.dt > 0.0) || run.dt > step_bound(run.model, omega) * (1.0 + 1e-12))
        throw InvalidParameters("time step exceeds 1 / (50 max(omega_m, |Delta|, kappa_t, |omega|))");
    if (!(run.transient_fraction > 0.0 && run.transient_fraction < 1.0))
        throw InvalidParameters("transient fraction must lie in (0, 1)");

    const StabilityReport stability = stability_check(build_coupling_matrix(run.model));
    const double damping = stability.stable ? std::min(run.model.kappa_total(), stability.margin)
                                            : run.model.kappa_total();
    if (run.duration < 20.0 / damping * (1.0 - 1e-12))
        throw InvalidParameters("run shorter than 20 / min(kappa_t, damping)");
    if (run.duration / run.dt > static_cast<double>(max_steps))
        throw InvalidParameters("time-domain run needs too many steps");
}

OracleResult time_domain_response(const TimeDomainRun &run)
{
    validate_run(run);

    const LinearizedModel &model = run.model;
    const Matrix6c minus_m = -build_coupling_matrix(model).m;
    const double omega = probe_omega(run);
    const double dt = run.dt;
    const std::size_t steps = static_cast<std::size_t>(std::llround(run.duration / dt));
    const double period = 2.0 * std::numbers::pi / std::abs(omega);
    const std::size_t per_period = std::max<std::size_t>(1, std::llround(period / dt));

    // Window: whole periods at the end of the run. Split into two halves of
    // equal whole-period length for the settling check.
    const std::size_t window_periods =
        std::max<std::size_t>(2, static_cast<std::size_t>((1.0 - run.transient_fraction) *
                                                          static_cast<double>(steps / per_period)));
    const std::size_t half_periods = window_periods / 2;
    const std::size_t half_len = half_periods * per_period;
    const std::size_t window_start = steps - 2 * half_len;

    const double coupling = channel_coupling(model, run.probe.channel);
    const cplx a = run.probe.amplitude;
    const int slot = drive_slot(run.probe.channel);
    const cplx i{0.0, 1.0};

    // d/dt v = -M v - coupling * I(t)
    const auto rhs = [&](double t, const Vector6c &v) {
        Vector6c dv = minus_m * v;
        const cplx phase = std::exp(-i * omega * t);
        dv(slot) -= coupling * a * phase;
        dv(slot + 3) -= coupling * std::conj(a) * std::conj(phase);
        return dv;
    };

    const double blowup = 1e10 * (std::abs(a) + 1.0) * (1.0 + coupling) *
                          std::max(1.0, 1.0 / model.kappa_total());

    OracleResult result;
    result.steps = steps;
    std::array<Vector6c, 2> projection{Vector6c::Zero(), Vector6c::Zero()};
    Vector6c v = Vector6c::Zero();
    for (std::size_t k = 0; k < steps; ++k)
    {
        const double t = static_cast<double>(k) * dt;
        if (k >= window_start)
        {
            const std::size_t half = (k - window_start) / half_len;
            projection[half] += v * std::exp(i * omega * t);
        }
        const Vector6c k1 = rhs(t, v);
        const Vector6c k2 = rhs(t + 0.5 * dt, v + 0.5 * dt * k1);
        const Vector6c k3 = rhs(t + 0.5 * dt, v + 0.5 * dt * k2);
        const Vector6c k4 = rhs(t + dt, v + dt * k3);
        v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double norm = v.norm();
        if (!std::isfinite(norm) || norm > blowup)
        {
            result.status = OracleStatus::diverged;
            result.final_norm = norm;
            result.diverged_at = t + dt;
            return result;
        }
    }
    result.final_norm = v.norm();

    std::array<std::array<cplx, 4>, 2> halves{};
    for (int h = 0; h < 2; ++h)
    {
        const Vector6c mean = projection[h] / static_cast<double>(half_len);
        for (Channel out : all_channels)
        {
            const std::size_t o = static_cast<std::size_t>(out);
            cplx b = channel_coupling(model, out) * mean(drive_slot(out));
            if (out == run.probe.channel)
                b += a;
            halves[h][o] = b / a;
        }
    }
    double scale = 0.0;
    double diff = 0.0;
    for (std::size_t o = 0; o < 4; ++o)
    {
        result.response[o] = 0.5 * (halves[0][o] + halves[1][o]);
        scale = std::max(scale, std::abs(result.response[o]));
        diff = std::max(diff, std::abs(halves[0][o] - halves[1][o]));
    }
    // responses are per unit input, so a fully absorbed probe is judged on absolute terms
    result.settle_residual = diff / std::max(scale, 1.0);
    result.status = result.settle_residual > oracle_settle_tolerance ? OracleStatus::not_settled
                                                                      : OracleStatus::settled;
    return result;
}

} // namespace omring
