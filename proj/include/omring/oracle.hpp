#ifndef OMRING_ORACLE_HPP
#define OMRING_ORACLE_HPP

#include "omring/core_model.hpp"
#include "omring/full_solver.hpp"

#include <array>
#include <cstddef>

namespace omring
{

// Time-domain cross-check of the frequency-domain solver: the mean-field
// equations d/dt v = -M v - sqrt(2 kappa_w) I(t) are integrated with a
// classical probe f_in(t) = A exp(-i omega t) on one channel (and its
// conjugate on the creation slot) until the transient has decayed, and the
// outputs are projected onto exp(-i omega t).

struct Probe
{
    Channel channel = Channel::wg1_right;
    double delta = 0.0; // detuning from resonance; omega = delta - Delta
    cplx amplitude{1.0, 0.0};
};

struct TimeDomainRun
{
    LinearizedModel model;
    Probe probe;
    double duration = 0.0;
    double dt = 0.0;
    // Leading fraction of the run discarded before projecting.
    double transient_fraction = 0.75;
};

// Chooses dt <= 1 / (50 max(omega_m, |Delta|, kappa_t, |omega|)) with an
// integer number of steps per probe period, and a duration of an integer
// number of periods of at least 40 / min(kappa_t, stability margin), so the
// slowest mode has decayed by e^-30 before the projection window opens.
// Unstable models get a fixed duration of 50 / kappa_t.
// Throws InvalidParameters for omega == 0.
TimeDomainRun make_run(const LinearizedModel &model, const Probe &probe);

// Throws InvalidParameters if the run violates the step or duration bounds.
void validate_run(const TimeDomainRun &run);

enum class OracleStatus
{
    settled,
    // amplitudes over the two halves of the window differ by more than
    // 1e-6 max(1, largest |B/A|)
    not_settled,
    diverged,
};

struct OracleResult
{
    OracleStatus status = OracleStatus::settled;
    // B / A for every output channel, indexed by Channel
    std::array<cplx, 4> response{};
    double settle_residual = 0.0;
    double final_norm = 0.0;
    double diverged_at = 0.0;
    std::size_t steps = 0;

    cplx at(Channel c) const { return response[static_cast<std::size_t>(c)]; }
};

inline constexpr double oracle_settle_tolerance = 1e-6;

OracleResult time_domain_response(const TimeDomainRun &run);

} // namespace omring

#endif
