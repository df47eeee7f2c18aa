#ifndef OMRING_FULL_SOLVER_HPP
#define OMRING_FULL_SOLVER_HPP

#include "omring/core_model.hpp"
#include "omring/sweep_table.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string_view>

namespace omring
{

using Matrix6c = Eigen::Matrix<cplx, 6, 6>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Matrix42c = Eigen::Matrix<cplx, 4, 2>;

// Operator ordering of the linear dynamics.
enum Slot : int
{
    slot_b = 0,
    slot_a_r = 1,
    slot_a_l = 2,
    slot_b_dag = 3,
    slot_a_r_dag = 4,
    slot_a_l_dag = 5,
};

// Directed optical channels: waveguide (1 or 2) and propagation direction.
enum class Channel : int
{
    wg1_right = 0,
    wg1_left = 1,
    wg2_right = 2,
    wg2_left = 3,
};

inline constexpr std::array<Channel, 4> all_channels{Channel::wg1_right, Channel::wg1_left,
                                                     Channel::wg2_right, Channel::wg2_left};

std::string_view channel_name(Channel c);
// Accepts the names produced by channel_name; throws InvalidParameters otherwise.
Channel parse_channel(std::string_view name);
int channel_waveguide(Channel c);
bool channel_is_right(Channel c);
// Field coupling sqrt(2 kappa) or sqrt(2 kappa_prime) of the channel's waveguide.
double channel_coupling(const LinearizedModel &model, Channel c);

// Dynamics d/dt v = -M v - inputs for v = (b, a_R, a_L, b^+, a_R^+, a_L^+).
struct CouplingMatrix
{
    Matrix6c m;
};

CouplingMatrix build_coupling_matrix(const LinearizedModel &model);

struct StabilityReport
{
    std::array<cplx, 6> eigenvalues{};
    double margin = 0.0; // min Re(lambda)
    bool stable = false; // every Re(lambda) strictly positive
};

StabilityReport stability_check(const CouplingMatrix &m);

// Scattering at rotating-frame Fourier frequency omega (probe detuning from
// the optical resonance is omega + Delta). Entries are [output][input] over
// the Channel ordering.
struct PortScattering
{
    double omega = 0.0;
    // f_in(omega) -> f_out(omega)
    Matrix4c s_optical;
    // f_in^+(-omega) -> f_out(omega)
    Matrix4c s_conjugate;
    // (xi(omega), xi^+(-omega)) -> f_out(omega), including sqrt(gamma_m)
    Matrix42c s_mech;
    // 1-norm condition estimate of (-M + i omega)
    double condition = 1.0;

    cplx optical(Channel out, Channel in) const
    {
        return s_optical(static_cast<int>(out), static_cast<int>(in));
    }
    cplx conjugate(Channel out, Channel in) const
    {
        return s_conjugate(static_cast<int>(out), static_cast<int>(in));
    }
};

inline constexpr double max_condition_number = 1e12;

// (-M + i omega I)^-1 without stability checks; throws SingularSystem when
// the condition estimate exceeds max_condition_number.
Matrix6c response_matrix(const CouplingMatrix &m, double omega, double *condition = nullptr);

// Throws UnstableModel unless the model is strictly stable and
// SingularSystem for an ill-conditioned solve.
PortScattering scattering_matrix(const LinearizedModel &model, double omega);

// Same, for a model whose stability has already been established.
PortScattering scattering_matrix_unchecked(const LinearizedModel &model,
                                           const CouplingMatrix &m, double omega);

struct SpectrumOptions
{
    bool unwrap_phase = false;
    unsigned threads = 0;
};

// Rows (omega, delta, re, im, abs2, phase, status) for one scattering element.
// Points with a singular solve keep NaN values and a non-"ok" status.
// Throws UnstableModel up front for an unstable model.
SweepTable transmission_spectrum(const LinearizedModel &model, std::span<const double> omega_grid,
                                 Channel in, Channel out, const SpectrumOptions &options = {});

} // namespace omring

#endif
