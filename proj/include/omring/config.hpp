#ifndef OMRING_CONFIG_HPP
#define OMRING_CONFIG_HPP

#include "omring/core_model.hpp"
#include "omring/errors.hpp"
#include "omring/full_solver.hpp"
#include "omring/noise_thermal.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace omring
{

class ConfigError : public InvalidParameters
{
public:
    using InvalidParameters::InvalidParameters;
};

enum class Task
{
    pump,
    spectrum,
    phase,
    bandwidth,
    contour,
    noise,
    squeezing,
    classify,
    verify,
};

enum class UnitMode
{
    kappa, // rates given in units of kappa, no suffixes
    hz,    // rates given in Hz (cycles/s), suffixes Hz/kHz/MHz/GHz/THz allowed
};

enum class OutputFormat
{
    csv,
    json,
};

enum class SolverKind
{
    toy,
    full,
};

std::string_view task_name(Task t);
Task parse_task(std::string_view name);
OutputFormat parse_format(std::string_view name);

struct Grid
{
    double start = -5.0;
    double stop = 5.0;
    std::size_t points = 101;

    std::vector<double> values() const;
};

struct DirectCoupling
{
    cplx g_r{0.0, 0.0};
    cplx g_l{0.0, 0.0};
    double delta = 0.0;
};

struct PumpSettings
{
    cplx drive{1.0, 0.0};
    // Shifted detuning; bare self-consistent mode from device.delta0 when empty.
    std::optional<double> delta;
    bool cancel_left = false;
    bool curve = false;
};

struct RunConfig
{
    Task task = Task::spectrum;
    UnitMode units = UnitMode::kappa;
    DeviceParams device;
    // Exactly one of these determines the linearized model.
    std::optional<PumpSettings> pump;
    std::optional<DirectCoupling> coupling;

    Grid grid;
    SolverKind solver = SolverKind::full;
    std::optional<Channel> channel_in;
    std::optional<Channel> channel_out;
    bool unwrap_phase = false;
    double threshold = 0.5;

    Grid beta_grid{0.0, 8.0, 9};
    Grid g_grid{1.0, 10.0, 10};

    double n_th = 1.0;
    std::optional<Band> band;           // absolute rotating-frame frequencies
    std::optional<double> band_half_width; // centered on omega_m
    NoiseMethod noise_method = NoiseMethod::exact;
    bool noise_density = false;

    std::vector<Channel> verify_inputs{Channel::wg1_right, Channel::wg1_left};

    std::optional<std::string> out_path;
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 0;
};

// Parses "key = value" text with [sections]; '#' and ';' start comments.
// Throws ConfigError with a one-line message on any problem.
RunConfig parse_config(std::istream &in, Task task);
RunConfig load_config(const std::string &path, Task task);

// Parses a number with an optional frequency suffix. In Hz mode the result
// is in Hz; in kappa mode any suffix is rejected.
double parse_quantity(std::string_view text, UnitMode mode);

} // namespace omring

#endif
