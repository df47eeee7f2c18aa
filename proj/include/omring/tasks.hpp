#ifndef OMRING_TASKS_HPP
#define OMRING_TASKS_HPP

#include "omring/config.hpp"
#include "omring/sweep_table.hpp"

#include <optional>
#include <string>

namespace omring
{

inline constexpr const char *version_string = "omring 1.0.0";

struct TaskResult
{
    SweepTable table;
    // Set when the task ran but its check failed (verify mismatch).
    std::optional<std::string> failure;
};

struct ResolvedModel
{
    LinearizedModel model;
    std::optional<PumpSteadyState> pump;
};

// Linearized model from either the pump settings or the direct coupling.
ResolvedModel resolve_model(const RunConfig &config);

// Runs config.task. Library errors propagate unchanged.
TaskResult execute(const RunConfig &config);

// 0 success, 2 configuration, 3 unstable model, 4 numerical failure.
int exit_code_for(const std::exception &error);
// "omring: error kind=<kind> exit=<code> message=<text>" on one line.
std::string error_line(const std::exception &error);

} // namespace omring

#endif
