// Subcommand orchestration and result persistence for the batch CLI.
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "slabrad/config.hpp"
#include "slabrad/geometry.hpp"
#include "slabrad/greens.hpp"

namespace slabrad {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  Table table;
  std::vector<std::string> failures;  // partial failures (NaN points, failed checks)
  json extra = json::object();        // subcommand-specific metadata
};

const std::vector<std::string>& subcommands();

/// Medium and emitter height described by a resolved config.
Medium medium_from_config(const json& config);
double emitter_height(const json& config);
/// Wavelength inside the host, lambda0 / n.
double host_wavelength(const json& config);
EmitterArray lattice_array(const json& config, LatticeKind kind, int sites, double d_over_lambda);

RunResult run_subcommand(const std::string& name, const json& config);

std::string format_csv(const Table& table);
json table_json(const Table& table);

/// Writes the table and the `<path>.meta.json` sidecar. Returns the exit code
/// (0 success, 2 partial failure).
int write_outputs(const std::string& subcommand, const json& config, const RunResult& result,
                  double wall_time_s);

}  // namespace slabrad
