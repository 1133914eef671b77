#pragma once

#include <string>
#include <vector>

#include "bifluid/compressible.hpp"
#include "bifluid/harness.hpp"
#include "bifluid/incompressible.hpp"

#include "json.hpp"

namespace bifluid {

// Columnar snapshot of a conserved state: one row per cell, first line names
// the columns (coordinates, conserved fields, reconstructed primitives).
void write_snapshot(const std::string& path, const ConservedField& state,
                    const FluidParams& params);

// Columnar snapshot of a limit state (coordinates, fraction, velocity,
// mixture density).
void write_limit_snapshot(const std::string& path, const LimitState& state,
                          const FluidParams& params);

void write_entropy_csv(const std::string& path,
                       const std::vector<DiagnosticRow>& rows);

void write_sweep_csv(const std::string& path, const SweepReport& report);

void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json describe(const Grid& grid);
nlohmann::json describe(const FluidParams& params);
nlohmann::json describe(const DiagnosticRow& row);
nlohmann::json describe(const SweepRow& row);
nlohmann::json describe(const RunResult& result);
nlohmann::json describe(const LimitRunResult& result);
nlohmann::json describe(const SweepReport& report);
nlohmann::json describe(const InequalityReport& report);

// Creates the directory (and parents) if missing; returns path with a
// trailing separator stripped.
std::string ensure_dir(const std::string& path);

}  // namespace bifluid
