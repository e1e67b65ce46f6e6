#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qoc/flow.hpp"

namespace qoc {

enum class Gate { cnot, swap };

std::string to_string(Gate gate);
Gate parse_gate(std::string_view text);
GateTarget gate_target(Gate gate);

struct InitialControls {
  enum class Kind { zero, sine };
  Kind kind = Kind::zero;
  /// Seed is amplitude * sin(t / T) sampled at slice midpoints.
  double amplitude = 1e-5;
};

/// One cell of a method comparison: benchmark gate, grid and flow settings.
struct ExperimentSpec {
  Gate gate = Gate::cnot;
  double final_time = 1.0;
  int num_slices = 150;
  CorrectionOrder order = CorrectionOrder::series(1);
  double s_granularity = 100.0;
  /// Upper limit for re-running with a longer horizon after non-convergence.
  double scan_cap = 5000.0;
  FlowConfig flow;
  InitialControls initial;

  void validate() const;
};

struct RunRecord {
  ExperimentSpec spec;
  double s_stop = 0.0;
  /// s_stop rounded up to a multiple of s_granularity.
  double s_reported = 0.0;
  double final_objective = 0.0;
  std::size_t rhs_evals = 0;
  double wall_time = 0.0;
  StopReason stop_reason = StopReason::horizon;
  double max_unitarity_defect = 0.0;

  bool converged() const { return stop_reason == StopReason::j_reached; }
};

/// Parses the block config format (see README) or, if the text starts with
/// '{' or '[', the JSON form. `source` names the input in error messages.
std::vector<ExperimentSpec> parse_experiments(std::string_view text,
                                              std::string_view source = "<input>");

std::vector<ExperimentSpec> load_experiment(const std::filesystem::path& path);

/// Controls at s = 0 for the experiment's grid.
ControlGrid initial_grid(const ExperimentSpec& spec);

/// Builds the two-spin benchmark and integrates the flow. If the run stops at
/// the horizon while flow.s_max < scan_cap, it is repeated with s_max raised
/// by s_granularity until it converges or the cap is reached.
RunRecord run_experiment(const ExperimentSpec& spec,
                         const FlowObserver& observer = {});

/// Runs every spec; results keep the input order regardless of `parallel`.
std::vector<RunRecord> run_experiments(const std::vector<ExperimentSpec>& specs,
                                       int parallel = 1);

inline constexpr std::string_view kCsvHeader =
    "gate,T,L,order,S_reported,final_J,rhs_evals,wall_time_s,stop_reason";

std::string format_csv(const std::vector<RunRecord>& records);
std::string format_json(const std::vector<RunRecord>& records);

/// Writes the CSV table and, when requested, its JSON mirror.
void write_comparison(const std::vector<RunRecord>& records,
                      const std::filesystem::path& csv_path,
                      const std::optional<std::filesystem::path>& json_path = {});

/// run_experiments() followed by write_comparison().
std::vector<RunRecord> compare_methods(
    const std::vector<ExperimentSpec>& specs,
    const std::filesystem::path& csv_path,
    const std::optional<std::filesystem::path>& json_path = {},
    int parallel = 1);

}  // namespace qoc
