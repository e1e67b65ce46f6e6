#include "qoc/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qoc {

std::string to_string(Gate gate) {
  return gate == Gate::cnot ? "cnot" : "swap";
}

Gate parse_gate(std::string_view text) {
  if (text == "cnot") return Gate::cnot;
  if (text == "swap") return Gate::swap;
  throw Error("unknown gate '" + std::string(text) + "' (expected cnot or swap)");
}

GateTarget gate_target(Gate gate) {
  return gate == Gate::cnot ? cnot_target() : swap_target();
}

void ExperimentSpec::validate() const {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw Error("T must be positive");
  }
  if (num_slices < 1) throw Error("L must be at least 1");
  if (!(s_granularity > 0.0)) throw Error("s_granularity must be positive");
  if (!(scan_cap > 0.0)) throw Error("scan_cap must be positive");
  if (!std::isfinite(initial.amplitude)) {
    throw Error("seed_amplitude must be finite");
  }
  flow.validate();
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view key, std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("field '" + std::string(key) + "': expected a number, got '" +
                std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view key, std::string_view text) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error("field '" + std::string(key) + "': expected an integer, got '" +
                std::string(text) + "'");
  }
  return value;
}

// Accumulates key/value pairs for one experiment.
class SpecBuilder {
 public:
  void set(std::string_view key, std::string_view value) {
    if (!seen_.emplace(std::string(key), true).second) {
      throw Error("duplicate key '" + std::string(key) + "'");
    }
    if (key == "gate") {
      spec_.gate = parse_gate(value);
    } else if (key == "T") {
      spec_.final_time = parse_real(key, value);
    } else if (key == "L") {
      const auto slices = parse_integer(key, value);
      if (slices < 1 || slices > 1'000'000) {
        throw Error("L must be at least 1");
      }
      spec_.num_slices = static_cast<int>(slices);
    } else if (key == "order") {
      spec_.order = CorrectionOrder::parse(value);
    } else if (key == "s_granularity") {
      spec_.s_granularity = parse_real(key, value);
    } else if (key == "scan_cap") {
      spec_.scan_cap = parse_real(key, value);
    } else if (key == "s_max") {
      spec_.flow.s_max = parse_real(key, value);
    } else if (key == "abs_tol") {
      spec_.flow.abs_tol = parse_real(key, value);
    } else if (key == "rel_tol") {
      spec_.flow.rel_tol = parse_real(key, value);
    } else if (key == "j_stop") {
      spec_.flow.j_stop = parse_real(key, value);
    } else if (key == "h_init") {
      spec_.flow.h_init = parse_real(key, value);
    } else if (key == "h_min") {
      spec_.flow.h_min = parse_real(key, value);
    } else if (key == "max_rhs_evals") {
      const auto evals = parse_integer(key, value);
      if (evals < 1) throw Error("max_rhs_evals must be positive");
      spec_.flow.max_rhs_evals = static_cast<std::size_t>(evals);
    } else if (key == "initial_controls") {
      if (value == "zero") {
        spec_.initial.kind = InitialControls::Kind::zero;
      } else if (value == "sine") {
        spec_.initial.kind = InitialControls::Kind::sine;
      } else {
        throw Error("initial_controls must be 'zero' or 'sine'");
      }
    } else if (key == "seed_amplitude") {
      spec_.initial.amplitude = parse_real(key, value);
    } else {
      seen_.erase(std::string(key));
      throw Error("unknown key '" + std::string(key) + "'");
    }
  }

  bool empty() const { return seen_.empty(); }

  ExperimentSpec finish() {
    for (const char* required : {"gate", "T", "L"}) {
      if (!seen_.count(required)) {
        throw Error(std::string("missing required key '") + required + "'");
      }
    }
    // SWAP does not leave the zero-control critical point, so it defaults to
    // the sine seed.
    if (!seen_.count("initial_controls")) {
      spec_.initial.kind = spec_.gate == Gate::swap
                               ? InitialControls::Kind::sine
                               : InitialControls::Kind::zero;
    }
    spec_.validate();
    return spec_;
  }

 private:
  ExperimentSpec spec_;
  std::map<std::string, bool> seen_;
};

std::vector<ExperimentSpec> parse_block_format(std::string_view text,
                                               std::string_view source) {
  std::vector<ExperimentSpec> specs;
  SpecBuilder builder;
  int block_start = 0;
  auto flush = [&]() {
    if (builder.empty()) return;
    try {
      specs.push_back(builder.finish());
    } catch (const Error& e) {
      throw Error(std::string(source) + ": experiment " +
                  std::to_string(specs.size() + 1) + " (line " +
                  std::to_string(block_start) + "): " + e.what());
    }
    builder = SpecBuilder();
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
    ++line_no;

    line = trim(line);
    if (line.empty() || line == "---") {
      flush();
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
      if (line.empty()) continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(std::string(source) + ":" + std::to_string(line_no) +
                  ": expected 'key: value'");
    }
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    if (builder.empty()) block_start = line_no;
    try {
      builder.set(key, value);
    } catch (const Error& e) {
      throw Error(std::string(source) + ":" + std::to_string(line_no) + ": " +
                  e.what());
    }
  }
  flush();
  return specs;
}

std::vector<ExperimentSpec> parse_json_format(std::string_view text,
                                              std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string(source) + ": " + e.what());
  }
  const nlohmann::json* list = &doc;
  if (doc.is_object()) {
    for (const auto& [key, _] : doc.items()) {
      if (key != "experiments") {
        throw Error(std::string(source) + ": unknown top-level key '" + key + "'");
      }
    }
    if (!doc.contains("experiments")) {
      throw Error(std::string(source) + ": missing 'experiments' array");
    }
    list = &doc["experiments"];
  }
  if (!list->is_array()) {
    throw Error(std::string(source) + ": expected an array of experiments");
  }
  std::vector<ExperimentSpec> specs;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& entry = (*list)[i];
    const std::string where =
        std::string(source) + ": experiment " + std::to_string(i + 1);
    if (!entry.is_object()) throw Error(where + ": expected an object");
    SpecBuilder builder;
    try {
      for (const auto& [key, value] : entry.items()) {
        if (value.is_string()) {
          builder.set(key, value.get<std::string>());
        } else if (value.is_number()) {
          builder.set(key, value.dump());
        } else {
          throw Error("field '" + key + "': expected a number or string");
        }
      }
      specs.push_back(builder.finish());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
  }
  return specs;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::vector<ExperimentSpec> parse_experiments(std::string_view text,
                                              std::string_view source) {
  const auto body = trim(text);
  if (!body.empty() && (body.front() == '{' || body.front() == '[')) {
    return parse_json_format(text, source);
  }
  return parse_block_format(text, source);
}

std::vector<ExperimentSpec> load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiments(buffer.str(), path.string());
}

ControlGrid initial_grid(const ExperimentSpec& spec) {
  const QuantumSystem sys = build_two_spin_benchmark();
  ControlGrid grid(sys.num_controls(), spec.num_slices, spec.final_time);
  if (spec.initial.kind == InitialControls::Kind::zero) return grid;
  AmplitudeMatrix amps(grid.num_controls(), grid.num_slices());
  for (int l = 0; l < grid.num_slices(); ++l) {
    const double t = (l + 0.5) * grid.dt();
    amps.col(l).setConstant(spec.initial.amplitude *
                            std::sin(t / spec.final_time));
  }
  return grid.with_amplitudes(std::move(amps));
}

RunRecord run_experiment(const ExperimentSpec& spec,
                         const FlowObserver& observer) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const QuantumSystem sys = build_two_spin_benchmark();
  const GateTarget target = gate_target(spec.gate);
  const ControlGrid grid0 = initial_grid(spec);

  FlowConfig cfg = spec.flow;
  FlowResult result =
      integrate_flow(sys, grid0, target, spec.order, cfg, observer);
  while (result.stop_reason == StopReason::horizon &&
         cfg.s_max + spec.s_granularity <= spec.scan_cap * (1.0 + 1e-12)) {
    cfg.s_max += spec.s_granularity;
    result = integrate_flow(sys, grid0, target, spec.order, cfg, observer);
  }
  const auto stop = std::chrono::steady_clock::now();

  RunRecord record;
  record.spec = spec;
  record.s_stop = result.s_stop;
  record.s_reported = std::ceil(result.s_stop / spec.s_granularity) *
                      spec.s_granularity;
  record.final_objective = result.final_objective();
  record.rhs_evals = result.rhs_evals;
  record.wall_time = std::chrono::duration<double>(stop - start).count();
  record.stop_reason = result.stop_reason;
  record.max_unitarity_defect = result.max_unitarity_defect;
  return record;
}

std::vector<RunRecord> run_experiments(const std::vector<ExperimentSpec>& specs,
                                       int parallel) {
  std::vector<RunRecord> records(specs.size());
  const std::size_t workers = std::min<std::size_t>(
      std::max(parallel, 1), std::max<std::size_t>(specs.size(), 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      records[i] = run_experiment(specs[i]);
    }
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (std::size_t i = next++; i < specs.size(); i = next++) {
        try {
          records[i] = run_experiment(specs[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::string format_csv(const std::vector<RunRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    const std::string fields[] = {
        to_string(r.spec.gate),
        format_real(r.spec.final_time),
        std::to_string(r.spec.num_slices),
        r.spec.order.to_string(),
        format_real(r.s_reported),
        format_real(r.final_objective),
        std::to_string(r.rhs_evals),
        format_real(r.wall_time),
        to_string(r.stop_reason),
    };
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  }
  return out;
}

std::string format_json(const std::vector<RunRecord>& records) {
  auto rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({
        {"gate", to_string(r.spec.gate)},
        {"T", r.spec.final_time},
        {"L", r.spec.num_slices},
        {"order", r.spec.order.to_string()},
        {"S_reported", r.s_reported},
        {"s_stop", r.s_stop},
        {"final_J", r.final_objective},
        {"rhs_evals", r.rhs_evals},
        {"wall_time_s", r.wall_time},
        {"stop_reason", to_string(r.stop_reason)},
    });
  }
  return rows.dump(2) + "\n";
}

void write_comparison(const std::vector<RunRecord>& records,
                      const std::filesystem::path& csv_path,
                      const std::optional<std::filesystem::path>& json_path) {
  auto write = [](const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << body;
    if (!out) throw Error("failed writing " + path.string());
  };
  write(csv_path, format_csv(records));
  if (json_path) write(*json_path, format_json(records));
}

std::vector<RunRecord> compare_methods(
    const std::vector<ExperimentSpec>& specs,
    const std::filesystem::path& csv_path,
    const std::optional<std::filesystem::path>& json_path, int parallel) {
  auto records = run_experiments(specs, parallel);
  write_comparison(records, csv_path, json_path);
  return records;
}

}  // namespace qoc
