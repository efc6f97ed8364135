#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/netsel.hpp"
#include "distwit/scomplex.hpp"
#include "distwit/synth.hpp"
#include "distwit/weights.hpp"

#include <json.hpp>

namespace distwit {

/// Exactly one of matrix_path, cloud_path, synth is set.
struct RunConfig {
  std::optional<std::filesystem::path> matrix_path;
  std::optional<std::filesystem::path> cloud_path;
  std::optional<SamplerSpec> synth;
  /// Cloud inputs: discard coordinates after computing the distance matrix.
  bool distance_only = false;

  int m = 1;
  StopRule stop = StopRule::landmarks(20);
  PointId start = 0;  // first landmark

  std::optional<double> gamma0;
  std::optional<double> delta0;
  std::optional<double> alpha0;
  std::optional<double> eta;  // eta* (practical) as a multiple of lambda^2
  std::optional<std::size_t> cap;
  bool theoretical = false;
  bool oracle = false;
  bool strict_metric = false;

  std::optional<std::filesystem::path> off;
  std::optional<std::filesystem::path> out;  // complex.jsonl, weights.json, report.json
  unsigned threads = 1;

  void validate() const;
};

struct StageTimes {
  double load = 0.0;
  double net = 0.0;
  double weights = 0.0;
  double witness = 0.0;
  double analytics = 0.0;
};

struct RunResult {
  int exit_code = 0;
  std::string message;
  std::size_t n_points = 0;
  Net net;
  WeightParams params;
  std::optional<Feasibility> feasibility;
  WeightAssignment weights{0};
  WeightLog log;
  SimplicialComplex complex;
  nlohmann::json report;
  StageTimes times;
};

/// Runs ingest, net, weights, witness complex and analytics. Errors surface
/// as exceptions.
RunResult run_pipeline(const RunConfig& config);

/// run_pipeline plus artifacts and exit codes: 0 success, 2 NoFreeWeight or
/// infeasible theoretical parameters, 3 input errors, 1 anything else.
RunResult run(const RunConfig& config, std::ostream& diagnostics);

nlohmann::json weights_json(const RunResult& r);

struct ComplexityRow {
  std::size_t witnesses = 0;
  std::size_t landmarks = 0;
  std::size_t candidates = 0;
  double witness_seconds = 0.0;
  double total_seconds = 0.0;
  std::optional<double> witness_ratio;  // vs the previous row
  std::optional<double> size_ratio;
};

/// Rows sorted by #W; ratios only when there are at least two runs.
std::vector<ComplexityRow> report_complexity(std::vector<ComplexityRow> runs);

ComplexityRow complexity_row(const nlohmann::json& report);
std::string format_complexity(const std::vector<ComplexityRow>& rows);

}  // namespace distwit
