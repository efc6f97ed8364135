#include "distwit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "distwit/protect_oracle.hpp"
#include "distwit/witness.hpp"

namespace distwit {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int log_level() {
  const char* v = std::getenv("DISTWIT_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

void note(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[distwit] " << msg << '\n';
}

MatrixFormat guess_format(const std::filesystem::path& p) {
  return p.extension() == ".csv" ? MatrixFormat::csv : MatrixFormat::binary;
}

json counts_json(const SimplicialComplex& k) {
  json c = json::array();
  for (int d = 0; d <= k.max_dim(); ++d) c.push_back(k.count(d));
  return c;
}

json input_json(const RunConfig& c) {
  json in;
  if (c.matrix_path) in = {{"kind", "matrix"}, {"path", c.matrix_path->string()}};
  if (c.cloud_path) in = {{"kind", "cloud"}, {"path", c.cloud_path->string()}};
  if (c.synth)
    in = {{"kind", "synth"},    {"shape", to_string(c.synth->shape)}, {"n", c.synth->n},
          {"R", c.synth->R},    {"r", c.synth->r},                    {"noise", c.synth->noise},
          {"seed", c.synth->seed}};
  in["distance_only"] = c.distance_only;
  return in;
}

WeightParams resolve_params(const RunConfig& c, double lambda) {
  WeightParams p = practical_params(c.m, lambda);
  if (c.gamma0) p.gamma0 = *c.gamma0;
  if (c.delta0) p.delta0 = *c.delta0;
  if (c.alpha0) p.alpha0 = *c.alpha0;
  p.theoretical = c.theoretical;
  p.threads = std::max(1u, c.threads);
  if (c.theoretical) {
    p.cap = c.cap.value_or(default_cap(c.m, CapMode::theoretical).cap);
    p.eta = eta(p.gamma0, p.delta0, c.m, lambda, EtaMode::theoretical);
  } else {
    p.cap = c.cap.value_or(default_cap(c.m, CapMode::practical).cap);
    p.eta = eta(p.gamma0, p.delta0, c.m, lambda, EtaMode::practical, c.eta.value_or(0.01));
  }
  p.validate();
  return p;
}

json params_json(const WeightParams& p) {
  return {{"m", p.m},         {"gamma0", p.gamma0}, {"delta0", p.delta0},           {"alpha0", p.alpha0},
          {"alpha_tilde", p.alpha_tilde()},         {"eta", p.eta},                 {"cap", p.cap},
          {"theoretical", p.theoretical}};
}

json feasibility_json(const Feasibility& f) {
  return {{"pass", f.pass}, {"lhs", f.lhs}, {"rhs", f.rhs}, {"n_bound", f.n_bound}, {"slack", f.slack}};
}

json log_json(const WeightLog& log) {
  return {{"eta", log.eta},
          {"total_candidates", log.total_candidates},
          {"measure_bound_violations", log.measure_bound_violations},
          {"theoretical_measure_violations", log.theoretical_measure_violations},
          {"altitude_bound_violations", log.altitude_bound_violations},
          {"slivers_checked", log.slivers_checked},
          {"degenerate_skipped", log.degenerate_skipped},
          {"relative_amplitude", log.relative_amplitude},
          {"no_free_weight", 0}};
}

json topology_json(const SimplicialComplex& k, int m) {
  json t;
  t["counts"] = counts_json(k);
  t["euler"] = euler_characteristic(k);
  t["betti_mod2"] = betti_mod2(k, m);
  t["components"] = connected_components(k);
  t["over_dimension"] = k.over_dimension;
  const ManifoldReport mr = closed_manifold_check(k, m);
  t["manifold"] = {{"pass", mr.pass()}, {"pure", mr.pure}, {"boundary2", mr.boundary2}, {"problems", mr.problems}};
  if (mr.links) t["manifold"]["links"] = *mr.links;
  return t;
}

json oracle_json(const RunConfig& c, const std::optional<PointCloud>& cloud, const DistanceMatrix& dm,
                 const RunResult& r) {
  json o;
  const TriangleReport tri = validate_triangle(dm, 20000, 1e-9, 0);
  o["triangle"] = {{"checked", tri.triples_checked}, {"violations", tri.violations.size()}};
  const StabilityReport st = stability_audit(dm, r.net, r.weights, r.params, std::min<std::size_t>(r.net.size(), 10), 16);
  o["stability"] = {{"landmarks", st.landmarks_checked},
                    {"simplices", st.simplices_checked},
                    {"findings", st.findings.size()}};
  if (cloud && cloud->dim() <= 3 && r.net.size() <= kOracleMaxPoints && r.net.size() > cloud->dim()) {
    try {
      const PointCloud pts = cloud->subset(r.net.landmark_ids);
      std::vector<double> local;
      for (PointId p : r.net.landmark_ids) local.push_back(r.weights.w2(p));
      const SimplicialComplex del = brute_delaunay(pts, local);
      std::size_t outside = 0;
      const auto ord = r.net.ordinal_map(dm.size());
      for (int d = 0; d <= r.complex.max_dim(); ++d)
        for (const Simplex& s : r.complex.simplices(d)) {
          Simplex mapped;
          for (PointId v : s) mapped.push_back(ord[static_cast<std::size_t>(v)]);
          std::sort(mapped.begin(), mapped.end());
          if (!del.contains(mapped)) ++outside;
        }
      o["delaunay_inclusion"] = {{"violations", outside}};
      const AmbientStabilityReport amb = stability_audit_ambient(*cloud, dm, r.net, r.weights, r.params,
                                                                 std::min<std::size_t>(r.net.size(), 10), 8);
      o["ambient_stability"] = {{"triangulations", amb.triangulations}, {"findings", amb.findings.size()}};
    } catch (const OracleDegeneracy& e) {
      o["delaunay_inclusion"] = {{"skipped", e.what()}};
    }
  }
  (void)c;
  return o;
}

}  // namespace

void RunConfig::validate() const {
  const int inputs = int(matrix_path.has_value()) + int(cloud_path.has_value()) + int(synth.has_value());
  if (inputs != 1) throw InputError("cli", "exactly one input (matrix, cloud or synth) is required");
  if (m < 1) throw InputError("cli", "m must be >= 1");
  if (!stop.count && !stop.radius) throw InputError("cli", "a landmark stop rule is required");
  if (stop.count && *stop.count < 2) throw InputError("cli", "at least two landmarks are required");
  if (threads < 1) throw InputError("cli", "threads must be >= 1");
  if (synth) synth->validate();
}

RunResult run_pipeline(const RunConfig& config) {
  config.validate();
  RunResult r;
  auto t0 = Clock::now();

  std::optional<PointCloud> cloud;
  DistanceMatrix dm;
  if (config.matrix_path) {
    if (!std::filesystem::exists(*config.matrix_path))
      throw InputError("dmatrix", "no such file " + config.matrix_path->string());
    dm = load_distance_matrix(*config.matrix_path, guess_format(*config.matrix_path));
  } else {
    if (config.cloud_path) {
      if (!std::filesystem::exists(*config.cloud_path))
        throw InputError("dmatrix", "no such file " + config.cloud_path->string());
      cloud = load_point_cloud(*config.cloud_path);
    } else {
      cloud = sample(*config.synth).cloud;
    }
    dm = from_point_cloud(*cloud);
    if (config.distance_only) cloud.reset();
  }
  r.n_points = dm.size();
  if (config.strict_metric) {
    const TriangleReport tri = dm.size() <= 500 ? validate_triangle_exhaustive(dm, 1e-9)
                                                : validate_triangle(dm, 200000, 1e-9, 0);
    if (!tri.pass())
      throw InputError("dmatrix", "triangle inequality violated in " + std::to_string(tri.violations.size()) +
                                      " of " + std::to_string(tri.triples_checked) + " triples");
  }
  r.times.load = seconds_since(t0);
  note(1, "loaded " + std::to_string(dm.size()) + " points");

  t0 = Clock::now();
  if (config.start < 0 || static_cast<std::size_t>(config.start) >= dm.size())
    throw InputError("netsel", "start point out of range");
  r.net = farthest_point_sample(dm, config.start, config.stop);
  if (r.net.size() < 2) throw InputError("netsel", "fewer than two landmarks");
  r.times.net = seconds_since(t0);
  note(1, std::to_string(r.net.size()) + " landmarks, lambda " + std::to_string(r.net.lambda));

  r.params = resolve_params(config, r.net.lambda);
  r.report["input"] = input_json(config);
  r.report["n_points"] = r.n_points;
  r.report["m"] = config.m;
  r.report["landmarks"] = r.net.size();
  r.report["lambda"] = r.net.lambda;
  r.report["params"] = params_json(r.params);
  if (config.theoretical) {
    r.feasibility = feasibility_check(r.params.gamma0, r.params.delta0, r.params.alpha_tilde(), config.m,
                                      static_cast<double>(r.params.cap));
    r.report["feasibility"] = feasibility_json(*r.feasibility);
    if (!r.feasibility->pass) {
      r.exit_code = 2;
      r.message = "infeasible theoretical parameters";
      return r;
    }
  }

  t0 = Clock::now();
  std::tie(r.weights, r.log) = assign_weights(dm, r.net, r.params);
  r.times.weights = seconds_since(t0);
  note(1, std::to_string(r.log.total_candidates) + " candidate slivers");

  t0 = Clock::now();
  r.complex = build_witness_complex(dm, r.net, r.weights, config.m, r.params.threads);
  r.times.witness = seconds_since(t0);
  note(1, "witness complex with " + std::to_string(r.complex.total()) + " simplices");

  t0 = Clock::now();
  r.report["weights"] = log_json(r.log);
  r.report["complex"] = topology_json(r.complex, config.m);
  r.report["sample_spacing"] = estimate_sample_spacing(r.net, dm);
  if (config.oracle) r.report["oracle"] = oracle_json(config, cloud, dm, r);
  if (config.off) export_off(r.complex, config.m, cloud, &dm, *config.off);
  r.times.analytics = seconds_since(t0);

  r.report["complexity"] = {{"witnesses", r.net.witness_ids.size()},
                            {"landmarks", r.net.size()},
                            {"candidates", r.log.total_candidates},
                            {"witness_seconds", r.times.witness},
                            {"total_seconds", r.times.load + r.times.net + r.times.weights + r.times.witness +
                                                  r.times.analytics}};
  r.report["timings"] = {{"load", r.times.load},
                         {"net", r.times.net},
                         {"weights", r.times.weights},
                         {"witness", r.times.witness},
                         {"analytics", r.times.analytics}};
  return r;
}

json weights_json(const RunResult& r) {
  json marks = json::array();
  for (const auto& rec : r.log.records)
    marks.push_back({{"id", rec.landmark},
                     {"w2", rec.w2},
                     {"cap", rec.cap},
                     {"intervals", rec.intervals},
                     {"forbidden_measure", rec.forbidden_measure},
                     {"free_fraction", rec.free_fraction}});
  return {{"eta", r.log.eta},
          {"relative_amplitude", r.log.relative_amplitude},
          {"net", {{"landmarks", r.net.landmark_ids}, {"lambda", r.net.lambda}, {"nearest", r.net.nearest_dist}}},
          {"landmarks", marks}};
}

RunResult run(const RunConfig& config, std::ostream& diagnostics) {
  RunResult r;
  auto write_report = [&] {
    if (!config.out) return;
    std::filesystem::create_directories(*config.out);
    std::ofstream(*config.out / "report.json") << std::setw(2) << r.report << '\n';
  };
  try {
    r = run_pipeline(config);
    if (r.exit_code == 2) {
      diagnostics << "cli: " << r.message << '\n';
      if (r.feasibility) diagnostics << feasibility_json(*r.feasibility).dump() << '\n';
      write_report();
      return r;
    }
    if (config.out) {
      std::filesystem::create_directories(*config.out);
      std::ofstream c(*config.out / "complex.jsonl", std::ios::binary);
      write_jsonl(r.complex, c);
      std::ofstream(*config.out / "weights.json") << std::setw(2) << weights_json(r) << '\n';
      write_report();
    }
  } catch (const NoFreeWeight& e) {
    r.exit_code = 2;
    r.message = e.what();
    r.report["error"] = {{"module", e.module()}, {"message", r.message}, {"landmark", e.landmark()}};
    diagnostics << r.message << '\n';
    write_report();
  } catch (const InputError& e) {
    r.exit_code = 3;
    r.message = e.what();
    diagnostics << r.message << '\n';
  } catch (const std::exception& e) {
    r.exit_code = 1;
    r.message = e.what();
    diagnostics << r.message << '\n';
  }
  return r;
}

std::vector<ComplexityRow> report_complexity(std::vector<ComplexityRow> runs) {
  std::stable_sort(runs.begin(), runs.end(),
                   [](const ComplexityRow& a, const ComplexityRow& b) { return a.witnesses < b.witnesses; });
  for (std::size_t i = 1; i < runs.size(); ++i) {
    runs[i].size_ratio = static_cast<double>(runs[i].witnesses) / static_cast<double>(runs[i - 1].witnesses);
    runs[i].witness_ratio = runs[i].witness_seconds / std::max(runs[i - 1].witness_seconds, 1e-12);
  }
  return runs;
}

ComplexityRow complexity_row(const json& report) {
  if (!report.contains("complexity")) throw InputError("cli", "report has no complexity section (failed run?)");
  const json& c = report.at("complexity");
  ComplexityRow row;
  row.witnesses = c.at("witnesses").get<std::size_t>();
  row.landmarks = c.at("landmarks").get<std::size_t>();
  row.candidates = c.at("candidates").get<std::size_t>();
  row.witness_seconds = c.at("witness_seconds").get<double>();
  row.total_seconds = c.at("total_seconds").get<double>();
  return row;
}

std::string format_complexity(const std::vector<ComplexityRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "#W" << std::setw(8) << "#L" << std::setw(12) << "candidates" << std::setw(14)
      << "witness_s" << std::setw(12) << "total_s" << std::setw(10) << "W_ratio" << "time_ratio\n";
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::setw(10) << r.witnesses << std::setw(8) << r.landmarks << std::setw(12) << r.candidates
        << std::setw(14) << std::setprecision(6) << r.witness_seconds << std::setw(12) << r.total_seconds;
    if (r.size_ratio) out << std::setw(10) << std::setprecision(2) << *r.size_ratio << std::setprecision(2)
                          << *r.witness_ratio;
    out << '\n';
  }
  return out.str();
}

}  // namespace distwit
