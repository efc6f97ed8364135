#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "distwit/pipeline.hpp"

using namespace distwit;

namespace {

void add_synth_options(CLI::App* app, SamplerSpec& spec) {
  app->add_option("--n", spec.n, "Number of samples")->check(CLI::PositiveNumber);
  app->add_option("--R", spec.R, "Radius (circle, sphere), core radius (torus)");
  app->add_option("--r", spec.r, "Tube radius (torus), second radius (flat torus)");
  app->add_option("--noise", spec.noise, "Normal offset magnitude");
  app->add_option("--seed", spec.seed, "Sampler seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-only manifold reconstruction with weighted witness complexes"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Reconstruct a complex from a distance matrix or point cloud");
  RunConfig cfg;
  SamplerSpec spec;
  std::string input, cloud, synth_shape, out = "out", off;
  std::size_t landmarks = 0;
  double lambda = 0.0;
  auto* in_opt = run_cmd->add_option("--input", input, "Distance matrix (.bin or .csv)");
  auto* cloud_opt = run_cmd->add_option("--cloud", cloud, "Point cloud CSV");
  auto* synth_opt = run_cmd->add_option("--synth", synth_shape, "circle|sphere2|torus3|flat_torus4|line_segment");
  in_opt->excludes(cloud_opt)->excludes(synth_opt);
  cloud_opt->excludes(synth_opt);
  add_synth_options(run_cmd, spec);
  run_cmd->add_flag("--distance-only", cfg.distance_only, "Drop coordinates after computing distances");
  run_cmd->add_option("--m", cfg.m, "Intrinsic dimension")->required();
  auto* lm_opt = run_cmd->add_option("--landmarks", landmarks, "Number of landmarks");
  auto* la_opt = run_cmd->add_option("--lambda", lambda, "Target covering radius");
  lm_opt->excludes(la_opt);
  run_cmd->add_option("--start", cfg.start, "First landmark");
  run_cmd->add_option("--gamma0", cfg.gamma0, "Thickness threshold");
  run_cmd->add_option("--delta0", cfg.delta0, "Perturbation scale");
  run_cmd->add_option("--alpha0", cfg.alpha0, "Weight amplitude bound");
  run_cmd->add_option("--eta", cfg.eta, "Forbidden interval length over lambda^2 (practical mode)");
  run_cmd->add_option("--cap", cfg.cap, "Neighborhood size N1");
  run_cmd->add_flag("--theoretical", cfg.theoretical, "Use the theoretical constants");
  run_cmd->add_flag("--oracle", cfg.oracle, "Run verification oracles");
  run_cmd->add_flag("--strict-metric", cfg.strict_metric, "Reject inputs violating the triangle inequality");
  run_cmd->add_option("--off", off, "Write the complex as OFF (m <= 2)");
  run_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out, "Output directory");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Write a synthetic point cloud");
  SamplerSpec sspec;
  std::string sshape, sout;
  sample_cmd->add_option("--shape", sshape, "circle|sphere2|torus3|flat_torus4|line_segment")->required();
  add_synth_options(sample_cmd, sspec);
  sample_cmd->add_option("--out", sout, "Output CSV")->required();

  // convert
  auto* convert_cmd = app.add_subcommand("convert", "Point cloud CSV to distance matrix");
  std::string cin_path, cout_path;
  convert_cmd->add_option("--cloud", cin_path, "Point cloud CSV")->required();
  convert_cmd->add_option("--out", cout_path, "Matrix path (.bin or .csv)")->required();

  // complexity
  auto* cx_cmd = app.add_subcommand("complexity", "Scaling table over run reports");
  std::vector<std::string> reports;
  cx_cmd->add_option("reports", reports, "report.json files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      if (!input.empty()) cfg.matrix_path = input;
      if (!cloud.empty()) cfg.cloud_path = cloud;
      if (!synth_shape.empty()) {
        spec.shape = parse_shape(synth_shape);
        cfg.synth = spec;
      }
      if (landmarks) cfg.stop = StopRule::landmarks(landmarks);
      if (*la_opt) cfg.stop = StopRule::covering(lambda);
      if (!off.empty()) cfg.off = off;
      cfg.out = out;
      const RunResult r = run(cfg, std::cerr);
      if (r.exit_code == 0) {
        const auto& c = r.report.at("complex");
        std::cout << "landmarks " << r.net.size() << ", lambda " << r.net.lambda << ", counts " << c.at("counts").dump()
                  << ", euler " << c.at("euler") << ", betti " << c.at("betti_mod2").dump() << ", manifold "
                  << (c.at("manifold").at("pass").get<bool>() ? "pass" : "fail") << '\n';
      }
      return r.exit_code;
    }
    if (*sample_cmd) {
      sspec.shape = parse_shape(sshape);
      const Sample s = sample(sspec);
      save_point_cloud(s.cloud, sout);
      std::cout << "eps_hat " << s.eps_hat << '\n';
      return 0;
    }
    if (*convert_cmd) {
      const DistanceMatrix dm = from_point_cloud(load_point_cloud(cin_path));
      if (std::filesystem::path(cout_path).extension() == ".csv")
        save_distance_matrix_csv(dm, cout_path);
      else
        save_distance_matrix_binary(dm, cout_path);
      return 0;
    }
    if (*cx_cmd) {
      std::vector<ComplexityRow> rows;
      for (const auto& p : reports) {
        std::ifstream f(p);
        if (!f) throw InputError("cli", "cannot read " + p);
        rows.push_back(complexity_row(nlohmann::json::parse(f)));
      }
      std::cout << format_complexity(report_complexity(rows));
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
