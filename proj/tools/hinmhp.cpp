// hinmhp command-line driver: synth, build, run, ablate, overlap, report.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <omp.h>

#include "hinmhp/hin_io.hpp"
#include "hinmhp/pipeline.hpp"
#include "hinmhp/synth.hpp"

using namespace hinmhp;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string condition;
  std::string out;
  int jobs = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_condition = true) {
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Seed (overrides config, then HINMHP_SEED)");
  if (with_condition)
    cmd->add_option("--condition", c.condition, "depression or anxiety")
        ->check(CLI::IsMember({"depression", "anxiety"}));
  cmd->add_option("--out", c.out, "Output directory")->required();
  cmd->add_option("--jobs", c.jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
}

json read_json(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("HINMHP_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::string_view(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(std::string("HINMHP_SEED is not an unsigned integer: ") + s);
  }
}

/// Flag, then config key, then HINMHP_SEED.
void resolve_seed(json& j, const Common& c) {
  if (c.seed) j["seed"] = *c.seed;
  else if (!j.contains("seed"))
    if (const auto e = env_seed()) j["seed"] = *e;
}

RunConfig experiment_config(const Common& c, const std::vector<std::string>& methods,
                            const std::vector<std::string>& default_methods) {
  auto j = read_json(c.config);
  resolve_seed(j, c);
  if (!c.condition.empty()) j["condition"] = c.condition;
  if (!methods.empty()) j["methods"] = methods;
  else if (!j.contains("methods")) j["methods"] = default_methods;
  return run_config_from_json(j);
}

void set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

void print_summary(const std::vector<MethodResult>& methods) {
  std::cout << std::left << std::setw(16) << "method";
  for (auto m : kMetrics) std::cout << std::setw(20) << name(m);
  std::cout << '\n' << std::fixed << std::setprecision(3);
  for (const auto& r : methods) {
    std::cout << std::setw(16) << r.name;
    for (const auto& s : r.summary) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << s.mean << " +- " << s.std;
      std::cout << std::setw(20) << cell.str();
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mental-health prediction on heterogeneous information networks"};
  app.require_subcommand(1);

  Common synth_opts;
  int synth_n = 0;
  std::optional<double> dep_rate, anx_rate;
  bool shaped = false;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort (cohort.csv, sms.csv, params.json)");
  add_common(synth, synth_opts, false);
  synth->add_option("--n", synth_n, "Number of individuals");
  synth->add_option("--depression-rate", dep_rate, "Fraction labelled depressed");
  synth->add_option("--anxiety-rate", anx_rate, "Fraction labelled anxious");
  synth->add_flag("--shaped", shaped, "Match the published cohort's node and edge counts exactly");

  Common build_opts;
  std::string build_data;
  auto* build = app.add_subcommand("build", "Build the HIN of a cohort and write hin.json");
  add_common(build, build_opts);
  build->add_option("--data", build_data, "Directory with cohort.csv and sms.csv")->required()->check(CLI::ExistingDirectory);

  Common run_opts;
  std::string run_data;
  std::vector<std::string> run_methods;
  bool run_svg = false;
  auto* run = app.add_subcommand("run", "Cross-validated comparison of methods");
  add_common(run, run_opts);
  run->add_option("--data", run_data, "Directory with cohort.csv and sms.csv")->required()->check(CLI::ExistingDirectory);
  run->add_option("--methods", run_methods, "Methods (overrides config)")->delimiter(',');
  run->add_flag("--svg", run_svg, "Also write metrics.svg");

  Common ablate_opts;
  std::string ablate_data;
  auto* ablate = app.add_subcommand("ablate", "DMF over all 31 side-relation combinations");
  add_common(ablate, ablate_opts);
  ablate->add_option("--data", ablate_data, "Directory with cohort.csv and sms.csv")->required()->check(CLI::ExistingDirectory);

  Common overlap_opts;
  std::string overlap_data;
  std::vector<std::string> overlap_methods;
  auto* overlap = app.add_subcommand("overlap", "Overlap of correctly predicted positives between methods");
  add_common(overlap, overlap_opts);
  overlap->add_option("--data", overlap_data, "Directory with cohort.csv and sms.csv")->required()->check(CLI::ExistingDirectory);
  overlap->add_option("--methods", overlap_methods, "Methods (default dmf,deepwalk,nonnetwork)")->delimiter(',');

  std::string report_in, report_out;
  auto* report = app.add_subcommand("report", "Summarise a run directory and redraw metrics.svg");
  report->add_option("--in", report_in, "Directory written by run")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", report_out, "Where to write metrics.svg (default: --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      auto j = read_json(synth_opts.config);
      resolve_seed(j, synth_opts);
      fs::create_directories(synth_opts.out);
      if (shaped) {
        const std::uint64_t seed = j.value("seed", std::uint64_t{2015});
        const auto data = nethealth_shaped({}, seed);
        write_synthetic(synth_opts.out, data, {{"shaped", true}, {"seed", seed}});
        std::cerr << "wrote " << data.cohort.size() << " individuals to " << synth_opts.out << '\n';
      } else {
        auto p = synth_params_from_json(j);
        if (synth_n > 0) p.n = synth_n;
        if (dep_rate) p.depression_rate = *dep_rate;
        if (anx_rate) p.anxiety_rate = *anx_rate;
        check_params(p);
        const auto data = generate(p);
        write_synthetic(synth_opts.out, data, to_json(p));
        std::cerr << "wrote " << data.cohort.size() << " individuals to " << synth_opts.out << '\n';
      }
    } else if (*build) {
      const auto data = load_dataset(build_data);
      const auto cond = parse_condition(build_opts.condition.empty() ? "depression" : build_opts.condition);
      const auto hin = build_hin(data.cohort, data.sms, *cond);
      fs::create_directories(build_opts.out);
      save_hin(hin, fs::path(build_opts.out) / "hin.json");
      for (auto k : kAllNodeKinds) std::cout << name(k) << ' ' << hin.node_count(k) << '\n';
      for (auto k : kAllEdgeKinds) std::cout << name(k) << ' ' << hin.edges(k).size() << '\n';
    } else if (*run) {
      set_jobs(run_opts.jobs);
      const auto cfg = experiment_config(run_opts, run_methods, {});
      const auto rep = run_experiment(load_dataset(run_data), cfg);
      write_report(run_opts.out, rep, run_svg);
      print_summary(rep.methods);
    } else if (*ablate) {
      set_jobs(ablate_opts.jobs);
      const auto cfg = experiment_config(ablate_opts, {}, {"dmf"});
      const auto rep = run_ablation(load_dataset(ablate_data), cfg);
      write_ablation(ablate_opts.out, rep);
      std::vector<MethodResult> rows;
      for (const auto& r : rep.rows) rows.push_back(r.result);
      print_summary(rows);
    } else if (*overlap) {
      set_jobs(overlap_opts.jobs);
      const auto cfg = experiment_config(overlap_opts, overlap_methods, {"dmf", "deepwalk", "nonnetwork"});
      const auto rep = run_overlap(load_dataset(overlap_data), cfg);
      write_overlap(overlap_opts.out, rep);
      for (const auto& t : rep.tests)
        std::cout << t.method_a << " vs " << t.method_b << ": |O|=" << t.overlap << " of " << t.a << ", " << t.b
                  << " (|S|=" << t.universe << "), p=" << t.p_value << (t.significant ? " *" : "") << '\n';
    } else if (*report) {
      const auto j = read_json((fs::path(report_in) / "report.json").string());
      EvalReport rep;
      rep.config_hash = j.at("config_hash").get<std::string>();
      for (const auto& m : j.at("methods")) {
        MethodResult r;
        r.name = m.at("name").get<std::string>();
        for (std::size_t i = 0; i < kMetrics.size(); ++i) {
          const auto& s = m.at("summary").at(std::string(name(kMetrics[i])));
          r.summary[i] = {s.at("mean").get<double>(), s.at("std").get<double>()};
        }
        rep.methods.push_back(std::move(r));
      }
      const fs::path out = report_out.empty() ? fs::path(report_in) : fs::path(report_out);
      fs::create_directories(out);
      std::ofstream(out / "metrics.svg", std::ios::binary) << metrics_svg(rep);
      print_summary(rep.methods);
      for (const auto& t : j.at("tests"))
        std::cout << t.at("method_a").get<std::string>() << " vs " << t.at("method_b").get<std::string>() << " ["
                  << t.at("metric").get<std::string>() << "] p_adj=" << t.at("p_adj").get<double>() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "hinmhp: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
