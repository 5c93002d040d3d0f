#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>

#include "qdilate/scenario.hpp"

namespace {

using qdilate::json;
using qdilate::Report;
using qdilate::Scenario;

void apply_overrides(Scenario& s, const std::optional<std::uint64_t>& seed,
                     const std::optional<double>& tolerance) {
  if (seed) s.seed = *seed;
  if (tolerance) s.tolerance_override = *tolerance;
}

void print_report(const Report& report) {
  std::cout << "scenario " << report.scenario << ": " << (report.pass ? "PASS" : "FAIL")
            << "\n";
  for (const auto& s : report.suites) {
    std::cout << "  " << s.name << ": " << s.status;
    if (s.status == "PASS" || s.status == "FAIL")
      std::cout << "  (max residual " << s.max_residual << ", " << s.seconds << " s)";
    if (s.details.contains("reason"))
      std::cout << "  [" << s.details["reason"].get<std::string>() << "]";
    if (s.details.contains("error"))
      std::cout << "  [" << s.details["error"].get<std::string>() << "]";
    std::cout << "\n";
  }
}

int write_output(const json& doc, const std::string& path) {
  if (path.empty()) return 0;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 2;
  }
  out << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of matrix dilations of quantum channels"};
  app.require_subcommand(1);

  std::string config_path, out_path, fixture_name;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  bool list_fixtures = false;
  bool parallel = false;

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--seed", seed, "random seed override");
  run->add_option("--tol", tolerance, "tolerance override");
  run->add_flag("--parallel", parallel, "run independent scenarios concurrently");
  run->add_option("--out", out_path, "write the report JSON here");

  auto* fixtures = app.add_subcommand("fixtures", "List or run the builtin fixtures");
  fixtures->add_flag("--list", list_fixtures, "list fixture names");
  fixtures->add_option("--run", fixture_name, "fixture name, or \"all\"");
  fixtures->add_option("--seed", seed, "random seed override");
  fixtures->add_option("--tol", tolerance, "tolerance override");
  fixtures->add_flag("--parallel", parallel, "run independent scenarios concurrently");
  fixtures->add_option("--out", out_path, "write the report JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "CONFIG_ERROR: cannot open " << config_path << "\n";
        return 2;
      }
      json config;
      try {
        in >> config;
      } catch (const json::exception& e) {
        std::cerr << "CONFIG_ERROR: " << e.what() << "\n";
        return 2;
      }
      Scenario scenario = qdilate::scenario_from_json(config);
      apply_overrides(scenario, seed, tolerance);
      const Report report = qdilate::run_scenario(scenario);
      print_report(report);
      if (int rc = write_output(report.to_json(), out_path)) return rc;
      return report.pass ? 0 : 1;
    }

    if (list_fixtures) {
      for (const auto& f : qdilate::builtin_fixtures()) std::cout << f.name << "\n";
      return 0;
    }
    if (fixture_name.empty()) {
      std::cerr << "CONFIG_ERROR: fixtures needs --list or --run\n";
      return 2;
    }

    std::vector<Scenario> selected;
    for (auto& f : qdilate::builtin_fixtures())
      if (fixture_name == "all" || f.name == fixture_name) selected.push_back(f);
    if (selected.empty()) {
      std::cerr << "CONFIG_ERROR: no fixture named " << fixture_name << "\n";
      return 2;
    }
    for (auto& s : selected) apply_overrides(s, seed, tolerance);

    std::vector<Report> reports(selected.size());
    if (parallel && selected.size() > 1) {
      std::vector<std::future<Report>> futures;
      futures.reserve(selected.size());
      for (const auto& s : selected)
        futures.push_back(std::async(std::launch::async, qdilate::run_scenario, s));
      for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
    } else {
      for (size_t i = 0; i < selected.size(); ++i) reports[i] = qdilate::run_scenario(selected[i]);
    }

    bool all_pass = true;
    json doc = json::array();
    for (const auto& r : reports) {
      print_report(r);
      doc.push_back(r.to_json());
      all_pass = all_pass && r.pass;
    }
    if (int rc = write_output(selected.size() == 1 ? doc.front() : doc, out_path)) return rc;
    return all_pass ? 0 : 1;
  } catch (const qdilate::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return std::string(e.code()) == "CONFIG_ERROR" ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
