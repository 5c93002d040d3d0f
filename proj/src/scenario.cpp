#include "qdilate/scenario.hpp"

#include <chrono>
#include <set>

namespace qdilate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::set<std::string>& known_suites() {
  static const std::set<std::string> suites = {"validate", "factorize", "dilate", "gns",
                                               "bridge"};
  return suites;
}

const std::set<std::string>& known_channel_types() {
  static const std::set<std::string> types = {"dft", "random_unitary", "schur", "kraus",
                                              "depolarizing"};
  return types;
}

std::vector<Matrix> pauli_matrices() {
  Matrix id = Matrix::Identity(2, 2), sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  return {id, sx, sy, sz};
}

json block_signature(const MatrixAlgebra& a) {
  json out = json::array();
  for (Index i = 0; i < a.num_blocks(); ++i)
    out.push_back({{"dim", a.block(i).dim}, {"weight", a.block(i).weight}});
  return out;
}

}  // namespace

Scenario scenario_from_json(const json& config) {
  Scenario s;
  try {
    if (!config.is_object() || !config.contains("channel"))
      throw ValidationError("CONFIG_ERROR", "scenario needs a \"channel\" object");
    s.channel_spec = config.at("channel");
    if (!s.channel_spec.is_object() || !s.channel_spec.contains("type") ||
        !known_channel_types().count(s.channel_spec.at("type").get<std::string>()))
      throw ValidationError("CONFIG_ERROR",
                            "channel.type must be one of dft, random_unitary, schur, kraus, "
                            "depolarizing");
    if (config.contains("name")) s.name = config.at("name").get<std::string>();
    if (config.contains("dilation_steps")) s.dilation_steps = config.at("dilation_steps").get<Index>();
    if (config.contains("tolerance")) s.tolerance_override = config.at("tolerance").get<double>();
    if (config.contains("seed")) s.seed = config.at("seed").get<std::uint64_t>();
    if (config.contains("suites")) {
      s.suites.clear();
      for (const auto& name : config.at("suites")) {
        const std::string suite = name.get<std::string>();
        if (!known_suites().count(suite))
          throw ValidationError("CONFIG_ERROR", "unknown suite \"" + suite + "\"");
        s.suites.push_back(suite);
      }
    }
    const bool wants_dilate = std::count(s.suites.begin(), s.suites.end(), "dilate") > 0;
    if (wants_dilate && s.dilation_steps < 1)
      throw ValidationError("CONFIG_ERROR", "dilation_steps must be >= 1 for the dilate suite");
  } catch (const json::exception& e) {
    throw ValidationError("CONFIG_ERROR", e.what());
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json out = {{"name", s.name},
              {"channel", s.channel_spec},
              {"dilation_steps", s.dilation_steps},
              {"suites", s.suites},
              {"seed", s.seed}};
  if (s.tolerance_override) out["tolerance"] = *s.tolerance_override;
  return out;
}

BuiltChannel build_channel(const json& channel_spec) {
  const std::string type = channel_spec.at("type").get<std::string>();
  try {
    if (type == "dft") {
      UnitaryFactorization fact =
          dft_channel(channel_spec.at("n").get<Index>(), channel_spec.at("m").get<Index>());
      Channel ch = fact.channel;
      return BuiltChannel{std::move(fact), std::move(ch)};
    }
    if (type == "random_unitary") {
      std::vector<Matrix> unitaries;
      for (const auto& u : channel_spec.at("unitaries")) unitaries.push_back(matrix_from_json(u));
      const auto probs = channel_spec.at("probs").get<std::vector<double>>();
      UnitaryFactorization fact = random_unitary_channel(unitaries, probs);
      Channel ch = fact.channel;
      return BuiltChannel{std::move(fact), std::move(ch)};
    }
    if (type == "schur") {
      const CorrelationMatrix c(matrix_from_json(channel_spec.at("C")));
      Channel ch = schur_channel(c);
      if (c.is_real()) {
        UnitaryFactorization fact = real_correlation_factorization(c);
        // Keep the factorization's own Kraus set; it matches the stored
        // unitary exactly.
        Channel fch = fact.channel;
        return BuiltChannel{std::move(fact), std::move(fch)};
      }
      if (auto mixture = rank_one_hull_member(c)) {
        UnitaryFactorization fact = random_unitary_channel(mixture->unitaries, mixture->probs);
        Channel fch = fact.channel;
        return BuiltChannel{std::move(fact), std::move(fch)};
      }
      return BuiltChannel{std::nullopt, std::move(ch)};
    }
    if (type == "kraus") return BuiltChannel{std::nullopt, channel_from_json(channel_spec)};
    if (type == "depolarizing") {
      UnitaryFactorization fact = depolarizing_channel(channel_spec.at("n").get<Index>());
      Channel ch = fact.channel;
      return BuiltChannel{std::move(fact), std::move(ch)};
    }
  } catch (const json::exception& e) {
    throw ValidationError("CONFIG_ERROR", std::string("channel spec: ") + e.what());
  }
  throw ValidationError("CONFIG_ERROR", "unknown channel type \"" + type + "\"");
}

json Report::to_json() const {
  json out = {{"scenario", scenario}, {"pass", pass}, {"suites", json::array()}};
  for (const auto& s : suites)
    out["suites"].push_back({{"name", s.name},
                             {"status", s.status},
                             {"max_residual", s.max_residual},
                             {"seconds", s.seconds},
                             {"details", s.details}});
  return out;
}

Report run_scenario(const Scenario& scenario) {
  Report report;
  report.scenario = scenario.name;
  report.pass = true;

  std::optional<BuiltChannel> built;
  std::optional<NDilation> dilation;
  bool factorization_ok = false;
  bool dilation_ok = false;

  auto run_suite = [&](const std::string& name, auto&& body) {
    SuiteResult result;
    result.name = name;
    const auto start = Clock::now();
    try {
      body(result);
    } catch (const ValidationError& e) {
      result.status = "FAIL";
      result.details["error"] = e.what();
      result.details["code"] = e.code();
    } catch (const std::exception& e) {
      result.status = "ERROR";
      result.details["error"] = e.what();
    }
    result.seconds = seconds_since(start);
    if (result.status != "PASS") report.pass = false;
    report.suites.push_back(std::move(result));
  };

  const double override_tol =
      scenario.tolerance_override.value_or(-1.0);
  auto residual_pass = [&](double residual, double built_in_tol) {
    return residual <= (override_tol > 0 ? override_tol : built_in_tol);
  };

  for (const auto& suite : scenario.suites) {
    if (suite == "validate") {
      run_suite("validate", [&](SuiteResult& r) {
        built = build_channel(scenario.channel_spec);
        const ChannelValidation& v = built->channel.validation();
        r.details = {{"unital_residual", v.unital_residual},
                     {"tp_residual", v.tp_residual},
                     {"choi_min_eigenvalue", v.choi_min_eigenvalue},
                     {"kraus_count", built->channel.kraus_count()},
                     {"algebra", block_signature(built->channel.domain())}};
        r.max_residual = std::max(v.unital_residual, v.tp_residual);
        r.status = v.ok() ? "PASS" : "FAIL";
      });
    } else if (suite == "factorize") {
      run_suite("factorize", [&](SuiteResult& r) {
        if (!built) {
          r.status = "SKIPPED";
          r.details["reason"] = "validate did not run or failed";
          return;
        }
        if (!built->factorization) {
          r.status = "UNSUPPORTED";
          r.details["reason"] = "no factorization construction for this channel spec";
          return;
        }
        const OneDilationReport rep = verify_one_dilation(*built->factorization);
        r.max_residual = rep.max_residual;
        r.details = {{"kraus_residual", rep.kraus_residual},
                     {"expectation_residual", rep.expectation_residual},
                     {"reconstruction_residual", rep.reconstruction_residual},
                     {"tolerance", rep.tolerance},
                     {"environment", block_signature(built->factorization->environment)},
                     {"kraus_count", built->factorization->channel.kraus_count()}};
        factorization_ok = residual_pass(rep.max_residual, rep.tolerance);
        r.status = factorization_ok ? "PASS" : "FAIL";
      });
    } else if (suite == "dilate") {
      run_suite("dilate", [&](SuiteResult& r) {
        if (!built || !built->factorization || !factorization_ok) {
          r.status = "SKIPPED";
          r.details["reason"] = "needs a verified factorization";
          return;
        }
        dilation = build_n_dilation(*built->factorization, scenario.dilation_steps);
        const NDilationReport rep = verify_n_dilation(*dilation);

        Rng rng(scenario.seed);
        double ceform_residual = 0.0;
        for (int t = 0; t < 10; ++t) {
          const Matrix x = tensor_concrete(dilation->factors, random_element(dilation->big_algebra, rng));
          ceform_residual = std::max(
              ceform_residual, (phi_n_concrete(*dilation, x) - phi_n_nested_concrete(*dilation, x)).norm());
        }
        const double commute_residual =
            commute_identity_check(built->factorization->environment, built->channel, rng, 10);

        r.max_residual = std::max({rep.max_residual, ceform_residual, commute_residual});
        r.details = {{"N", rep.steps},
                     {"max_residual", rep.max_residual},
                     {"worst_case", {{"basis_index", rep.worst_unit}, {"M", rep.worst_power}}},
                     {"pass", rep.pass},
                     {"dim", dilation->dim},
                     {"tolerance", rep.tolerance},
                     {"ceform_residual", ceform_residual},
                     {"commute_residual", commute_residual}};
        dilation_ok = residual_pass(rep.max_residual, rep.tolerance) &&
                      residual_pass(ceform_residual, 1e-10) &&
                      residual_pass(commute_residual, 1e-10);
        r.status = dilation_ok ? "PASS" : "FAIL";
      });
    } else if (suite == "gns") {
      run_suite("gns", [&](SuiteResult& r) {
        if (!built) {
          r.status = "SKIPPED";
          r.details["reason"] = "validate did not run or failed";
          return;
        }
        const Channel& ch = built->channel;
        const RepContraction rep = representing_matrix(ch);
        Eigen::JacobiSVD<Matrix> svd(rep.matrix);
        const double sigma_max = svd.singularValues().maxCoeff();

        const ChannelClassification cls = classify_channel(ch);
        const MultiplicativeDomain mult = multiplicative_domain(ch);
        const StableDomainReport stable = stable_multiplicative_domain(ch);
        const auto defects = defect_indices(rep.matrix);
        const KernelSelfAdjointness kernel = kernel_selfadjointness_check(ch);

        bool ok = sigma_max <= 1.0 + tol::contraction_slack && cls.predicate_agrees &&
                  stable.converged && kernel.pass;
        double conj_residual = 0.0;
        if (ch.domain().num_blocks() == 1) {
          conj_residual = conjugation_commutant_residual(rep.matrix);
          ok = ok && conj_residual <= 1e-10;
        }
        r.max_residual = std::max(conj_residual, std::max(0.0, sigma_max - 1.0));
        r.details = {{"sigma_max", sigma_max},
                     {"classification", to_string(cls.cls)},
                     {"predicate_agrees", cls.predicate_agrees},
                     {"conjugation_residual", conj_residual},
                     {"mult_dim", mult.dim},
                     {"mult_spectral_dim", mult.spectral_dim},
                     {"mult_angle", mult.subspace_angle},
                     {"stable_dim", stable.dim},
                     {"stable_stabilized_at", stable.stabilized_at},
                     {"stable_converged", stable.converged},
                     {"stable_closed_form_dim", stable.closed_form_dim},
                     {"stable_closed_form_agrees", stable.closed_form_agrees},
                     {"defect_indices", {defects.first, defects.second}},
                     {"kernel_dim", kernel.kernel_dim},
                     {"kernel_selfadjoint", kernel.pass}};
        r.status = ok ? "PASS" : "FAIL";
      });
    } else if (suite == "bridge") {
      run_suite("bridge", [&](SuiteResult& r) {
        if (!built || !built->factorization || !factorization_ok) {
          r.status = "SKIPPED";
          r.details["reason"] = "needs a verified factorization";
          return;
        }
        // The GNS dimension grows as (d_A d_B^N)^2; shrink N to fit the cap.
        const Index da = built->factorization->system.concrete_dim();
        const Index db = built->factorization->environment.concrete_dim();
        Index steps = std::min<Index>(scenario.dilation_steps, 2);
        while (steps > 0) {
          Index dim = da;
          for (Index k = 0; k < steps; ++k) dim *= db;
          if (dim * dim <= default_dimension_cap) break;
          --steps;
        }
        if (steps < 1)
          throw ValidationError("DIMENSION_CAP_EXCEEDED",
                                "bridge GNS dimension exceeds the cap at N = 1");
        const NDilation bridge_dil = build_n_dilation(*built->factorization, steps);
        const BridgeReport rep = bridge_check(bridge_dil);
        r.max_residual = rep.max_residual;
        r.details = {{"N", rep.steps},
                     {"gns_dim", rep.gns_dim},
                     {"unitary_residual", rep.unitary_residual},
                     {"tolerance", rep.tolerance}};
        r.status = residual_pass(rep.max_residual, rep.tolerance) ? "PASS" : "FAIL";
      });
    } else {
      SuiteResult r;
      r.name = suite;
      r.status = "ERROR";
      r.details["error"] = "unknown suite";
      report.pass = false;
      report.suites.push_back(std::move(r));
    }
  }
  return report;
}

std::vector<Scenario> builtin_fixtures() {
  const auto paulis = pauli_matrices();
  auto matrices_json = [](const std::vector<Matrix>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(matrix_to_json(m));
    return out;
  };

  std::vector<Scenario> fixtures;
  auto add = [&](std::string name, json channel, Index steps) {
    Scenario s;
    s.name = std::move(name);
    s.channel_spec = std::move(channel);
    s.dilation_steps = steps;
    fixtures.push_back(std::move(s));
  };

  add("identity", {{"type", "random_unitary"},
                   {"unitaries", matrices_json({Matrix::Identity(2, 2)})},
                   {"probs", {1.0}}},
      3);
  add("depolarizing-swap", {{"type", "depolarizing"}, {"n", 2}}, 3);
  add("depolarizing-pauli", {{"type", "random_unitary"},
                             {"unitaries", matrices_json(paulis)},
                             {"probs", {0.25, 0.25, 0.25, 0.25}}},
      2);
  add("dft-2-2", {{"type", "dft"}, {"n", 2}, {"m", 2}}, 3);
  add("dft-2-3", {{"type", "dft"}, {"n", 2}, {"m", 3}}, 2);
  add("random-unitary-pauli", {{"type", "random_unitary"},
                               {"unitaries", matrices_json(paulis)},
                               {"probs", {0.1, 0.2, 0.3, 0.4}}},
      2);

  Matrix c_real(2, 2);
  c_real << 1.0, 0.5, 0.5, 1.0;
  add("schur-real-2", {{"type", "schur"}, {"C", matrix_to_json(c_real)}}, 2);
  add("schur-dephasing",
      {{"type", "schur"}, {"C", matrix_to_json(Matrix::Identity(2, 2))}}, 2);
  return fixtures;
}

}  // namespace qdilate
