#ifndef QDILATE_SCENARIO_HPP
#define QDILATE_SCENARIO_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdilate/json_io.hpp"
#include "qdilate/unitary_dilation.hpp"

namespace qdilate {

// One verification scenario: a channel specification, a dilation depth and
// the suites to run.
struct Scenario {
  std::string name = "scenario";
  json channel_spec;                     // exactly one variant, keyed by "type"
  Index dilation_steps = 1;
  std::optional<double> tolerance_override;
  std::vector<std::string> suites = {"validate", "factorize", "dilate", "gns", "bridge"};
  std::uint64_t seed = 1;
};

Scenario scenario_from_json(const json& config);
json scenario_to_json(const Scenario& s);

struct SuiteResult {
  std::string name;
  std::string status;  // PASS, FAIL, SKIPPED, UNSUPPORTED, ERROR
  double max_residual = 0.0;
  double seconds = 0.0;
  json details;
};

struct Report {
  std::string scenario;
  bool pass = false;
  std::vector<SuiteResult> suites;

  json to_json() const;
};

// Runs the requested suites in order validate, factorize, dilate, gns,
// bridge; suites whose prerequisites failed are marked SKIPPED.
Report run_scenario(const Scenario& s);

// Named scenarios covering the stock examples: both depolarizing
// factorizations, DFT blocks, random unitary mixtures, Schur channels.
std::vector<Scenario> builtin_fixtures();

// The channel named by a channel_spec JSON value, plus the factorization
// when that channel type has a canonical one.
struct BuiltChannel {
  std::optional<UnitaryFactorization> factorization;
  Channel channel;
};

BuiltChannel build_channel(const json& channel_spec);

}  // namespace qdilate

#endif  // QDILATE_SCENARIO_HPP
