#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "detsing/field.hpp"
#include "detsing/ring.hpp"

namespace detsing {

enum ExitCode : int { ExitPass = 0, ExitFail = 1, ExitBadParameters = 2, ExitResourceLimit = 3 };

/// One value of a replayed worked example. Polynomial values carry their ring
/// so golden strings can be compared after parsing.
struct ExampleValue {
  std::string example;
  std::string key;
  nlohmann::json value;
  RingPtr ring;
};

enum class ExampleKinds { All, Symmetric, Skew };

/// Recomputes the worked examples over `field`. Throws CharTwoForbidden when
/// skew examples are requested in characteristic 2.
std::vector<ExampleValue> replay_examples(const CoefficientField& field, ExampleKinds kinds = ExampleKinds::All);

/// Differences between replayed values and the golden file layout
/// {"examples": {name: {key: value}}}; empty when everything matches.
std::vector<std::string> diff_examples(const std::vector<ExampleValue>& actual, const nlohmann::json& golden,
                                       ExampleKinds kinds = ExampleKinds::All);

/// data/examples.json next to the sources, unless overridden.
std::filesystem::path default_examples_path();

/// Entry point of the detsing tool; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace detsing
