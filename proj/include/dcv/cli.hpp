#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcv/core.hpp"

namespace dcv::cli {

/// Everything a run needs; serializes to and from JSON without loss.
struct ExperimentConfig {
  std::string command;  ///< "op classify", "del solve", ...
  std::string stencil = "symmetric";
  std::string lagrangian = "harmonic";
  double p = 1.0;
  double q = -1.0;
  double a = 0.0;
  double b = 1.0;
  std::vector<int> M{100};
  std::optional<double> eps;  ///< alternative to a single M; must divide b - a
  std::string fn = "sin";
  std::string shift = "plus";        ///< "plus" | "minus"
  std::string closure = "extrapolated";  ///< "extrapolated" | "windowed"
  std::string mode = "operator";     ///< converge sweep: "operator" | "del"
  double delta = -1.0;               ///< negative: (b - a) / 10
  std::vector<double> alpha{0.0};
  std::vector<double> beta{1.0};
  cplx r{0.5, -0.5};
  cplx s{0.5, 0.5};
  std::optional<cplx> rp, sp;
  int samples = 100;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string stem;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::vector<std::string> commands();

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Exit status of run().
enum Status : int { kOk = 0, kConfigError = 1, kNumericalError = 2 };

/// Dispatches the command. Tables go to <out_dir>/<stem>.csv and summaries to
/// <out_dir>/<stem>.json when out_dir is set (the summary is echoed on out);
/// otherwise tables are printed as CSV and summaries as JSON.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dcv::cli
