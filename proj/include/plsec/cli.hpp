#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "plsec/fading.hpp"
#include "plsec/secrecy.hpp"

namespace plsec {

// Configuration problem; the message is anchored as "<path>:<line>: <what>"
// whenever a source line is known.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SweepOutput {
  Asr,
  ILim,
  ICon,
  Sop,
  LimitSop,
  PCon,
  Asymptote,
  Mc,
  GaussianBaseline,
};

// Fading channel recipe as written in a config file; built into a
// MixtureGamma at any average SNR so the sweep can move the mean.
struct FadingSpec {
  FadingFamily family = FadingFamily::Nakagami;
  double m = 1.0;
  double q = 0.5;
  double k = 1.0;
  double kappa = 1.0;
  double mu = 1.0;
  double avg_snr_db = 0.0;
  std::string custom_path;

  MixtureGamma build() const;
  MixtureGamma build_at_db(double db) const;
};

// One output curve: a constellation paired with an eavesdropper variant.
struct SweepGroup {
  std::string label;
  int modulation_order = 4;
  FadingSpec eve;
};

struct SweepSpec {
  FadingSpec main;
  std::vector<SweepGroup> groups;
  std::vector<double> points_db;  // strictly increasing
  std::set<SweepOutput> outputs;
  std::optional<double> target_rate;  // bits
  int hermite_order = 20;
  int laguerre_order = 30;
  int legendre_order = 30;
};

struct CliOptions {
  std::uint64_t seed = 1;
  std::uint64_t samples = 100000;
  std::string format = "csv";  // csv | json
  // Shifts the MC target rate only; nonzero values turn `validate` into a
  // negative control that must FAIL.
  double mc_rate_offset = 0.0;
};

// Parses and validates an INI-style config; throws ConfigError.
SweepSpec load_sweep_spec(const std::string& config_path);

// Evaluates the sweep and writes the dataset; returns a process exit code.
int run_sweep(const SweepSpec& spec, const std::string& out_path,
              const CliOptions& opts);

struct ValidationRow {
  std::string group;
  double snr_db = 0.0;
  double quadrature = 0.0;
  double mc_value = 0.0;
  double mc_stderr = 0.0;
  double z = 0.0;
};

struct ValidationReport {
  bool pass = false;
  std::string metric;
  std::vector<ValidationRow> rows;
};

// Quadrature-vs-MC cross-check over the sweep points; the metric is sop
// when the sweep requests any outage output, asr otherwise.
ValidationReport validate(const SweepSpec& spec, const CliOptions& opts);

// Full command-line front end; returns the process exit code
// (0 ok, 1 config error, 2 numerical failure, 3 validation FAIL).
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace plsec
