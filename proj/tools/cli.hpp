#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rsl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitOutOfRegime = 2;
inline constexpr int kExitUsage = 64;

/// Malformed flags or config; reported with exit code 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One command invocation. Built from a JSON config file overlaid with flags.
struct ExperimentConfig {
  std::string command;
  nlohmann::json model;  ///< model record {"kind", "params"}
  std::optional<double> beta;
  std::vector<double> beta_grid;
  std::optional<double> tau;
  std::vector<double> tau_grid;
  std::optional<std::size_t> n;
  std::vector<std::size_t> n_seq;
  std::optional<double> zeta;
  std::optional<double> eps;
  std::optional<std::string> object;
  std::optional<std::string> metric;
  std::optional<std::string> scheme;
  int dim = 1;
  std::optional<int> cap;
  std::uint64_t seed = 0;
  std::vector<std::string> faults;
  std::optional<double> gamma;
  std::optional<std::size_t> n_ref;
  int resolution = 64;
  std::string input;
  std::string out;
  std::string pgm;

  /// Everything except the output path; echoed into artifacts.
  nlohmann::json to_json() const;
};

/// Strict parse: unknown keys and wrong types raise UsageError naming the key.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Parses argv and runs the command. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run_config(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// CSV tables for a LimitReport (stages.csv, rank_table*.csv) or a
/// ReconstructionResult (curve.csv). Returns the files written.
std::vector<std::filesystem::path> emit_plot_data(const nlohmann::json& report, const std::filesystem::path& dir);

}  // namespace rsl::cli
