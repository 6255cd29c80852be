#ifndef SCHRODER_CLI_HPP
#define SCHRODER_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "schroder/maps.hpp"

namespace schroder::cli {

enum class Command { Density, Measure, Lyapunov, Verify, Ulam, Koenigs };

std::string_view to_string(Command c);

struct RunConfig {
  MapParams map;
  Command command = Command::Density;
  std::vector<std::string> methods;  ///< density: analytic/ulam/histogram; lyapunov: quadrature/birkhoff
  std::vector<std::string> checks;   ///< verify only; empty selects the family defaults
  int grid = 1000;
  int cells = 1024;
  int bins = 256;  ///< histogram bins; must divide cells
  int samples = 64;
  long steps = 1000000;
  long burn_in = 1000;
  std::uint64_t seed = 0;
  int order = 10;
  double fixed_point = 0.0;
  std::optional<double> tolerance;  ///< overrides every per-check default
  std::string output;               ///< empty or "-" writes to stdout
  bool overwrite = false;
};

/// Validates a parsed document; throws Error(Schema) naming the offending key
/// and lets make_map constraint errors through unchanged.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(std::string_view text);
inline RunConfig parse_config(const char* text) { return parse_config(std::string_view(text)); }

/// Sets doc at a dotted path ("map.g2") from a command-line token. The token
/// is read as JSON when it parses, as a plain string otherwise.
void apply_override(nlohmann::json& doc, std::string_view dotted_key, std::string_view value);

/// Result of a run: CSV text plus whether every requested check passed.
struct RunResult {
  std::string csv;
  bool all_passed = true;
  nlohmann::json summary;  ///< per-run diagnostics (L1 distances, iterations)
};

RunResult execute(const RunConfig& config);

/// Executes and writes the CSV to config.output (or `out`); returns the exit
/// status: 0 all checks pass, 1 a check failed, 2 an error (reported on `err`
/// as one JSON line).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Whole front end: argv parsing, config loading, overrides, run.
int main(int argc, char** argv);

/// {"error": kind, "message": what} as a single line.
std::string error_line(std::string_view kind, std::string_view message);

/// Decimal scientific with 15 significant digits.
std::string format_real(double v);

}  // namespace schroder::cli

#endif  // SCHRODER_CLI_HPP
