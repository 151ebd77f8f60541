#ifndef BEAMFOLD_REPORT_HPP
#define BEAMFOLD_REPORT_HPP

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "beamfold/continuation.hpp"

namespace beamfold {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr unsigned kSchemaVersion = 1;

// Exit codes shared by all subcommands.
//   0  success, all gating verifications passed
//   2  hypothesis failure without --exploratory, or a model outside the
//      command's domain (infinite radius where a finite one is required)
//   3  trace failure before the fold / tail never reached
//   4  stored-file or schema mismatch
inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitTrace = 3;
inline constexpr int kExitFile = 4;

struct TraceOptions {
  std::string model;
  std::map<std::string, double> params;
  int n = 501;
  std::string mode = "max";  // "max" | "arclength"
  std::filesystem::path out = "out";
  bool exploratory = false;
};

// Root-dir override: BEAMFOLD_SEED_DIR, applied to relative output paths.
std::filesystem::path resolve_output_dir(const std::filesystem::path& out);

// Serialized curve row data; one row per accepted point.
void write_curve_csv(const std::filesystem::path& file, const BifurcationCurve& curve);
void write_solutions_bin(const std::filesystem::path& file, const BifurcationCurve& curve,
                         int n);
void write_plot_script(const std::filesystem::path& file, const BifurcationCurve& curve,
                       const std::string& model);

struct StoredRun {
  unsigned schema = 0;
  std::string model;
  std::map<std::string, double> params;
  int n = 0;
  std::string mode;
  bool exploratory = false;
  std::vector<double> lambdas, ps;
  std::vector<std::vector<double>> solutions;
  double lambda0 = 0.0, p0 = 0.0;
  bool fold_present = false;
  std::string termination;
  std::string bin_digest;
};

// Reads solutions.bin; throws std::runtime_error on any header/size problem.
StoredRun read_solutions_bin(const std::filesystem::path& file);

std::string fnv1a_digest(const std::filesystem::path& file);

// Command drivers behind the CLI; they print to `log` and return exit codes.
int run_trace(const TraceOptions& opt, std::ostream& log);
int run_verify(const std::filesystem::path& dir, const std::string& expected_model,
               std::ostream& log);
int run_endpoint(const TraceOptions& opt, std::ostream& log);
int run_bound(const TraceOptions& opt, const std::filesystem::path& curve_dir,
              std::ostream& log);

}  // namespace beamfold

#endif
