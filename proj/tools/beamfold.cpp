// Command-line front end: trace / verify / endpoint / bound.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamfold/report.hpp"

namespace {

std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
  std::map<std::string, double> out;
  for (const auto& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--param", "expected key=value, got '" + kv + "'");
    try {
      out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--param", "bad numeric value in '" + kv + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamfold: bifurcation curves for the clamped beam u'''' = lambda f(u)"};
  app.require_subcommand(1);

  beamfold::TraceOptions opt;
  std::vector<std::string> params;
  std::string verify_dir, verify_model, bound_curve_dir;

  auto add_model_flags = [&](CLI::App* cmd, bool with_n) {
    cmd->add_option("--model", opt.model, "catalog entry name")->required();
    cmd->add_option("--param", params, "model parameter key=value (repeatable)");
    if (with_n)
      cmd->add_option("--n", opt.n, "grid nodes including endpoints (odd, >= 11)")
          ->check(CLI::Range(11, 100001));
  };

  CLI::App* trace = app.add_subcommand("trace", "trace the bifurcation curve");
  add_model_flags(trace, true);
  trace->add_option("--mode", opt.mode, "continuation mode")
      ->check(CLI::IsMember({"max", "arclength"}))
      ->default_str("max");
  trace->add_option("--out", opt.out, "output directory")->required();
  trace->add_flag("--exploratory", opt.exploratory,
                  "trace even when the hypothesis check fails");

  CLI::App* verify = app.add_subcommand("verify", "re-check a stored run");
  verify->add_option("--in", verify_dir, "directory with curve.csv/manifest/solutions.bin")
      ->required();
  verify->add_option("--model", verify_model, "expected model name (digest check)");

  CLI::App* endpoint = app.add_subcommand("endpoint", "tail convergence to the limit profile");
  add_model_flags(endpoint, true);

  CLI::App* bound = app.add_subcommand("bound", "nonexistence bound r^2 mu1 / (4a)");
  add_model_flags(bound, false);
  bound->add_option("--curve", bound_curve_dir, "compare against a traced run directory");

  CLI11_PARSE(app, argc, argv);

  try {
    opt.params = parse_params(params);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }

  if (trace->parsed()) return beamfold::run_trace(opt, std::cout);
  if (verify->parsed()) return beamfold::run_verify(verify_dir, verify_model, std::cout);
  if (endpoint->parsed()) return beamfold::run_endpoint(opt, std::cout);
  if (bound->parsed()) return beamfold::run_bound(opt, bound_curve_dir, std::cout);
  return 1;
}
