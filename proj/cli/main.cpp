#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "commands.hpp"
#include "cylbem/errors.hpp"
#include "cylbem/io.hpp"

namespace {

using namespace cylbem;
using namespace cylbem::cli;

const std::vector<std::string> kSubcommands = {"spectrum",    "discrete-spectrum",
                                               "bem-validate", "error-sweep",
                                               "fit-scaling", "oracle-gen"};

/// Splices `key = value` pairs from --config into argv right after the
/// subcommand name, so explicit flags (parsed later, last one wins) override.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    }
  }
  if (config.empty()) return args;
  std::size_t pos = 0;
  while (pos < args.size() &&
         std::find(kSubcommands.begin(), kSubcommands.end(), args[pos]) == kSubcommands.end())
    ++pos;
  if (pos == args.size()) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : io::parse_config_file(config)) {
    if (key == "config") continue;
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<long>(pos) + 1, injected.begin(), injected.end());
  return args;
}

std::map<std::string, std::string> option_values(const CLI::App& sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size_max() == 0) {
        value = res.empty() ? "true" : res.back();
      } else if (opt->get_items_expected_max() > 1) {
        for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      } else {
        value = res.back();
      }
    } else {
      value = opt->get_default_str();
    }
    out[name] = value;
  }
  return out;
}

void add_physical(CLI::App* sub, Physical& p) {
  sub->add_option("--ka", p.ka, "dimensionless frequency k*a");
  sub->add_option("--k", p.k, "wavenumber (with --a)");
  sub->add_option("--a", p.a, "cylinder radius");
  sub->add_option("--eta", p.eta, "background impedance");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral error analysis of boundary element discretizations on a circular cylinder",
               "cylbem"};
  app.set_version_flag("--version", std::string("cylbem ") + CYLBEM_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);

  std::string out_dir;
  std::string config;
  bool check = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (default out/<subcommand>)");
    sub->add_option("--config", config, "key = value file; explicit flags override it");
    sub->add_flag("--check", check, "validate acceptance-grade invariants; exit 2 on failure");
  };

  SpectrumArgs spectrum;
  auto* s1 = app.add_subcommand("spectrum", "continuous eigenvalues lambda_q, q = -Q..Q");
  add_physical(s1, spectrum.phys);
  s1->add_option("--ops", spectrum.ops, "operators, e.g. S,D,Dstar,N,I (suffix ~ for k-tilde) or TM-EFIE");
  s1->add_option("--qmax", spectrum.qmax, "largest |q| (default: series order of ka)");
  common(s1);

  DiscreteSpectrumArgs dspec;
  auto* s2 = app.add_subcommand("discrete-spectrum", "aliasing-sum eigenvalues and spectral errors");
  add_physical(s2, dspec.phys);
  s2->add_option("--ops", dspec.ops, "operators or formulations");
  s2->add_option("--N", dspec.N, "number of elements (0: 2 round(2 ka))");
  s2->add_option("--p", dspec.p, "basis order 0 or 1");
  s2->add_option("--smax", dspec.smax, "aliasing sum cap");
  common(s2);

  BemValidateArgs bval;
  auto* s3 = app.add_subcommand("bem-validate", "assembled-matrix eigenvalues against predictions");
  add_physical(s3, bval.phys);
  s3->add_option("--ops", bval.ops, "operators");
  s3->add_option("--N", bval.N, "number of elements (0: 2 round(2 ka))");
  s3->add_option("--p", bval.p, "basis order 0 or 1");
  s3->add_option("--mode", bval.mode, "rotational or full assembly");
  common(s3);

  ErrorSweepArgs sweep;
  auto* s4 = app.add_subcommand("error-sweep", "predicted and BEM-measured current errors over ka");
  s4->add_option("--pol", sweep.pol, "TM, TE or TM,TE");
  s4->add_option("--formulations", sweep.formulations, "EFIE,MFIE,CCFIE subset");
  s4->add_option("--ka", sweep.ka, "range lo:hi");
  s4->add_option("--points", sweep.points, "sweep points per formulation");
  s4->add_option("--measure", sweep.measure, "L2, Hs or Hks");
  s4->add_option("--p", sweep.p, "basis order");
  s4->add_option("--sampling", sweep.sampling, "grid, jittered or off_resonance");
  s4->add_option("--seed", sweep.seed, "seed for jittered sampling");
  s4->add_option("--fit-from", sweep.fit_from, "smallest ka used in slope checks");
  s4->add_option("--mask-radius", sweep.mask_radius, "resonance mask radius in ka");
  s4->add_option("--plot", sweep.plot, "write plot_error_sweep.py (true/false)");
  common(s4);

  FitScalingArgs fit;
  auto* s5 = app.add_subcommand("fit-scaling", "power-law slopes from error-sweep CSV files");
  s5->add_option("--input", fit.inputs, "error_sweep.csv files")->multi_option_policy(
      CLI::MultiOptionPolicy::TakeAll);
  s5->add_option("--fit-from", fit.fit_from, "smallest ka used in the fit");
  s5->add_option("--source", fit.source, "measured or predicted");
  s5->add_flag("--no-mask", fit.no_mask, "keep resonance-flagged points");
  common(s5);

  OracleGenArgs oracle;
  auto* s6 = app.add_subcommand("oracle-gen", "high-precision Bessel/Hankel reference table");
  s6->add_option("--points", oracle.points, "table rows");
  s6->add_option("--qmax", oracle.qmax, "largest order");
  s6->add_option("--zmax", oracle.zmax, "largest |z|");
  s6->add_option("--seed", oracle.seed, "sampling seed");
  s6->add_option("--digits", oracle.digits, "decimal digits carried by the series");
  common(s6);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    RunContext ctx(name, out_dir.empty() ? std::filesystem::path("out") / name
                                         : std::filesystem::path(out_dir),
                   option_values(*sub));
    if (name == "spectrum") run_spectrum(spectrum, ctx, check);
    if (name == "discrete-spectrum") run_discrete_spectrum(dspec, ctx, check);
    if (name == "bem-validate") run_bem_validate(bval, ctx, check);
    if (name == "error-sweep") run_error_sweep(sweep, ctx, check);
    if (name == "fit-scaling") run_fit_scaling(fit, ctx, check);
    if (name == "oracle-gen") run_oracle_gen(oracle, ctx, check);
    ctx.finish();
    return ctx.failed() ? 2 : 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
