#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "run_context.hpp"

namespace cylbem::cli {

struct Physical {
  double ka = 0.0;  // 0: derive from k * a
  double k = 0.0;
  double a = 1.0;
  double eta = 1.0;
  double resolved_ka() const;
};

struct SpectrumArgs {
  Physical phys;
  std::string ops = "S,D,Dstar,N";
  int qmax = -1;
};

struct DiscreteSpectrumArgs {
  Physical phys;
  std::string ops = "S,D,Dstar,N,I";
  int N = 0;
  int p = 1;
  int smax = 64;
};

struct BemValidateArgs {
  Physical phys;
  std::string ops = "S,D,Dstar,N,I";
  int N = 0;
  int p = 1;
  std::string mode = "rotational";
};

struct ErrorSweepArgs {
  std::string pol = "TM";
  std::string formulations = "EFIE,MFIE,CCFIE";
  std::string ka = "5:150";
  int points = 40;
  std::string measure = "Hks";
  int p = 1;
  std::string sampling = "off_resonance";
  std::uint64_t seed = 1;
  double fit_from = 15.0;
  double mask_radius = 0.05;
  bool plot = true;
};

struct FitScalingArgs {
  std::vector<std::string> inputs;
  double fit_from = 15.0;
  std::string source = "measured";
  bool no_mask = false;
};

struct OracleGenArgs {
  int points = 100;
  int qmax = 200;
  double zmax = 300.0;
  std::uint64_t seed = 1;
  int digits = 50;
};

void run_spectrum(const SpectrumArgs& args, RunContext& ctx, bool check);
void run_discrete_spectrum(const DiscreteSpectrumArgs& args, RunContext& ctx, bool check);
void run_bem_validate(const BemValidateArgs& args, RunContext& ctx, bool check);
void run_error_sweep(const ErrorSweepArgs& args, RunContext& ctx, bool check);
void run_fit_scaling(const FitScalingArgs& args, RunContext& ctx, bool check);
void run_oracle_gen(const OracleGenArgs& args, RunContext& ctx, bool check);

/// Self-contained matplotlib script for error_sweep.csv.
std::string error_sweep_plot_script();

}  // namespace cylbem::cli
