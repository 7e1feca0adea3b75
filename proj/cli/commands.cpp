#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "bessel_mp.hpp"
#include "cylbem/analysis.hpp"
#include "cylbem/bem.hpp"
#include "cylbem/errors.hpp"
#include "cylbem/validation.hpp"

namespace cylbem::cli {

using spectra::Composite;
using spectra::FormulationId;
using spectra::OperatorId;
using spectra::OperatorKind;
using spectra::Polarization;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

/// Operator ("S", "N~") or formulation ("TM-EFIE").
struct Target {
  bool composite = false;
  OperatorId op;
  FormulationId f;
  std::string name;
};

Target parse_target(const std::string& text) {
  Target t;
  const auto dash = text.find('-');
  if (dash != std::string::npos) {
    t.composite = true;
    t.f = {spectra::parse_composite(text.substr(dash + 1)),
           spectra::parse_polarization(text.substr(0, dash))};
    t.name = spectra::to_string(t.f);
  } else {
    t.op = spectra::parse_operator(text);
    t.name = spectra::to_string(t.op);
  }
  return t;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw UsageError("range must look like lo:hi, got '" + text + "'");
  double lo = 0.0, hi = 0.0;
  try {
    lo = std::stod(parts[0]);
    hi = std::stod(parts[1]);
  } catch (const std::exception&) {
    throw UsageError("range must look like lo:hi, got '" + text + "'");
  }
  if (!(lo > 0.0 && hi > lo)) throw UsageError("range needs 0 < lo < hi");
  return {lo, hi};
}

int resolve_N(int N, double ka) {
  if (N == 0) return analysis::mesh_size(ka);
  if (N < 4 || N % 2 != 0) throw UsageError("N must be even and >= 4");
  return N;
}

}  // namespace

double Physical::resolved_ka() const {
  if (ka > 0.0 && k > 0.0) throw UsageError("give either --ka or --k, not both");
  if (!(a > 0.0) || !(eta > 0.0)) throw UsageError("a and eta must be positive");
  if (ka > 0.0) return ka;
  if (k > 0.0) return k * a;
  throw UsageError("a frequency is required (--ka or --k)");
}

void run_spectrum(const SpectrumArgs& args, RunContext& ctx, bool check) {
  const double ka = args.phys.resolved_ka();
  const int Q = args.qmax >= 0 ? args.qmax : bem::series_order(ka);
  const auto cfg =
      spectra::ProblemConfig::from_ka(ka, 4, 1, args.phys.a, args.phys.eta);
  const spectra::EigenBank bank(cfg, Q);

  io::CsvWriter w(ctx.open("spectrum.csv"));
  w.header({"q", "operator", "re_lambda", "im_lambda"});
  for (const auto& text : split(args.ops, ',')) {
    const Target t = parse_target(text);
    for (int q = -Q; q <= Q; ++q) {
      const auto v = t.composite ? bank.composite(t.f, q) : bank.elementary(t.op, q);
      w << q << t.name << v.real() << v.imag();
      w.end_row();
      if (check) {
        const auto m = t.composite ? bank.composite(t.f, -q) : bank.elementary(t.op, -q);
        if (m != v) ctx.fail(t.name + " differs between q and -q at q=" + std::to_string(q));
      }
    }
  }
  if (check) {
    const int qc = std::max(Q, static_cast<int>(std::ceil(3.0 * ka)));
    const double res = validation::calderon_residual(ka, qc);
    ctx.note(fmt("Calderon residual %.3e over q <= %g", res, qc));
    if (res > 1e-9) ctx.fail(fmt("Calderon residual %.3e exceeds 1e-9", res));
  }
}

void run_discrete_spectrum(const DiscreteSpectrumArgs& args, RunContext& ctx, bool check) {
  const double ka = args.phys.resolved_ka();
  const int N = resolve_N(args.N, ka);
  const auto cfg = spectra::ProblemConfig::from_ka(ka, N, args.p, args.phys.a, args.phys.eta);
  const disc::BasisSpec b{args.p, N};
  const disc::DiscreteSpectrum ds(cfg, b, args.smax);
  std::unique_ptr<disc::DiscreteSpectrum> wide;
  if (check) wide = std::make_unique<disc::DiscreteSpectrum>(cfg, b, 2 * args.smax);

  io::CsvWriter w(ctx.open("discrete_spectrum.csv"));
  w.header({"q", "operator", "re_lambda", "im_lambda", "re_lambda_hat", "im_lambda_hat",
            "re_proj_err", "im_proj_err", "re_alias_err", "im_alias_err", "flags"});
  double worst_trunc = 0.0;
  for (const auto& text : split(args.ops, ',')) {
    const Target t = parse_target(text);
    for (int q = -N / 2; q < N / 2; ++q) {
      const auto r = t.composite ? ds.row(t.f, q) : ds.row(t.op, q);
      w << q << t.name << r.lambda_cont.real() << r.lambda_cont.imag() << r.lambda_disc.real()
        << r.lambda_disc.imag() << r.proj_err.real() << r.proj_err.imag()
        << r.alias_err.real() << r.alias_err.imag() << describe_warnings(r.flags);
      w.end_row();
      if (!check) continue;
      if (r.proj_err.imag() != 0.0 || r.proj_err.real() < -1.0)
        ctx.fail(t.name + " projection error not real and >= -1 at q=" + std::to_string(q));
      const auto r2 = t.composite ? wide->row(t.f, q) : wide->row(t.op, q);
      worst_trunc = std::max(worst_trunc, std::abs(r2.lambda_disc - r.lambda_disc) /
                                              std::abs(r2.lambda_disc));
    }
  }
  if (check) {
    ctx.note(fmt("aliasing truncation change smax -> 2 smax: %.3e", worst_trunc));
    if (worst_trunc > 1e-10) ctx.fail(fmt("aliasing sum not converged (%.3e)", worst_trunc));
  }
}

void run_bem_validate(const BemValidateArgs& args, RunContext& ctx, bool check) {
  const double ka = args.phys.resolved_ka();
  const int N = resolve_N(args.N, ka);
  bem::QuadratureOptions quad;
  if (args.mode == "full") {
    quad.mode = bem::AssemblyMode::Full;
  } else if (args.mode != "rotational") {
    throw UsageError("mode must be rotational or full");
  }

  io::CsvWriter w(ctx.open("bem_validate.csv"));
  w.header({"q", "operator", "re_predicted", "im_predicted", "re_measured", "im_measured",
            "rel_deviation"});
  double worst = 0.0;
  for (const auto& text : split(args.ops, ',')) {
    const OperatorId op = spectra::parse_operator(text);
    if (op.kind == OperatorKind::Hypersingular && args.p == 0) {
      ctx.note("skipping " + spectra::to_string(op) + ": needs p = 1");
      continue;
    }
    const auto rows = validation::bem_spectrum(op, ka, N, args.p, quad);
    for (const auto& r : rows) {
      w << r.q << spectra::to_string(op) << r.predicted.real() << r.predicted.imag()
        << r.measured.real() << r.measured.imag() << r.rel_dev;
      w.end_row();
    }
    const double dev = validation::max_deviation(rows);
    ctx.note(spectra::to_string(op) + fmt(": max relative deviation %.3e", dev));
    worst = std::max(worst, dev);
  }
  if (check && worst > 1e-6) ctx.fail(fmt("max relative deviation %.3e exceeds 1e-6", worst));
}

namespace {

std::vector<std::pair<FormulationId, analysis::ScalingFit>> fit_groups(
    const std::map<std::string, std::vector<analysis::ErrorReport>>& groups, double fit_from,
    bool mask, analysis::FitSource source, RunContext& ctx) {
  std::vector<std::pair<FormulationId, analysis::ScalingFit>> fits;
  for (const auto& [name, reports] : groups) {
    std::vector<analysis::ErrorReport> kept;
    for (const auto& r : reports)
      if (r.ka >= fit_from) kept.push_back(r);
    try {
      const auto fit = analysis::fit_scaling_exponent(kept, mask, source);
      fits.emplace_back(reports.front().formulation, fit);
    } catch (const InsufficientDataError& e) {
      ctx.fail(name + ": " + e.what());
    }
  }
  return fits;
}

void judge(const std::vector<std::pair<FormulationId, analysis::ScalingFit>>& fits,
           RunContext& ctx) {
  for (const auto& v : validation::judge_slopes(fits)) {
    const std::string name = spectra::to_string(v.formulation.pol) + "-" +
                             analysis::equation_name(v.formulation.composite);
    ctx.note(name + ": " + v.detail + (v.pass ? " ok" : " FAILED"));
    if (!v.pass) ctx.fail(name + " " + v.detail);
  }
}

}  // namespace

void run_error_sweep(const ErrorSweepArgs& args, RunContext& ctx, bool check) {
  const auto [lo, hi] = parse_range(args.ka);
  const analysis::Measure m = analysis::parse_measure(args.measure);
  analysis::SweepOptions opt;
  opt.p = args.p;
  opt.sampling = analysis::parse_sampling(args.sampling);
  opt.seed = args.seed;
  opt.mask_radius = args.mask_radius;
  if (args.points < 1) throw UsageError("points must be positive");

  std::vector<FormulationId> fs;
  for (const auto& pol : split(args.pol, ','))
    for (const auto& f : split(args.formulations, ','))
      fs.push_back({spectra::parse_composite(f), spectra::parse_polarization(pol)});

  std::map<std::string, std::vector<analysis::ErrorReport>> groups;
  io::CsvWriter w(ctx.open("error_sweep.csv"));
  w.header({"ka", "N", "formulation", "polarization", "measure", "r_predicted", "r_measured",
            "resonance_flag"});
  for (const auto& f : fs) {
    const auto reports = analysis::frequency_sweep(f, m, lo, hi, args.points, opt);
    for (const auto& r : reports) {
      w << r.ka << r.N << analysis::equation_name(f.composite) << spectra::to_string(f.pol)
        << analysis::to_string(m) << r.r_predicted << r.r_measured
        << (r.resonance_flag ? 1 : 0);
      w.end_row();
    }
    const std::string name =
        spectra::to_string(f.pol) + "-" + analysis::equation_name(f.composite);
    const double closure = validation::max_closure_error(reports);
    ctx.note(name + fmt(": max closure error %.3e off resonance", closure));
    if (check && closure > 0.05) ctx.fail(name + fmt(" closure error %.3e exceeds 5%%", closure));
    groups[name] = reports;
  }
  if (args.plot) ctx.open("plot_error_sweep.py") << error_sweep_plot_script();
  if (check) judge(fit_groups(groups, args.fit_from, true, analysis::FitSource::Measured, ctx), ctx);
}

void run_fit_scaling(const FitScalingArgs& args, RunContext& ctx, bool check) {
  if (args.inputs.empty()) throw UsageError("at least one --input CSV is required");
  const auto source = args.source == "predicted" ? analysis::FitSource::Predicted
                      : args.source == "measured"
                          ? analysis::FitSource::Measured
                          : throw UsageError("source must be measured or predicted");
  std::map<std::string, std::vector<analysis::ErrorReport>> groups;
  std::map<std::string, std::string> measure_of;
  for (const auto& path : args.inputs) {
    const io::CsvTable t = io::read_csv_file(path);
    const auto cka = t.column("ka"), cN = t.column("N"), cf = t.column("formulation"),
               cp = t.column("polarization"), cm = t.column("measure"),
               crp = t.column("r_predicted"), crm = t.column("r_measured"),
               cflag = t.column("resonance_flag");
    for (const auto& row : t.rows) {
      analysis::ErrorReport r;
      try {
        r.ka = std::stod(row[cka]);
        r.N = std::stoi(row[cN]);
        r.r_predicted = std::stod(row[crp]);
        r.r_measured = std::stod(row[crm]);
      } catch (const std::exception&) {
        throw UsageError("bad number in " + path);
      }
      r.formulation = {spectra::parse_composite(row[cf]), spectra::parse_polarization(row[cp])};
      r.measure = analysis::parse_measure(row[cm]);
      r.resonance_flag = row[cflag] == "1";
      const std::string key = row[cp] + "-" + row[cf] + "@" + row[cm];
      groups[key].push_back(r);
      measure_of[key] = row[cm];
    }
  }
  const auto fits = fit_groups(groups, args.fit_from, !args.no_mask, source, ctx);
  io::CsvWriter w(ctx.open("scaling_fit.csv"));
  w.header({"formulation", "polarization", "measure", "slope", "half_width", "intercept",
            "points"});
  for (const auto& [f, fit] : fits) {
    const std::string key = spectra::to_string(f.pol) + "-" +
                            analysis::equation_name(f.composite);
    std::string measure;
    for (const auto& [k, m] : measure_of)
      if (k.rfind(key + "@", 0) == 0) measure = m;
    w << analysis::equation_name(f.composite) << spectra::to_string(f.pol) << measure
      << fit.slope << fit.half_width << fit.intercept << fit.points;
    w.end_row();
  }
  if (check) judge(fits, ctx);
}

void run_oracle_gen(const OracleGenArgs& args, RunContext& ctx, bool check) {
  if (args.points < 1 || args.qmax < 0 || !(args.zmax > 0.1) || args.digits < 17)
    throw UsageError("oracle-gen needs points >= 1, qmax >= 0, zmax > 0.1, digits >= 17");
  const auto rows = oracle::reference_grid(args.points, args.qmax, args.zmax, args.seed,
                                           args.digits);
  io::write_bessel_reference(ctx.open("bessel_reference.csv"), rows);
  if (check) {
    const auto cmp = validation::compare_reference(rows);
    ctx.note(fmt("max relative error J %.3e, H2 %.3e", cmp.max_rel_j, cmp.max_rel_h2));
    if (cmp.max_rel_j > 1e-11) ctx.fail(fmt("J error %.3e exceeds 1e-11", cmp.max_rel_j));
    if (cmp.max_rel_h2 > 1e-10) ctx.fail(fmt("H2 error %.3e exceeds 1e-10", cmp.max_rel_h2));
  }
}

}  // namespace cylbem::cli
