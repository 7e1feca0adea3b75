#include "cylbem/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "cylbem/errors.hpp"
#include "cylbem/specfun.hpp"

namespace cylbem::analysis {

namespace {

using spectra::OperatorKind;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

FormulationId with(FormulationId f, Composite c) {
  f.composite = c;
  return f;
}

// Discrete and continuous composite eigenvalues needed for one formulation,
// memoized over the wrapped index.
class EigCache {
 public:
  EigCache(const DiscreteSpectrum& ds, FormulationId f) : ds_(ds), f_(f), N_(ds.N()) {
    disc_.assign(N_ / 2 + 1, {});
    have_.assign(N_ / 2 + 1, false);
  }

  struct Entry {
    cplx efie_hat, mfie_hat, ce_hat, cm_hat;
  };

  const Entry& discrete(int q) {
    const int w = std::abs(disc::wrap_index(q, N_));
    if (!have_[w]) {
      Entry e;
      if (f_.composite == Composite::EFIO || f_.composite == Composite::CCFIO) {
        e.efie_hat = ds_.composite(with(f_, Composite::EFIO), w);
      }
      if (f_.composite == Composite::MFIO || f_.composite == Composite::CCFIO) {
        e.mfie_hat = ds_.composite(with(f_, Composite::MFIO), w);
      }
      if (f_.composite == Composite::CCFIO) {
        e.ce_hat = ds_.composite(with(f_, Composite::CEFIO), w);
        e.cm_hat = ds_.composite(with(f_, Composite::CMFIO), w);
      }
      disc_[w] = e;
      have_[w] = true;
    }
    return disc_[w];
  }

 private:
  const DiscreteSpectrum& ds_;
  FormulationId f_;
  int N_;
  std::vector<Entry> disc_;
  std::vector<bool> have_;
};

cplx single_upsilon(double t, cplx lambda, cplx lambda_hat, unsigned* flags) {
  const cplx num = t * lambda;
  if (std::abs(lambda_hat) < 1e-12 * std::abs(num) || lambda_hat == cplx{}) {
    if (flags) *flags |= kResonanceFlag;
    if (lambda_hat == cplx{}) return std::numeric_limits<double>::infinity();
  }
  return num / lambda_hat - 1.0;
}

cplx upsilon_cached(FormulationId f, int q, const DiscreteSpectrum& ds, EigCache& cache,
                    unsigned* flags) {
  const double t = disc::fourier_coeff({ds.config().p, ds.N()}, q);
  const auto& e = cache.discrete(q);
  const auto ups = [&](Composite c, cplx hat) {
    return single_upsilon(t, ds.continuous(with(f, c), q), hat, flags);
  };
  switch (f.composite) {
    case Composite::EFIO:
      return ups(Composite::EFIO, e.efie_hat);
    case Composite::MFIO:
      return ups(Composite::MFIO, e.mfie_hat);
    case Composite::CCFIO: {
      const cplx ue = ups(Composite::EFIO, e.efie_hat);
      const cplx um = ups(Composite::MFIO, e.mfie_hat);
      const cplx den = e.ce_hat + e.cm_hat;
      if (std::abs(den) == 0.0) {
        if (flags) *flags |= kResonanceFlag;
        return std::numeric_limits<double>::infinity();
      }
      return (e.ce_hat * ue + e.cm_hat * um) / den;
    }
    default:
      throw PreconditionError("upsilon: formulation must be EFIE, MFIE or CCFIE");
  }
}

double weighted_ratio(Measure m, Polarization pol, double ka, const std::vector<int>& qs,
                      const std::vector<cplx>& err, const std::vector<cplx>& ref) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double w = norm_weight(m, pol, ka, qs[i]);
    num += w * std::norm(err[i]);
    den += w * std::norm(ref[i]);
  }
  if (!(den > 0.0)) throw DomainError("error norm: vanishing reference");
  return std::sqrt(num / den);
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// Seeded candidates inside each logarithmic cell.
std::vector<std::vector<double>> cell_candidates(double ka_lo, double ka_hi, int points,
                                                 int per_cell, std::uint64_t seed) {
  const double ratio = std::log(ka_hi / ka_lo);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> cells(points);
  for (int i = 0; i < points; ++i) {
    const double lo = ka_lo * std::exp(ratio * i / points);
    const double hi = ka_lo * std::exp(ratio * (i + 1) / points);
    const double cell = std::log(hi / lo);
    cells[i].resize(per_cell);
    for (auto& c : cells[i]) c = lo * std::exp(cell * unit_uniform(rng));
  }
  return cells;
}

double predicted_at(FormulationId f, Measure m, double ka, int N, int p) {
  const ProblemConfig cfg = ProblemConfig::from_ka(ka, N, p);
  const DiscreteSpectrum ds(cfg, {p, N});
  return predicted_error_norm(m, upsilon_table(f, ds), ka);
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::L2:
      return "L2";
    case Measure::Hs:
      return "Hs";
    case Measure::Hks:
      return "Hks";
  }
  return "?";
}

Measure parse_measure(const std::string& text) {
  const std::string u = upper(text);
  if (u == "L2") return Measure::L2;
  if (u == "HS") return Measure::Hs;
  if (u == "HKS") return Measure::Hks;
  throw UsageError("unknown measure '" + text + "' (expected L2, Hs or Hks)");
}

std::string equation_name(Composite c) {
  switch (c) {
    case Composite::EFIO:
      return "EFIE";
    case Composite::MFIO:
      return "MFIE";
    case Composite::CCFIO:
      return "CCFIE";
    default:
      return spectra::to_string(c);
  }
}

double sobolev_exponent(Polarization pol) { return pol == Polarization::TM ? -0.5 : 0.5; }

double norm_weight(Measure m, Polarization pol, double ka, double q) {
  const double s = sobolev_exponent(pol);
  switch (m) {
    case Measure::L2:
      return 1.0;
    case Measure::Hs:
      return std::pow(1.0 + q * q, s);
    case Measure::Hks:
      return std::pow(ka * ka + q * q, s);
  }
  return 1.0;
}

int mesh_size(double ka) { return static_cast<int>(2 * std::lround(2.0 * ka)); }

cplx upsilon(FormulationId f, int q, const DiscreteSpectrum& ds, unsigned* flags) {
  EigCache cache(ds, f);
  return upsilon_cached(f, q, ds, cache, flags);
}

cplx upsilon(FormulationId f, int q, const ProblemConfig& cfg, const BasisSpec& b) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  const DiscreteSpectrum ds(c, b);
  return upsilon(f, q, ds);
}

UpsilonTable upsilon_table(FormulationId f, const DiscreteSpectrum& ds) {
  const ProblemConfig& cfg = ds.config();
  const int Q = bem::series_order(cfg.ka());
  const auto U = bem::current_coefficients(f.pol, cfg, Q);
  EigCache cache(ds, f);
  UpsilonTable t;
  t.formulation = f;
  t.rows.resize(2 * Q + 1);
  for (int q = 0; q <= Q; ++q) {
    UpsilonEntry e;
    e.q = q;
    e.U = U[Q + q];
    e.upsilon = upsilon_cached(f, q, ds, cache, &e.flags);
    t.rows[Q + q] = e;
    e.q = -q;
    t.rows[Q - q] = e;
  }
  return t;
}

std::vector<cplx> pointwise_current_error(FormulationId f, const ProblemConfig& cfg,
                                          const BasisSpec& b, unsigned* flags) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  const DiscreteSpectrum ds(c, b);
  const UpsilonTable t = upsilon_table(f, ds);
  const auto angles = bem::sample_angles(bem::Mesh(b.N, c.a), b);
  std::vector<cplx> num(angles.size()), den(angles.size());
  double peak = 0.0;
  for (std::size_t n = 0; n < angles.size(); ++n) {
    cplx a = 0.0;
    cplx d = 0.0;
    for (const auto& row : t.rows) {
      const cplx ph = std::polar(1.0, -row.q * angles[n]);
      a += row.U * row.upsilon * ph;
      d += row.U * ph;
    }
    num[n] = a;
    den[n] = d;
    peak = std::max(peak, std::abs(d));
  }
  std::vector<cplx> out(angles.size());
  for (std::size_t n = 0; n < angles.size(); ++n) {
    if (std::abs(den[n]) < 1e-12 * peak) {
      if (flags) *flags |= kDivisionFlag;
      out[n] = 0.0;
      continue;
    }
    out[n] = num[n] / den[n];
  }
  return out;
}

double predicted_error_norm(Measure m, const UpsilonTable& table, double ka) {
  std::vector<int> qs;
  std::vector<cplx> err, ref;
  for (const auto& row : table.rows) {
    qs.push_back(row.q);
    err.push_back(row.U * row.upsilon);
    ref.push_back(row.U);
  }
  return weighted_ratio(m, table.formulation.pol, ka, qs, err, ref);
}

double predicted_error_norm(Measure m, FormulationId f, const ProblemConfig& cfg,
                            const BasisSpec& b) {
  ProblemConfig c = cfg;
  c.N = b.N;
  c.p = b.p;
  const DiscreteSpectrum ds(c, b);
  return predicted_error_norm(m, upsilon_table(f, ds), c.ka());
}

double measured_error_norm(Measure m, Polarization pol, double ka,
                           const std::vector<double>& angles, const Eigen::VectorXcd& approx,
                           const Eigen::VectorXcd& exact) {
  const int N = static_cast<int>(angles.size());
  if (approx.size() != N || exact.size() != N) {
    throw DomainError("measured_error_norm: sample count mismatch");
  }
  std::vector<int> qs;
  std::vector<cplx> err, ref;
  for (int q = -N / 2; q < N / 2; ++q) {
    cplx e = 0.0;
    cplx r = 0.0;
    for (int n = 0; n < N; ++n) {
      const cplx ph = std::polar(1.0, q * angles[n]);
      e += (approx(n) - exact(n)) * ph;
      r += exact(n) * ph;
    }
    qs.push_back(q);
    err.push_back(e / static_cast<double>(N));
    ref.push_back(r / static_cast<double>(N));
  }
  return weighted_ratio(m, pol, ka, qs, err, ref);
}

ErrorReport error_report(FormulationId f, Measure m, double ka, int p, int N,
                         const bem::QuadratureOptions& quad) {
  if (N <= 0) N = mesh_size(ka);
  const ProblemConfig cfg = ProblemConfig::from_ka(ka, N, p);
  const BasisSpec b{p, N};
  const DiscreteSpectrum ds(cfg, b);
  const UpsilonTable table = upsilon_table(f, ds);

  ErrorReport rep;
  rep.ka = ka;
  rep.N = N;
  rep.formulation = f;
  rep.measure = m;
  rep.s = sobolev_exponent(f.pol);
  rep.r_predicted = predicted_error_norm(m, table, ka);
  for (const auto& row : table.rows) rep.warnings |= row.flags;

  const bem::Mesh mesh(N, cfg.a);
  const auto sol = bem::solve_current(f, mesh, b, cfg, {}, quad);
  rep.warnings |= sol.warnings;
  const auto exact = bem::exact_current(f.pol, cfg, sol.sample_angles, {}, &rep.warnings);
  rep.r_measured = measured_error_norm(m, f.pol, ka, sol.sample_angles, sol.samples, exact);
  return rep;
}

std::vector<Resonance> resonance_locator(Polarization pol, Composite c, double ka_lo,
                                         double ka_hi) {
  std::vector<Resonance> out;
  const bool tm = pol == Polarization::TM;
  bool derivative;
  if ((tm && c == Composite::EFIO) || (!tm && c == Composite::MFIO)) {
    derivative = false;
  } else if ((tm && c == Composite::MFIO) || (!tm && c == Composite::EFIO)) {
    derivative = true;
  } else {
    return out;
  }
  ka_lo = std::max(ka_lo, 1e-3);
  if (!(ka_hi > ka_lo)) return out;

  // Zeros of J_q and J'_q all lie above q.
  const int qmax = static_cast<int>(std::ceil(ka_hi)) + 1;
  const auto sign_of = [&](const specfun::CylPair& pr) {
    const double v = derivative ? pr.jp.mantissa().real() : pr.j.mantissa().real();
    return (v > 0.0) - (v < 0.0);
  };
  const auto value = [&](int q, double x) {
    const auto seq = specfun::cyl_sequence(q, x);
    const ScaledComplex& v = derivative ? seq[q].jp : seq[q].j;
    return v.mantissa().real() * std::ldexp(1.0, static_cast<int>(std::clamp(v.exp2(), -1000L, 1000L)));
  };

  const double step = 0.05;
  const int cells = std::max(1, static_cast<int>(std::ceil((ka_hi - ka_lo) / step)));
  std::vector<int> prev;
  double x_prev = ka_lo;
  for (int i = 0; i <= cells; ++i) {
    const double x = std::min(ka_hi, ka_lo + i * step);
    const auto seq = specfun::cyl_sequence(qmax, x);
    std::vector<int> cur(qmax + 1);
    for (int q = 0; q <= qmax; ++q) cur[q] = sign_of(seq[q]);
    if (!prev.empty()) {
      for (int q = 0; q <= qmax; ++q) {
        if (prev[q] == 0 || cur[q] == 0 || prev[q] == cur[q]) {
          if (cur[q] == 0 && prev[q] != 0) out.push_back({x, q});
          continue;
        }
        boost::uintmax_t iters = 80;
        const auto root = boost::math::tools::toms748_solve(
            [&](double t) { return value(q, t); }, x_prev, x,
            boost::math::tools::eps_tolerance<double>(50), iters);
        out.push_back({0.5 * (root.first + root.second), q});
      }
    }
    prev = std::move(cur);
    x_prev = x;
  }
  std::sort(out.begin(), out.end(),
            [](const Resonance& a, const Resonance& b) { return a.ka < b.ka; });
  return out;
}

double distance_to_resonance(const std::vector<Resonance>& res, double ka) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& r : res) d = std::min(d, std::abs(r.ka - ka));
  return d;
}

std::string to_string(Sampling s) {
  switch (s) {
    case Sampling::Grid:
      return "grid";
    case Sampling::Jittered:
      return "jittered";
    case Sampling::OffResonance:
      return "off_resonance";
  }
  return "?";
}

Sampling parse_sampling(const std::string& text) {
  if (text == "grid") return Sampling::Grid;
  if (text == "jittered") return Sampling::Jittered;
  if (text == "off_resonance" || text == "off-resonance") return Sampling::OffResonance;
  throw UsageError("unknown sampling '" + text + "'");
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CYLBEM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::vector<double> sample_points(double ka_lo, double ka_hi, int points,
                                  const SweepOptions& opt) {
  if (points < 1) throw UsageError("sweep needs at least one point");
  if (!(ka_lo > 0.0) || ka_hi < ka_lo) throw UsageError("sweep range must satisfy 0 < lo <= hi");
  std::vector<double> out;
  if (points == 1) return {ka_lo};
  const double ratio = std::log(ka_hi / ka_lo);
  if (opt.sampling == Sampling::Grid) {
    for (int i = 0; i < points; ++i) out.push_back(ka_lo * std::exp(ratio * i / (points - 1)));
    return out;
  }
  // Off-resonance selection happens in frequency_sweep; here each cell
  // contributes its first candidate.
  const int per_cell = opt.sampling == Sampling::Jittered ? 1 : std::max(1, opt.candidates);
  for (const auto& cell : cell_candidates(ka_lo, ka_hi, points, per_cell, opt.seed)) {
    out.push_back(cell.front());
  }
  return out;
}

bool resonance_flag(FormulationId f, Measure m, double ka, const SweepOptions& opt) {
  const auto zeros =
      resonance_locator(f.pol, f.composite, ka - opt.mask_radius, ka + opt.mask_radius);
  if (zeros.empty() || distance_to_resonance(zeros, ka) >= opt.mask_radius) return false;
  const int N = mesh_size(ka);
  const double r = predicted_at(f, m, ka, N, opt.p);
  double lowest = r;
  for (int i = 0; i < opt.probe_points; ++i) {
    const double t = ka - opt.probe_halfwidth +
                     2.0 * opt.probe_halfwidth * i / std::max(1, opt.probe_points - 1);
    if (t <= 0.0) continue;
    lowest = std::min(lowest, predicted_at(f, m, t, N, opt.p));
  }
  return r > opt.spike_factor * lowest;
}

std::vector<ErrorReport> sweep_at(FormulationId f, Measure m, const std::vector<double>& kas,
                                  const SweepOptions& opt) {
  std::vector<ErrorReport> out(kas.size());
  parallel_for(static_cast<int>(kas.size()), thread_count(opt.threads), [&](int i) {
    const double ka = kas[i];
    ErrorReport rep;
    if (opt.measure_bem) {
      rep = error_report(f, m, ka, opt.p, 0, opt.quad);
    } else {
      rep.ka = ka;
      rep.N = mesh_size(ka);
      rep.formulation = f;
      rep.measure = m;
      rep.s = sobolev_exponent(f.pol);
      rep.r_predicted = predicted_at(f, m, ka, rep.N, opt.p);
      rep.r_measured = std::numeric_limits<double>::quiet_NaN();
    }
    rep.resonance_flag = opt.flag_resonances && resonance_flag(f, m, ka, opt);
    if (rep.resonance_flag) rep.warnings |= kResonanceFlag;
    out[i] = rep;
  });
  return out;
}

std::vector<ErrorReport> frequency_sweep(FormulationId f, Measure m, double ka_lo, double ka_hi,
                                         int points, const SweepOptions& opt) {
  if (ka_hi > 300.0) throw UsageError("sweep range beyond ka = 300");
  std::vector<double> kas;
  if (opt.sampling != Sampling::OffResonance) {
    kas = sample_points(ka_lo, ka_hi, points, opt);
  } else {
    // Keep the quietest seeded candidate of each cell, judged by prediction.
    if (points < 1 || !(ka_lo > 0.0) || ka_hi < ka_lo) {
      throw UsageError("sweep range must satisfy 0 < lo <= hi with at least one point");
    }
    const auto cells =
        cell_candidates(ka_lo, ka_hi, points, std::max(1, opt.candidates), opt.seed);
    kas.resize(points);
    parallel_for(points, thread_count(opt.threads), [&](int i) {
      double best = cells[i][0];
      double best_r = std::numeric_limits<double>::infinity();
      for (double c : cells[i]) {
        const double r = predicted_at(f, m, c, mesh_size(c), opt.p);
        if (r < best_r) {
          best_r = r;
          best = c;
        }
      }
      kas[i] = best;
    });
  }
  return sweep_at(f, m, kas, opt);
}

ScalingFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const int n = static_cast<int>(lx.size());
  if (n < 8) {
    throw InsufficientDataError("scaling fit needs at least 8 usable points, got " +
                                std::to_string(n));
  }
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("scaling fit needs distinct abscissae");
  ScalingFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double res = ly[i] - fit.intercept - fit.slope * lx[i];
    ssr += res * res;
  }
  const boost::math::students_t dist(n - 2);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  fit.half_width = t * std::sqrt(ssr / (n - 2) / sxx);
  return fit;
}

ScalingFit fit_scaling_exponent(const std::vector<ErrorReport>& reports, bool mask,
                                FitSource source) {
  std::vector<double> x, y;
  for (const auto& r : reports) {
    if (mask && r.resonance_flag) continue;
    x.push_back(r.ka);
    y.push_back(source == FitSource::Measured ? r.r_measured : r.r_predicted);
  }
  return fit_power_law(x, y);
}

std::vector<double> detect_spikes(const std::vector<ErrorReport>& reports, double factor,
                                  int window, FitSource source) {
  std::vector<ErrorReport> sorted = reports;
  std::sort(sorted.begin(), sorted.end(),
            [](const ErrorReport& a, const ErrorReport& b) { return a.ka < b.ka; });
  const int n = static_cast<int>(sorted.size());
  const auto val = [&](int i) {
    return source == FitSource::Measured ? sorted[i].r_measured : sorted[i].r_predicted;
  };
  std::vector<double> spikes;
  for (int i = 1; i + 1 < n; ++i) {
    if (val(i) < val(i - 1) || val(i) < val(i + 1)) continue;
    std::vector<double> local;
    for (int j = std::max(0, i - window); j <= std::min(n - 1, i + window); ++j) {
      local.push_back(val(j));
    }
    std::nth_element(local.begin(), local.begin() + local.size() / 2, local.end());
    if (val(i) > factor * local[local.size() / 2]) spikes.push_back(sorted[i].ka);
  }
  return spikes;
}

}  // namespace cylbem::analysis
