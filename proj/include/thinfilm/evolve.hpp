#pragma once

// Semi-implicit time stepping:
//   u^{n+1} = A^{-1} (u^n - dt k(t_n) B(u^n) + dt lambda u^n),
// with A = 1 + dt((-Delta)^2 + alpha (-Delta)^{2s} - Delta) diagonal in the
// sine basis and B the discrete div(|grad u|^{p-2} grad u).

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/functionals.hpp"
#include "thinfilm/nonlinear.hpp"
#include "thinfilm/schedule.hpp"
#include "thinfilm/spectral.hpp"
#include "thinfilm/tff.hpp"

namespace thinfilm {

struct SimulationConfig {
  SimulationConfig(ExponentField p_, CoefficientSchedule k_) : p(std::move(p_)), k(std::move(k_)) {}

  const Grid2D& grid() const { return p.grid(); }

  ExponentField p;
  CoefficientSchedule k;
  double alpha = 0.0;
  double s = 0.5;
  double dt = 1e-3;
  double t_end = 0.0;
  double source_lambda = 0.0;
  double blowup_threshold = 1e8;
  std::vector<double> snapshot_times;
  bool verbatim_denominator = false;
  bool implicit_source = false;
  int report_stride = 1;

  ModelParams model() const { return {alpha, s, source_lambda}; }
  void validate() const {
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    require(t_end >= 0.0 && std::isfinite(t_end), "t_end must be nonnegative");
    require(blowup_threshold > 0.0, "blow-up threshold must be positive");
    require(report_stride >= 1, "report stride must be at least 1");
  }
};

enum class RunStatus { completed, blew_up, indefinite_denominator };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blew_up: return "blew_up";
    case RunStatus::indefinite_denominator: return "indefinite_denominator";
  }
  return "unknown";
}

struct Snapshot {
  double t = 0.0;
  Field u;
};

struct SimulationOutcome {
  RunStatus status = RunStatus::completed;
  double t_final = 0.0;
  std::optional<double> blowup_time_estimate;
  std::vector<FunctionalReport> reports;
  std::vector<Snapshot> snapshots;
  double conservation_residual_max = 0.0;
  double nehari_residual_max = 0.0;
  long steps = 0;
  std::optional<Field> final_field;
};

/// Per-step quantities needed for the discrete energy identity.
struct EnergyTrace {
  double dt = 0.0;
  std::vector<double> J;                 // J(u^n; t_n), n = 0..N
  std::vector<double> I;                 // I(u^n; t_n)
  std::vector<double> F1;                // F1(u^n)
  std::vector<double> dissipation;       // ||(u^{n+1} - u^n)/dt||^2 dt, n = 0..N-1
  std::vector<double> source_work;       // k'(t_n) weighted_modular(u^n) dt, n = 0..N-1
};

/// max_n |J(u^n;t_n) + sum_{m<n} dissipation_m + sum_{m<n} source_work_m - J(u^0;0)| / max(1, |J(u^0;0)|)
inline double conservation_residual(const EnergyTrace& tr) {
  if (tr.J.empty()) return 0.0;
  const double j0 = tr.J.front();
  const double scale = std::max(1.0, std::abs(j0));
  double acc = 0.0, worst = 0.0;
  for (std::size_t n = 0; n < tr.J.size(); ++n) {
    worst = std::max(worst, std::abs(tr.J[n] + acc - j0) / scale);
    if (n < tr.dissipation.size()) acc += tr.dissipation[n] + tr.source_work[n];
  }
  return worst;
}

/// max_n |(F1_{n+1} - F1_n)/dt + I_n|
inline double nehari_identity_residual(const EnergyTrace& tr) {
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < tr.F1.size(); ++n)
    worst = std::max(worst, std::abs((tr.F1[n + 1] - tr.F1[n]) / tr.dt + tr.I[n]));
  return worst;
}

class Stepper {
 public:
  explicit Stepper(const SimulationConfig& cfg)
      : cfg_(cfg),
        symbols_(cfg.grid(), cfg.alpha, cfg.s, cfg.dt,
                 SolverOptions{cfg.verbatim_denominator, cfg.implicit_source ? cfg.source_lambda : 0.0}) {}

  const SymbolTable& symbols() const { return symbols_; }

  /// One update; returns the sine coefficients of u^{n+1}.
  SpectralField step_spectral(const Field& u, double t) const {
    require(!u.diverged(), "cannot step a diverged field");
    const Field b = nonlinear_divergence(u, cfg_.p);
    const double dt = cfg_.dt;
    const double kt = cfg_.k(t);
    const double src = cfg_.implicit_source ? 0.0 : cfg_.source_lambda;
    Field rhs(u.grid());
    auto r = rhs.values();
    auto uv = u.values();
    auto bv = b.values();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = uv[i] - dt * kt * bv[i] + dt * src * uv[i];
    return solve_semi_implicit_spectral(rhs, symbols_);
  }

  Field step(const Field& u, double t) const {
    Field next = dst_inverse(step_spectral(u, t));
    if (!(next.max_abs() <= cfg_.blowup_threshold)) next.flag_diverged();
    return next;
  }

 private:
  const SimulationConfig& cfg_;
  SymbolTable symbols_;
};

inline Field step(const Field& u, double t, const SimulationConfig& cfg) { return Stepper(cfg).step(u, t); }

struct RunOptions {
  EnergyTrace* trace = nullptr;  // optional sink for per-step energy data
};

inline SimulationOutcome run(const Field& u0, const SimulationConfig& cfg, RunOptions opts = {}) {
  cfg.validate();
  require(u0.grid() == cfg.grid(), "initial field and exponent live on different grids");
  SimulationOutcome out;
  std::optional<Stepper> stepper;
  try {
    stepper.emplace(cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::indefinite_denominator) throw;
    out.status = RunStatus::indefinite_denominator;
    return out;
  }
  const SymbolTable& sym = stepper->symbols();
  const long n_steps = std::lround(cfg.t_end / cfg.dt);

  std::vector<long> snapshot_steps;
  for (double ts : cfg.snapshot_times) snapshot_steps.push_back(std::lround(ts / cfg.dt));

  EnergyTrace local;
  EnergyTrace& tr = opts.trace ? *opts.trace : local;
  tr = EnergyTrace{};
  tr.dt = cfg.dt;

  auto report_of = [&](const Field& u, const SpectralField& coeffs, double t) {
    return make_report(t, cfg.k(t), norm_alpha_sq(coeffs, sym), modular_parts(u, cfg.p), l2_norm_sq(u),
                       u.max_abs());
  };
  auto take_snapshots = [&](const Field& u, long n) {
    for (std::size_t i = 0; i < snapshot_steps.size(); ++i)
      if (snapshot_steps[i] == n) out.snapshots.push_back({cfg.snapshot_times[i], u});
  };

  Field u = u0;
  FunctionalReport rep = report_of(u, dst_forward(u), 0.0);
  out.reports.push_back(rep);
  tr.J.push_back(rep.J);
  tr.I.push_back(rep.I);
  tr.F1.push_back(rep.F1);
  take_snapshots(u, 0);

  for (long n = 0; n < n_steps; ++n) {
    const double t = double(n) * cfg.dt;
    const double t_next = double(n + 1) * cfg.dt;
    std::optional<SpectralField> coeffs;
    try {
      coeffs.emplace(stepper->step_spectral(u, t));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::diverged_coefficient) throw;
    }
    std::optional<Field> next;
    if (coeffs) next.emplace(dst_inverse(*coeffs));
    if (!next || !(next->max_abs() <= cfg.blowup_threshold)) {
      out.status = RunStatus::blew_up;
      out.blowup_time_estimate = t_next;
      out.t_final = t;
      out.steps = n;
      break;
    }
    double incr = 0.0;
    auto a = next->values();
    auto b = u.values();
    for (std::size_t i = 0; i < a.size(); ++i) incr += (a[i] - b[i]) * (a[i] - b[i]);
    incr *= u.grid().cell_area() / cfg.dt;
    tr.dissipation.push_back(incr);
    tr.source_work.push_back(cfg.k.derivative(t) * rep.weighted_modular * cfg.dt);

    u = std::move(*next);
    rep = report_of(u, *coeffs, t_next);
    tr.J.push_back(rep.J);
    tr.I.push_back(rep.I);
    tr.F1.push_back(rep.F1);
    if ((n + 1) % cfg.report_stride == 0 || n + 1 == n_steps) out.reports.push_back(rep);
    take_snapshots(u, n + 1);
    out.t_final = t_next;
    out.steps = n + 1;
  }
  out.conservation_residual_max = conservation_residual(tr);
  out.nehari_residual_max = nehari_identity_residual(tr);
  out.final_field = std::move(u);
  return out;
}

inline constexpr const char* kReportCsvHeader = "t,J,I,norm_alpha_sq,F1,modular,weighted_modular,umax";

inline void write_report_row(std::ostream& os, const FunctionalReport& r) {
  os << detail::format_real(r.t) << ',' << detail::format_real(r.J) << ',' << detail::format_real(r.I) << ','
     << detail::format_real(r.norm_alpha_sq) << ',' << detail::format_real(r.F1) << ','
     << detail::format_real(r.modular) << ',' << detail::format_real(r.weighted_modular) << ','
     << detail::format_real(r.umax) << '\n';
}

inline void write_reports_csv(std::ostream& os, const std::vector<FunctionalReport>& reports) {
  os << kReportCsvHeader << '\n';
  for (const auto& r : reports) write_report_row(os, r);
}

inline std::string format_summary(const SimulationOutcome& o) {
  std::ostringstream os;
  os << "status: " << to_string(o.status) << '\n';
  os << "steps: " << o.steps << '\n';
  os << "t_final: " << detail::format_real(o.t_final) << '\n';
  if (o.blowup_time_estimate) os << "blowup_time_estimate: " << detail::format_real(*o.blowup_time_estimate) << '\n';
  if (!o.reports.empty()) {
    os << "F1_initial: " << detail::format_real(o.reports.front().F1) << '\n';
    os << "F1_final: " << detail::format_real(o.reports.back().F1) << '\n';
    os << "J_initial: " << detail::format_real(o.reports.front().J) << '\n';
  }
  os << "conservation_residual_max: " << detail::format_real(o.conservation_residual_max) << '\n';
  os << "nehari_residual_max: " << detail::format_real(o.nehari_residual_max) << '\n';
  return os.str();
}

}  // namespace thinfilm
