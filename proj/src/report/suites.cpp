#include <algorithm>
#include <chrono>

#include "checks.hpp"

namespace wick {

Verdict leq(std::string name, double measured, double threshold, std::string detail) {
  return {std::move(name), measured <= threshold, measured, threshold, "<=", std::move(detail), 0};
}
Verdict geq(std::string name, double measured, double threshold, std::string detail) {
  return {std::move(name), measured >= threshold, measured, threshold, ">=", std::move(detail), 0};
}
Verdict holds(std::string name, bool ok, double measured, std::string detail) {
  return {std::move(name), ok, measured, 0.0, "holds", std::move(detail), 0};
}

bool SuiteReport::pass() const {
  // Negative criterion marks supporting detail under an acceptance entry.
  for (const auto& v : verdicts)
    if (v.criterion >= 0 && !v.pass) return false;
  return true;
}

void SuiteReport::absorb(SuiteReport o) {
  for (auto& v : o.verdicts) verdicts.push_back(std::move(v));
  // Same-named tables are concatenated.
  for (auto& t : o.tables) {
    auto it = std::find_if(tables.begin(), tables.end(), [&](const Table& x) { return x.name == t.name; });
    if (it == tables.end())
      tables.push_back(std::move(t));
    else
      for (auto& row : t.rows) it->rows.push_back(std::move(row));
  }
}

namespace {

template <class F>
SuiteReport timed(const std::string& name, F body) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport r;
  r.name = name;
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Flat geometry with a constant potential and no extra modes admits the Fourier oracles.
std::optional<double> flat_potential(const RunConfig& c) {
  if (c.preset != "flat" || !c.modes.empty() || c.shift != 0.0) return std::nullopt;
  return c.potential;
}

bool zetas_inside(const std::vector<Complex>& zs, double theta) {
  const SectorSpec s{theta_tilde(theta)};
  for (std::size_t i = 1; i < zs.size(); ++i)
    if (!s.contains(zs[0]) || !s.contains(zs[i]) || !s.contains(zs[0] + zs[i])) return false;
  return true;
}

}  // namespace

SuiteReport cmd_spectrum(const RunConfig& c) {
  return timed("spectrum", [&](SuiteReport& r) {
    const auto adm = build_geometry(c);
    const TorusGrid grid(c.grid, adm.periods);
    for (double th : c.thetas) {
      const auto op = assemble_delta_theta(grid, adm, th);
      r.absorb(checks::numerical_range(op, c.seed, c.tol, "spectrum"));
      if (op.size() <= kDenseThreshold) r.absorb(checks::spectrum(grid, adm, th, c.tol, flat_potential(c), "spectrum"));
      r.absorb(checks::resolvent(op, c.resolvent_samples, c.seed, c.tol, "spectrum"));
      if (op.size() <= kDenseThreshold && zetas_inside(c.zetas, th))
        r.absorb(checks::contracts(grid, adm, th, c.zetas, c.seed, c.tol, "spectrum"));
    }
  });
}

SuiteReport cmd_coefficients(const RunConfig& c) {
  return timed("coefficients", [&](SuiteReport& r) {
    const auto adm = build_geometry(c);
    r.absorb(checks::eikonal(adm, c.thetas, 20, c.seed, c.tol, "coefficients"));
    const bool flat = c.preset == "flat" && c.modes.empty() && c.shift == 0.0;
    r.absorb(checks::transport(adm, c.thetas, c.order, c.tol, flat, "coefficients"));
  });
}

SuiteReport cmd_kernel(const RunConfig& c) {
  return timed("kernel", [&](SuiteReport& r) {
    const auto adm = build_geometry(c);
    const TorusGrid grid(c.grid, adm.periods);
    for (double th : c.thetas) {
      if (!zetas_inside(c.zetas, th)) continue;
      r.absorb(checks::kernel_laws(grid, adm, th, c.zetas[0], c.zetas[1], c.seed, c.tol, false, "kernel"));
      break;
    }
    const auto fit_adm = build_geometry(c, c.kernel_period);
    for (double th : c.fit_thetas)
      r.absorb(checks::diagonal_fit(fit_adm, c.kernel_period, c.kernel_levels, th, c.fit_points, c.tol, "kernel"));
    std::vector<int> sg(c.grid.size(), c.smoothing_grid);
    r.absorb(checks::smoothing(TorusGrid(sg, fit_adm.periods), fit_adm, c.thetas.front(), c.seed, "kernel"));
  });
}

SuiteReport cmd_limit(const RunConfig& c) {
  return timed("limit", [&](SuiteReport& r) {
    const auto adm = build_geometry(c);
    const TorusGrid grid(c.grid, adm.periods);
    r.absorb(checks::lorentz(grid, adm, c.limit_s, c.limit_thetas, c.limit_probes, c.limit_rank, c.seed, c.tol,
                             flat_potential(c), "limit"));
  });
}

}  // namespace wick
