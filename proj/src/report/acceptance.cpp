#include <chrono>
#include <functional>

#include "checks.hpp"
#include "wick/presets.hpp"

namespace wick {

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<SuiteReport(const Tolerances&)> run;
};

AdmField curved24() { return curved_1p1(2 * kPi, 0.3, 0.2); }

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "wedge containment", 60,
       [](const Tolerances& tol) {
         SuiteReport r;
         const auto flat = AdmField::flat(1, {1.0, 1.0});
         const auto curved = curved24();
         for (double th : {kPi / 6, kPi / 4, kPi / 2}) {
           r.absorb(checks::spectrum(TorusGrid({32, 32}, flat.periods), flat, th, tol, 0.0, "flat 32x32"));
           r.absorb(checks::spectrum(TorusGrid({24, 24}, curved.periods), curved, th, tol, std::nullopt, "curved 24x24"));
         }
         return r;
       }},
      {2, "sharp resolvent bound", 120,
       [](const Tolerances& tol) {
         const auto adm = curved24();
         return checks::resolvent(assemble_delta_theta(TorusGrid({24, 24}, adm.periods), adm, kPi / 4), 50, 1, tol,
                                  "curved 24x24");
       }},
      {3, "semigroup contracts", 120,
       [](const Tolerances& tol) {
         const auto adm = curved24();
         // (0.05, 0.05) covers 0.05 and 0.1; (0.05, 0.05+0.02i) the complex time.
         SuiteReport r = checks::contracts(TorusGrid({24, 24}, adm.periods), adm, kPi / 4, {0.05, 0.05}, 1, tol,
                                           "curved 24x24");
         r.absorb(checks::contracts(TorusGrid({24, 24}, adm.periods), adm, kPi / 4, {0.05, Complex(0.05, 0.02)}, 1,
                                    tol, "curved 24x24"));
         return r;
       }},
      {4, "eikonal closed forms", 30,
       [](const Tolerances& tol) {
         SuiteReport r;
         std::vector<double> ths;
         for (int s = 0; s < 20; ++s) ths.push_back(0.3 + 0.12 * s);
         r.absorb(checks::eikonal(random_adm(1, 51), ths, 20, 2024, tol, "random 1+1"));
         r.absorb(checks::eikonal(curved_1p1(2 * kPi), {kPi / 3}, 20, 7, tol, "curved 1+1"));
         return r;
       }},
      {5, "transport oracles", 60,
       [](const Tolerances& tol) {
         SuiteReport r;
         r.absorb(checks::transport(AdmField::flat(1, {1.0, 1.0}, 0.7), {kPi / 2, kPi / 3, 0.4}, 4, tol, true,
                                    "flat V = 0.7"));
         r.absorb(checks::transport(curved_1p1(1.0), {kPi / 2}, 1, tol, false, "curved 1+1"));
         r.absorb(checks::transport(curved_1p1(2 * kPi, 0.3, 0.2), {kPi / 2}, 1, tol, false, "curved 1+1 with shift"));
         return r;
       }},
      {6, "diagonal asymptotics", 900,
       [](const Tolerances& tol) {
         SuiteReport r;
         const auto adm = curved_1p1(1.0);
         // The 32 grid only measures the lattice order; extrapolation uses 64 and 128.
         for (double th : {kPi / 2, kPi / 3})
           r.absorb(checks::diagonal_fit(adm, 1.0, {32, 64, 128}, th, 8, tol, "curved 1+1, h = 1/64, 1/128"));
         return r;
       }},
      {7, "kernel laws", 300,
       [](const Tolerances& tol) {
         const auto adm = curved24();
         return checks::kernel_laws(TorusGrid({24, 24}, adm.periods), adm, kPi / 4, Complex(0.05, 0.01),
                                    Complex(0.03, -0.005), 3, tol, true, "curved 24x24");
       }},
      {8, "Lorentzian limit", 300,
       [](const Tolerances& tol) {
         SuiteReport r;
         const auto adm = curved24();
         const std::vector<double> ths = {0.4, 0.2, 0.1, 0.05};
         r.absorb(checks::lorentz(TorusGrid({24, 24}, adm.periods), adm, {0.25, 0.5}, ths, 3, 2, 1, tol, std::nullopt,
                                  "curved 24x24"));
         const auto flat = AdmField::flat(1, {2 * kPi, 2 * kPi}, 0.3);
         r.absorb(checks::lorentz(TorusGrid({16, 16}, flat.periods), flat, {0.5}, ths, 1, 2, 11, tol, 0.3, "flat 16x16"));
         return r;
       }},
      {9, "smoothing exponent", 120,
       [](const Tolerances&) {
         const auto adm = curved_1p1(1.0);
         SuiteReport r = checks::smoothing(TorusGrid({32, 32}, adm.periods), adm, kPi / 4, 7, "curved 32x32");
         // The criterion is the C^0 exponent; the rest stay as context.
         for (auto& v : r.verdicts)
           if (v.name.find("m = 0") == std::string::npos) v.criterion = -1;
         return r;
       }},
  };
  return list;
}

// Headroom of one verdict: measured / threshold for "<=", threshold / measured for ">=".
double usage(const Verdict& v) {
  if (v.relation == "<=") return v.threshold > 0 ? v.measured / v.threshold : v.measured;
  if (v.relation == ">=") return v.measured != 0 ? v.threshold / v.measured : INFINITY;
  return v.pass ? 0.0 : INFINITY;
}

}  // namespace

int acceptance_count() { return static_cast<int>(criteria().size()); }

std::string acceptance_title(int id) {
  for (const auto& c : criteria())
    if (c.id == id) return c.title;
  return {};
}

SuiteReport run_acceptance(const Tolerances& tol, const std::vector<int>& only) {
  SuiteReport out;
  out.name = "acceptance";
  const auto t_all = std::chrono::steady_clock::now();
  for (const auto& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    v.criterion = c.id;
    v.name = c.title;
    v.relation = "all";
    try {
      SuiteReport sub = c.run(tol);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      v.pass = true;
      std::string worst_name;
      for (const auto& s : sub.verdicts) {
        if (s.criterion < 0) continue;
        v.pass = v.pass && s.pass;
        const double u = usage(s);
        if (u >= v.measured) v.measured = u, worst_name = s.name + " = " + checks::fmt(s.measured);
      }
      v.threshold = c.budget_seconds;
      v.pass = v.pass && secs <= c.budget_seconds;
      v.detail = std::to_string(sub.verdicts.size()) + " checks; tightest " + worst_name + "; " + checks::fmt(secs) +
                 " s of " + checks::fmt(c.budget_seconds);
      for (auto& s : sub.verdicts) out.verdicts.push_back(s), out.verdicts.back().criterion = -c.id;
      for (auto& t : sub.tables) t.name = "c" + std::to_string(c.id) + "_" + t.name, out.tables.push_back(std::move(t));
    } catch (const Error& e) {
      v.pass = false;
      v.detail = e.code() + ": " + e.what();
    }
    out.verdicts.push_back(v);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all).count();
  return out;
}

}  // namespace wick
