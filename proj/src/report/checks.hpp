#pragma once

// Check building blocks shared by the subcommands and the acceptance run.

#include "wick/kernel_lab.hpp"
#include "wick/lorentz_limit.hpp"
#include "wick/report/report.hpp"

namespace wick::checks {

std::string fmt(double v);
std::string tag(double theta);

// Dense spectrum against the wedge; the flat oracle when V is given.
SuiteReport spectrum(const TorusGrid& grid, const AdmField& adm, double theta, const Tolerances& tol,
                     std::optional<double> flat_potential, const std::string& label);

SuiteReport numerical_range(const LatticeOperator& op, unsigned seed, const Tolerances& tol, const std::string& label);

// Samples in Sigma_th~ (bound 1/|l|) and Sigma_{pi/2+th~/2} (bound C/|l|).
SuiteReport resolvent(const LatticeOperator& op, int samples, unsigned seed, const Tolerances& tol,
                      const std::string& label);

// Contract suite for (z1, z_i), i >= 1.
SuiteReport contracts(const TorusGrid& grid, const AdmField& adm, double theta, const std::vector<Complex>& zetas,
                      unsigned seed, const Tolerances& tol, const std::string& label);

SuiteReport eikonal(const AdmField& adm, const std::vector<double>& thetas, int points, unsigned seed,
                    const Tolerances& tol, const std::string& label);

SuiteReport transport(const AdmField& adm, const std::vector<double>& thetas, int order, const Tolerances& tol,
                      bool flat_oracle, const std::string& label);

SuiteReport kernel_laws(const TorusGrid& grid, const AdmField& adm, double theta, Complex z1, Complex z2,
                        unsigned seed, const Tolerances& tol, bool contour_route, const std::string& label);

SuiteReport diagonal_fit(const AdmField& adm, double period, const std::vector<int>& levels, double theta,
                         int points, const Tolerances& tol, const std::string& label);

SuiteReport smoothing(const TorusGrid& grid, const AdmField& adm, double theta, unsigned seed, const std::string& label);

SuiteReport lorentz(const TorusGrid& grid, const AdmField& adm, const std::vector<double>& s_list,
                    const std::vector<double>& thetas, int probes, int rank, unsigned seed, const Tolerances& tol,
                    std::optional<double> flat_potential, const std::string& label);

}  // namespace wick::checks
