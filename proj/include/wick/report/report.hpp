#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "wick/report/config.hpp"

namespace wick {

struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "==", "trend"
  std::string detail;
  int criterion = 0;     // acceptance criterion number, 0 for suite checks
};

Verdict leq(std::string name, double measured, double threshold, std::string detail = {});
Verdict geq(std::string name, double measured, double threshold, std::string detail = {});
Verdict holds(std::string name, bool ok, double measured, std::string detail = {});

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct SuiteReport {
  std::string name;
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  double seconds = 0.0;
  bool pass() const;
  void absorb(SuiteReport other);
};

SuiteReport cmd_spectrum(const RunConfig& cfg);
SuiteReport cmd_coefficients(const RunConfig& cfg);
SuiteReport cmd_kernel(const RunConfig& cfg);
SuiteReport cmd_limit(const RunConfig& cfg);

// One verdict per acceptance criterion, fixed setups; `only` selects a subset.
SuiteReport run_acceptance(const Tolerances& tol, const std::vector<int>& only = {});
int acceptance_count();
std::string acceptance_title(int id);

std::string csv(const Table& t);  // header line, then %.17g fields
std::string iso8601(std::chrono::system_clock::time_point t);

struct RunOutcome {
  std::string command;
  std::chrono::system_clock::time_point start, end;
  std::string error_code;  // empty on success
  std::string error_message;
};

// Writes <suite>_<table>.csv files and manifest.json into dir; returns the manifest text.
std::string write_report(const std::string& dir, const RunConfig& cfg, const std::vector<SuiteReport>& suites,
                         const RunOutcome& outcome);

}  // namespace wick
