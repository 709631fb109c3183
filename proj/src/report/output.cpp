#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "wick/report/report.hpp"

namespace wick {

std::string csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + t.header[i];
  out += "\n";
  char b[40];
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(b, sizeof b, "%.17g", row[i]);
      out += (i ? "," : "");
      out += b;
    }
    out += "\n";
  }
  return out;
}

std::string iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char b[32];
  std::strftime(b, sizeof b, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return b;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

}  // namespace

std::string write_report(const std::string& dir, const RunConfig& cfg, const std::vector<SuiteReport>& suites,
                         const RunOutcome& outcome) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::ordered_json m;
  m["tool"] = "wick";
  m["command"] = outcome.command;
  m["started"] = iso8601(outcome.start);
  m["finished"] = iso8601(outcome.end);
  m["versions"] = {{"wick", "1.0.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__},
                   {"cxx", __cplusplus}};
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.echo) echo[k] = v;
  m["config"] = {{"preset", cfg.preset}, {"profile", cfg.profile}, {"seed", cfg.seed}, {"settings", echo}};
  m["error"] = outcome.error_code.empty() ? nlohmann::ordered_json(nullptr)
                                          : nlohmann::ordered_json{{"code", outcome.error_code},
                                                                   {"message", outcome.error_message}};
  bool all = outcome.error_code.empty();
  nlohmann::ordered_json js = nlohmann::ordered_json::array();
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& s : suites) {
    all = all && s.pass();
    nlohmann::ordered_json jv = nlohmann::ordered_json::array();
    for (const auto& v : s.verdicts) {
      nlohmann::ordered_json e = {{"name", v.name},         {"pass", v.pass},          {"measured", number(v.measured)},
                                  {"relation", v.relation}, {"threshold", number(v.threshold)}, {"detail", v.detail}};
      if (v.criterion != 0) e["criterion"] = v.criterion;
      jv.push_back(e);
    }
    for (const auto& t : s.tables) {
      const std::string f = s.name + "_" + t.name + ".csv";
      std::ofstream(fs::path(dir) / f, std::ios::binary) << csv(t);
      files.push_back(f);
    }
    js.push_back({{"suite", s.name}, {"pass", s.pass()}, {"seconds", s.seconds}, {"verdicts", jv}});
  }
  m["suites"] = js;
  m["files"] = files;
  m["pass"] = all;
  const std::string text = m.dump(2);
  std::ofstream(fs::path(dir) / "manifest.json") << text << "\n";
  return text;
}

}  // namespace wick
