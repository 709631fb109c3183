#include "wick/report/config.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include "wick/presets.hpp"

namespace wick {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s, int line, const std::string& key) {
  double v = 0.0;
  const auto t = trim(s);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(line, key + ": not a number: '" + t + "'");
  return v;
}

long to_int(const std::string& s, int line, const std::string& key) {
  long v = 0;
  const auto t = trim(s);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) throw ConfigError(line, key + ": not an integer: '" + t + "'");
  return v;
}

std::vector<double> doubles(const std::string& s, int line, const std::string& key) {
  std::vector<double> v;
  for (const auto& x : split(s, ',')) v.push_back(to_double(x, line, key));
  return v;
}

std::vector<int> ints(const std::string& s, int line, const std::string& key, char sep = ',') {
  std::vector<int> v;
  for (const auto& x : split(s, sep)) v.push_back(static_cast<int>(to_int(x, line, key)));
  return v;
}

std::vector<double> angles(const std::string& s, int line, const std::string& key) {
  std::vector<double> v;
  for (const auto& x : split(s, ',')) {
    try {
      v.push_back(parse_angle(x));
    } catch (const std::exception&) {
      throw ConfigError(line, key + ": bad angle '" + x + "'");
    }
  }
  return v;
}

void positive(double v, int line, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError(line, key + " must be positive");
}

}  // namespace

Tolerances tolerance_profile(const std::string& name) {
  Tolerances t;
  if (name == "default") return t;
  if (name != "strict") throw ConfigError(0, "unknown tolerance profile '" + name + "' (strict|default)");
  // Tenfold on the roundoff-level checks, half on the fits.
  for (double* p : {&t.wedge, &t.spectrum, &t.resolvent, &t.law, &t.contour, &t.closed_form, &t.oracle, &t.potential,
                    &t.kernel, &t.chapman, &t.unitary, &t.closed_gap})
    *p *= 0.1;
  t.fit_a0 *= 0.5;
  t.fit_a1 *= 0.5;
  return t;
}

double parse_angle(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ') s += c;
  static const std::regex re(R"(^([+-]?[0-9]*\.?[0-9]*(?:[eE][+-]?[0-9]+)?)\*?(pi)?(?:/([0-9]*\.?[0-9]+))?$)");
  std::smatch m;
  if (s.empty() || !std::regex_match(s, m, re)) throw std::invalid_argument("bad angle");
  const bool has_pi = m[2].matched;
  std::string num = m[1].str();
  double v;
  if (num.empty() || num == "+" || num == "-") {
    if (!has_pi) throw std::invalid_argument("bad angle");
    v = num == "-" ? -1.0 : 1.0;
  } else {
    v = std::stod(num);
  }
  if (has_pi) v *= kPi;
  if (m[3].matched) v /= std::stod(m[3].str());
  return v;
}

Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ') s += c;
  if (s.empty()) throw std::invalid_argument("bad complex");
  auto number = [](const std::string& t) {
    if (t.empty() || t == "+" || t == "-") return t == "-" ? -1.0 : 1.0;
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad complex");
    return v;
  };
  if (s.back() != 'i') {
    if (s == "+" || s == "-") throw std::invalid_argument("bad complex");
    return {number(s), 0.0};
  }
  s.pop_back();
  // Split at the last sign that does not belong to an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      cut = i;
      break;
    }
  if (cut == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, cut)), number(s.substr(cut))};
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  if (key == "preset") {
    if (v != "curved" && v != "flat" && v != "random") throw ConfigError(line, "preset must be curved, flat or random");
    c.preset = v;
  } else if (key == "period") {
    c.period = parse_angle(v);
    positive(c.period, line, key);
  } else if (key == "potential") {
    c.potential = to_double(v, line, key);
  } else if (key == "shift") {
    c.shift = to_double(v, line, key);
  } else if (key == "dim") {
    c.dim = static_cast<int>(to_int(v, line, key));
    if (c.dim < 1 || c.dim > 3) throw ConfigError(line, "dim must be 1, 2 or 3");
  } else if (key == "seed") {
    const long s = to_int(v, line, key);
    if (s < 0) throw ConfigError(line, "seed must be nonnegative");
    c.seed = static_cast<unsigned>(s);
  } else if (key == "lapse.modes" || key == "shift.modes" || key == "metric.modes" || key == "potential.modes") {
    std::vector<FourierMode> ms;
    for (const auto& item : split(v, ';')) {
      std::stringstream ss(item);
      std::vector<std::string> tok;
      std::string t;
      while (ss >> t) tok.push_back(t);
      if (tok.size() < 3) throw ConfigError(line, key + ": each mode is 'k_0 .. k_d cos sin'");
      FourierMode m;
      for (std::size_t i = 0; i + 2 < tok.size(); ++i) m.k.push_back(static_cast<int>(to_int(tok[i], line, key)));
      m.cos_amp = to_double(tok[tok.size() - 2], line, key);
      m.sin_amp = to_double(tok[tok.size() - 1], line, key);
      ms.push_back(m);
    }
    c.modes[key.substr(0, key.find('.'))] = ms;
  } else if (key == "grid") {
    c.grid = ints(v, line, key, 'x');
    for (int n : c.grid)
      if (n < 3) throw ConfigError(line, "grid sizes must be at least 3");
  } else if (key == "theta") {
    c.thetas = angles(v, line, key);
  } else if (key == "zeta") {
    c.zetas.clear();
    for (const auto& x : split(v, ',')) {
      try {
        c.zetas.push_back(parse_complex(x));
      } catch (const std::exception&) {
        throw ConfigError(line, "zeta: bad complex number '" + x + "'");
      }
    }
  } else if (key == "order") {
    c.order = static_cast<int>(to_int(v, line, key));
    if (c.order < 0 || c.order > 8) throw ConfigError(line, "order must be in 0..8");
  } else if (key == "profile") {
    try {
      c.tol = tolerance_profile(v);
    } catch (const ConfigError& e) {
      throw ConfigError(line, e.what());
    }
    c.profile = v;
  } else if (key.rfind("tol.", 0) == 0) {
    const std::string n = key.substr(4);
    std::map<std::string, double*> t = {
        {"wedge", &c.tol.wedge},         {"spectrum", &c.tol.spectrum},       {"resolvent", &c.tol.resolvent},
        {"sector_constant", &c.tol.sector_constant}, {"law", &c.tol.law},     {"contour", &c.tol.contour},
        {"closed_form", &c.tol.closed_form}, {"oracle", &c.tol.oracle},       {"potential", &c.tol.potential},
        {"fit_a0", &c.tol.fit_a0},       {"fit_a1", &c.tol.fit_a1},           {"kernel", &c.tol.kernel},
        {"chapman", &c.tol.chapman},     {"unitary", &c.tol.unitary},         {"closed_gap", &c.tol.closed_gap},
        {"trend_factor", &c.tol.trend_factor}};
    auto it = t.find(n);
    if (it == t.end()) throw ConfigError(line, "unknown tolerance '" + n + "'");
    *it->second = to_double(v, line, key);
    positive(*it->second, line, key);
  } else if (key == "out") {
    if (v.empty()) throw ConfigError(line, "out must not be empty");
    c.out = v;
  } else if (key == "resolvent.samples") {
    c.resolvent_samples = static_cast<int>(to_int(v, line, key));
    if (c.resolvent_samples < 1) throw ConfigError(line, "resolvent.samples must be positive");
  } else if (key == "kernel.levels") {
    c.kernel_levels = ints(v, line, key);
    if (c.kernel_levels.size() < 2) throw ConfigError(line, "kernel.levels needs at least two grids");
    for (std::size_t i = 1; i < c.kernel_levels.size(); ++i)
      if (c.kernel_levels[i] != 2 * c.kernel_levels[i - 1]) throw ConfigError(line, "kernel.levels must double");
  } else if (key == "kernel.period") {
    c.kernel_period = to_double(v, line, key);
    positive(c.kernel_period, line, key);
  } else if (key == "kernel.theta") {
    c.fit_thetas = angles(v, line, key);
  } else if (key == "kernel.fit_points") {
    c.fit_points = static_cast<int>(to_int(v, line, key));
    if (c.fit_points < 4) throw ConfigError(line, "kernel.fit_points must be at least 4");
  } else if (key == "smoothing.grid") {
    c.smoothing_grid = static_cast<int>(to_int(v, line, key));
    if (c.smoothing_grid < 8) throw ConfigError(line, "smoothing.grid must be at least 8");
  } else if (key == "limit.s") {
    c.limit_s = doubles(v, line, key);
    for (double s : c.limit_s)
      if (s < 0) throw ConfigError(line, "limit.s must be nonnegative");
  } else if (key == "limit.theta") {
    c.limit_thetas = angles(v, line, key);
  } else if (key == "limit.probes") {
    c.limit_probes = static_cast<int>(to_int(v, line, key));
    if (c.limit_probes < 1) throw ConfigError(line, "limit.probes must be positive");
  } else if (key == "limit.rank") {
    c.limit_rank = static_cast<int>(to_int(v, line, key));
    if (c.limit_rank < 1) throw ConfigError(line, "limit.rank must be positive");
  } else {
    throw ConfigError(line, "unknown key '" + key + "'");
  }
  c.echo.emplace_back(key, v);
}

void validate(const RunConfig& c) {
  const int D = c.preset == "random" ? c.dim + 1 : 2;
  if (static_cast<int>(c.grid.size()) != D)
    throw ConfigError(0, "grid needs " + std::to_string(D) + " sizes for this geometry");
  if (c.thetas.empty()) throw ConfigError(0, "theta list is empty");
  for (double t : c.thetas)
    if (!(t > 0 && t < kPi)) throw ConfigError(0, "theta must lie in (0, pi)");
  for (double t : c.fit_thetas)
    if (!(t > 0 && t < kPi)) throw ConfigError(0, "kernel.theta must lie in (0, pi)");
  for (std::size_t i = 0; i < c.limit_thetas.size(); ++i) {
    if (!(c.limit_thetas[i] > 0 && c.limit_thetas[i] < kPi / 2)) throw ConfigError(0, "limit.theta must lie in (0, pi/2)");
    if (i > 0 && !(c.limit_thetas[i] < c.limit_thetas[i - 1])) throw ConfigError(0, "limit.theta must decrease");
  }
  if (c.zetas.size() < 2) throw ConfigError(0, "zeta needs at least two entries");
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(line, "missing key");
    apply_setting(c, key, s.substr(eq + 1), line);
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot open config '" + path + "'");
  return parse_config(f);
}

AdmField build_geometry(const RunConfig& c) { return build_geometry(c, c.period); }

AdmField build_geometry(const RunConfig& c, double period) {
  AdmField adm;
  if (c.preset == "curved") {
    adm = curved_1p1(period, c.potential, c.shift);
  } else if (c.preset == "flat") {
    adm = AdmField::flat(1, {period, period}, c.potential);
    if (c.shift != 0.0) adm.shift[0].set_constant(c.shift);
  } else {
    adm = random_adm(c.dim, c.seed);
  }
  const int D = adm.dim();
  auto add = [&](const std::string& name, FourierSeries& f) {
    auto it = c.modes.find(name);
    if (it == c.modes.end()) return;
    for (const auto& m : it->second) {
      if (static_cast<int>(m.k.size()) != D)
        throw ConfigError(0, name + ".modes: each mode needs " + std::to_string(D) + " wavenumbers");
      f.add_mode(m);
    }
  };
  add("lapse", adm.lapse);
  add("potential", adm.potential);
  for (auto& s : adm.shift) add("shift", s);
  for (int a = 0; a < adm.d; ++a) add("metric", adm.spatial(a, a));
  adm.validate();
  return adm;
}

}  // namespace wick
