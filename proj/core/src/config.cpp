#include "nemato/config.hpp"

#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace nemato {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct RawConfig {
  // section -> key -> value (section "" is top level)
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::vector<std::string> issues;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::string section;
  std::set<std::string> seen_sections{""};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        raw.issues.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!seen_sections.insert(section).second)
        raw.issues.push_back("duplicate section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raw.issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      raw.issues.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    auto& sec = raw.sections[section];
    if (!sec.emplace(key, value).second)
      raw.issues.push_back("duplicate key '" + key + "' in section [" + section + "]");
  }
  return raw;
}

// inline table { k = v, k = v } with string or numeric values
std::map<std::string, std::string> parse_inline_table(const std::string& value,
                                                      std::vector<std::string>& issues,
                                                      const std::string& where) {
  std::map<std::string, std::string> out;
  std::string v = trim(value);
  if (v.size() < 2 || v.front() != '{' || v.back() != '}') {
    issues.push_back(where + ": expected { key = value, ... }");
    return out;
  }
  v = v.substr(1, v.size() - 2);
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      issues.push_back(where + ": malformed entry '" + item + "'");
      continue;
    }
    std::string key = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    out[key] = val;
  }
  return out;
}

std::vector<double> parse_numbers(const std::string& value, std::vector<std::string>& issues,
                                  const std::string& where) {
  std::vector<double> out;
  std::istringstream in(value);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      issues.push_back(where + ": '" + tok + "' is not a number");
      return out;
    }
    out.push_back(x);
  }
  if (out.empty()) issues.push_back(where + ": expected at least one number");
  return out;
}

class Reader {
 public:
  Reader(RawConfig raw) : raw_(std::move(raw)), issues_(std::move(raw_.issues)) {}

  bool has(const std::string& sec, const std::string& key) {
    auto s = raw_.sections.find(sec);
    return s != raw_.sections.end() && s->second.count(key) > 0;
  }
  std::string take(const std::string& sec, const std::string& key) {
    consumed_[sec].insert(key);
    return raw_.sections[sec][key];
  }
  std::vector<double> numbers(const std::string& sec, const std::string& key, size_t want = 0) {
    auto v = parse_numbers(take(sec, key), issues_, "[" + sec + "] " + key);
    if (want > 0 && v.size() != want) {
      issues_.push_back("[" + sec + "] " + key + ": expected " + std::to_string(want) +
                        " numbers");
      v.resize(want, 0.0);
    }
    return v;
  }
  double number(const std::string& sec, const std::string& key) { return numbers(sec, key, 1)[0]; }
  std::map<std::string, std::string> table(const std::string& sec, const std::string& key) {
    return parse_inline_table(take(sec, key), issues_, "[" + sec + "] " + key);
  }

  void issue(std::string s) { issues_.push_back(std::move(s)); }

  void finish_unknown_key_scan(const std::set<std::string>& known_sections) {
    for (const auto& [sec, keys] : raw_.sections) {
      if (!known_sections.count(sec)) {
        issues_.push_back("unknown section [" + sec + "]");
        continue;
      }
      for (const auto& [key, value] : keys) {
        (void)value;
        auto c = consumed_.find(sec);
        if (c == consumed_.end() || !c->second.count(key))
          issues_.push_back("unknown key '" + key + "' in section [" + sec + "]");
      }
    }
  }
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  RawConfig raw_;
  std::vector<std::string> issues_;
  std::map<std::string, std::set<std::string>> consumed_;
};

PiecewisePoly poly_from(const std::vector<double>& coeffs) { return Polynomial(coeffs); }

Load read_load(Reader& r, const std::string& name) {
  Load load;
  bool any = false;
  if (r.has("loads", name + "_const")) {
    const auto c = r.numbers("loads", name + "_const", 2);
    load.space.c = Vec(c[0], c[1]);
    any = true;
  }
  if (r.has("loads", name + "_affine")) {
    const auto l = r.numbers("loads", name + "_affine", 4);
    load.space.L = Mat(l[0], l[1], l[2], l[3]);
    any = true;
  }
  if (r.has("loads", name + "_time")) {
    load.time = poly_from(r.numbers("loads", name + "_time"));
  } else if (any) {
    load.time = PiecewisePoly::constant(1.0);
  }
  return load;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Reader r(tokenize(text));
  ExperimentConfig cfg;

  if (r.has("", "seed")) cfg.seed = static_cast<std::uint64_t>(r.number("", "seed"));

  if (r.has("mesh", "n")) {
    const double n = r.number("mesh", "n");
    if (n < 2 || n != static_cast<int>(n))
      r.issue("[mesh] n: must be an integer >= 2");
    else
      cfg.mesh_n = static_cast<int>(n);
  }
  auto read_sides = [&](const char* key, std::vector<std::string>& out) {
    if (!r.has("mesh", key)) return;
    std::istringstream in(r.take("mesh", key));
    out.clear();
    std::string side;
    while (in >> side) {
      if (side != "left" && side != "right" && side != "bottom" && side != "top" && side != "none")
        r.issue(std::string("[mesh] ") + key + ": unknown side '" + side + "'");
      else if (side != "none")
        out.push_back(side);
    }
  };
  read_sides("lambda", cfg.lambda_sides);
  read_sides("sigma", cfg.sigma_sides);
  if (cfg.lambda_sides.empty()) r.issue("[mesh] lambda: the Dirichlet part must be nonempty");

  if (r.has("mesh", "confine")) {
    const auto b = r.numbers("mesh", "confine", 4);
    if (!(b[0] < b[2]) || !(b[1] < b[3]))
      r.issue("[mesh] confine: expected x0 y0 x1 y1 with x0 < x1, y0 < y1");
    else
      cfg.confinement = Box{Vec(b[0], b[1]), Vec(b[2], b[3])};
  }

  if (r.has("orlicz", "nfunction")) {
    auto t = r.table("orlicz", "nfunction");
    const std::string family = t.count("family") ? t["family"] : "";
    try {
      if (family == "power") {
        const double p = t.count("p") ? std::stod(t["p"]) : 2.0;
        const double coeff = t.count("coeff") ? std::stod(t["coeff"]) : 1.0;
        cfg.nfunction = NFunction::power(p, coeff);
      } else if (family == "powerlog") {
        const double p = t.count("p") ? std::stod(t["p"]) : 1.0;
        const double q = t.count("q") ? std::stod(t["q"]) : 1.0;
        cfg.nfunction = NFunction::power_log(p, q);
      } else {
        r.issue("[orlicz] nfunction: family must be \"power\" or \"powerlog\"");
      }
    } catch (const std::exception& ex) {
      r.issue(std::string("[orlicz] nfunction: ") + ex.what());
    }
  }

  if (r.has("material", "mu")) cfg.mu = r.number("material", "mu");
  if (r.has("material", "zeta")) cfg.zeta = r.number("material", "zeta");
  if (!(cfg.mu > 0.0)) r.issue("[material] mu: must be positive");
  if (!(cfg.zeta > 1.0)) r.issue("[material] zeta: must be > 1");
  if (r.has("material", "sigma")) {
    auto t = r.table("material", "sigma");
    const std::string family = t.count("family") ? t["family"] : "";
    auto get = [&](const char* k, double dflt) { return t.count(k) ? std::stod(t[k]) : dflt; };
    try {
      if (family == "powerpower")
        cfg.sigma = SigmaFunction::power_power(get("a", 1.0), get("b", 2.0), get("alpha", 2.0),
                                               get("beta", 1.0), get("c", -3.0));
      else if (family == "powerlog")
        cfg.sigma = SigmaFunction::power_log(get("a", 1.0), get("b", 1.0), get("alpha", 2.0),
                                             get("c", 0.0));
      else
        r.issue("[material] sigma: family must be \"powerpower\" or \"powerlog\"");
    } catch (const std::exception& ex) {
      r.issue(std::string("[material] sigma: ") + ex.what());
    }
  }

  cfg.loads.f = read_load(r, "f");
  cfg.loads.g = read_load(r, "g");
  cfg.loads.h = read_load(r, "h");

  if (r.has("time", "T")) cfg.T = r.number("time", "T");
  if (r.has("time", "steps")) cfg.n_steps = static_cast<int>(r.number("time", "steps"));
  if (!(cfg.T > 0.0)) r.issue("[time] T: must be positive");
  if (cfg.n_steps < 1) r.issue("[time] steps: must be >= 1");

  // boundary datum (needs T)
  const double horizon = cfg.T > 0.0 ? cfg.T : 1.0;
  if (r.has("datum", "type")) {
    std::string type = r.take("datum", "type");
    if (type.size() >= 2 && type.front() == '"' && type.back() == '"')
      type = type.substr(1, type.size() - 2);
    try {
      if (type == "identity") {
        cfg.datum = BoundaryDatum::identity(horizon);
      } else if (type == "static") {
        const auto a = r.numbers("datum", "a", 4);
        Vec b(0.0, 0.0);
        if (r.has("datum", "b")) {
          const auto bb = r.numbers("datum", "b", 2);
          b = Vec(bb[0], bb[1]);
        }
        cfg.datum = BoundaryDatum::static_affine(Mat(a[0], a[1], a[2], a[3]), b, horizon);
      } else if (type == "affine_path") {
        auto entry = [&](const char* key, double dflt) {
          if (!r.has("datum", key)) return PiecewisePoly::constant(dflt);
          return poly_from(r.numbers("datum", key));
        };
        std::array<PiecewisePoly, 4> ae = {entry("a11", 1.0), entry("a12", 0.0), entry("a21", 0.0),
                                           entry("a22", 1.0)};
        std::array<PiecewisePoly, 2> be = {entry("b1", 0.0), entry("b2", 0.0)};
        cfg.datum = BoundaryDatum(std::move(ae), std::move(be), horizon);
      } else {
        r.issue("[datum] type: must be identity, static, or affine_path");
      }
    } catch (const std::exception& ex) {
      r.issue(std::string("[datum] ") + ex.what());
    }
  } else {
    cfg.datum = BoundaryDatum::identity(horizon);
  }

  if (r.has("solver", "max_sweeps")) cfg.solver.max_sweeps = static_cast<int>(r.number("solver", "max_sweeps"));
  if (r.has("solver", "max_inner_iters"))
    cfg.solver.max_inner_iters = static_cast<int>(r.number("solver", "max_inner_iters"));
  if (r.has("solver", "grad_tol")) cfg.solver.grad_tol = r.number("solver", "grad_tol");
  if (r.has("solver", "sweep_tol")) cfg.solver.sweep_tol = r.number("solver", "sweep_tol");
  if (r.has("solver", "huber_eps")) cfg.solver.huber_eps = r.number("solver", "huber_eps");
  if (r.has("solver", "backtrack")) cfg.solver.backtrack = r.number("solver", "backtrack");
  if (r.has("solver", "det_safeguard"))
    cfg.solver.det_safeguard = r.number("solver", "det_safeguard");
  if (r.has("solver", "multistart")) cfg.solver.multistart = static_cast<int>(r.number("solver", "multistart"));
  if (r.has("solver", "stability_competitors"))
    cfg.solver.stability_competitors = static_cast<int>(r.number("solver", "stability_competitors"));
  if (r.has("solver", "stability_tol")) cfg.solver.stability_tol = r.number("solver", "stability_tol");
  if (r.has("solver", "polish"))
    cfg.solver.polish_on_violation = r.number("solver", "polish") != 0.0;
  if (!(cfg.solver.grad_tol > 0.0)) r.issue("[solver] grad_tol: must be positive");
  if (!(cfg.solver.huber_eps >= 0.0)) r.issue("[solver] huber_eps: must be >= 0");
  if (!(cfg.solver.backtrack > 0.0 && cfg.solver.backtrack < 1.0))
    r.issue("[solver] backtrack: must be in (0,1)");

  if (r.has("initial", "m0")) {
    const auto m = r.numbers("initial", "m0", 2);
    if (Vec(m[0], m[1]).norm() < 1e-12)
      r.issue("[initial] m0: must be a nonzero direction");
    else
      cfg.m0 = Vec(m[0], m[1]);
  }

  cfg.solver.T = cfg.T;
  cfg.solver.n_steps = cfg.n_steps;
  cfg.solver.confinement = cfg.confinement;
  cfg.solver.seed = cfg.seed;

  // cross-referential checks
  if (cfg.confinement) {
    const Box& box = *cfg.confinement;
    bool inside = box.contains(Vec(0.0, 0.0), 1e-12) && box.contains(Vec(1.0, 1.0), 1e-12);
    if (!inside) r.issue("[mesh] confine: box must contain the unit square");
    const int grid = 32;
    bool maps_in = true;
    for (int i = 0; i <= grid && maps_in; ++i) {
      const double t = cfg.T * i / grid;
      for (const Vec corner : {box.lo, Vec(box.lo[0], box.hi[1]), Vec(box.hi[0], box.lo[1]), box.hi})
        if (!box.contains(cfg.datum.map(t, corner), 1e-9)) maps_in = false;
    }
    if (!maps_in) r.issue("[datum] does not map the confinement box into itself");
  }

  r.finish_unknown_key_scan(
      {"", "mesh", "orlicz", "material", "loads", "time", "datum", "solver", "initial"});

  if (const char* env = std::getenv("NEMATO_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') {
      cfg.seed = v;
      cfg.solver.seed = v;
    }
  }

  if (!r.issues().empty()) throw ConfigError(r.issues());
  return cfg;
}

}  // namespace nemato
