#include "sfdoa/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sfdoa/csv.hpp"
#include "sfdoa/error.hpp"

namespace sfdoa::config {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const Document& doc, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << doc.path;
  if (line > 0) os << ":" << line;
  os << ": " << what;
  throw ConfigError(os.str());
}

class Section {
 public:
  Section(const Document& doc, const std::string& name, std::set<std::string> allowed)
      : doc_(doc), name_(name) {
    const auto it = doc.sections.find(name);
    if (it == doc.sections.end()) return;
    entries_ = &it->second;
    for (const auto& e : *entries_) {
      if (!allowed.count(e.key)) fail(doc, e.line, "unknown key '" + e.key + "' in [" + name + "]");
    }
  }

  bool present() const { return entries_ != nullptr; }

  const Entry* find(const std::string& key) const {
    if (!entries_) return nullptr;
    const Entry* hit = nullptr;
    for (const auto& e : *entries_) {
      if (e.key != key) continue;
      if (hit) fail(doc_, e.line, "duplicate key '" + key + "' in [" + name_ + "]");
      hit = &e;
    }
    return hit;
  }

  std::vector<const Entry*> all(const std::string& key) const {
    std::vector<const Entry*> out;
    if (entries_) {
      for (const auto& e : *entries_) {
        if (e.key == key) out.push_back(&e);
      }
    }
    return out;
  }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) fail(doc_, 0, "missing key '" + key + "' in [" + name_ + "]");
    return *e;
  }

  double number(const Entry& e) const {
    double v = 0.0;
    if (!csv::parse_double(e.value, v) || !std::isfinite(v)) fail(doc_, e.line, "'" + e.key + "' is not a number");
    return v;
  }

  long integer(const Entry& e) const {
    long v = 0;
    if (!csv::parse_long(e.value, v)) fail(doc_, e.line, "'" + e.key + "' is not an integer");
    return v;
  }

  double number_or(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? number(*e) : fallback;
  }

  long integer_or(const std::string& key, long fallback) const {
    const Entry* e = find(key);
    return e ? integer(*e) : fallback;
  }

  std::vector<double> numbers(const Entry& e) const {
    try {
      return parse_number_list(e.value);
    } catch (const ConfigError& err) {
      fail(doc_, e.line, "'" + e.key + "': " + err.what());
    }
  }

  std::vector<int> integers(const Entry& e) const {
    std::vector<int> out;
    for (double v : numbers(e)) {
      if (v != std::round(v)) fail(doc_, e.line, "'" + e.key + "' must hold integers");
      out.push_back(static_cast<int>(std::lround(v)));
    }
    return out;
  }

 private:
  const Document& doc_;
  std::string name_;
  const std::vector<Entry>* entries_ = nullptr;
};

void check_sections(const Document& doc, const std::set<std::string>& allowed) {
  for (const auto& [name, entries] : doc.sections) {
    if (!allowed.count(name)) fail(doc, entries.empty() ? 0 : entries.front().line, "unknown section [" + name + "]");
  }
}

void apply_estimate_sections(const Document& doc, EstimateOptions& opts) {
  const Section est(doc, "estimate", {"p", "gamma_db", "root_tol", "cluster_deg", "certificate_tol"});
  if (const Entry* e = est.find("p")) {
    const long p = est.integer(*e);
    if (p < 3 || p % 2 == 0) fail(doc, e->line, "'p' must be odd and at least 3");
    opts.p = static_cast<int>(p);
  }
  opts.gamma_db = est.number_or("gamma_db", opts.gamma_db);
  if (opts.gamma_db < -200.0 || opts.gamma_db > -40.0) fail(doc, 0, "'gamma_db' must lie in [-200, -40]");
  opts.root_tol = est.number_or("root_tol", opts.root_tol);
  opts.cluster_deg = est.number_or("cluster_deg", opts.cluster_deg);
  opts.certificate_tol = est.number_or("certificate_tol", opts.certificate_tol);
  if (!(opts.root_tol > 0.0) || !(opts.cluster_deg >= 0.0) || !(opts.certificate_tol > 0.0)) {
    fail(doc, 0, "root_tol and certificate_tol must be positive, cluster_deg nonnegative");
  }

  const Section sol(doc, "solver", {"gap_tol", "max_iter", "psd_slack"});
  opts.solver.gap_tol = sol.number_or("gap_tol", opts.solver.gap_tol);
  opts.solver.max_iter = static_cast<int>(sol.integer_or("max_iter", opts.solver.max_iter));
  opts.solver.psd_slack = sol.number_or("psd_slack", opts.solver.psd_slack);
  if (!(opts.solver.gap_tol > 0.0) || opts.solver.max_iter < 1 || !(opts.solver.psd_slack >= 0.0)) {
    fail(doc, 0, "solver options must be positive");
  }
}

ArrayGeometry geometry_from(const Document& doc) {
  const Section g(doc, "geometry",
                  {"type", "sensors", "radius_over_lambda", "min_spacing_over_lambda", "max_radius_over_lambda",
                   "seed", "path", "reference"});
  if (!g.present()) fail(doc, 0, "missing section [geometry]");
  const Entry& type = g.require("type");
  try {
    if (type.value == "uca") {
      const long m = g.integer(g.require("sensors"));
      if (m < 2) fail(doc, 0, "'sensors' must be at least 2");
      return make_uca(static_cast<std::size_t>(m), g.number(g.require("radius_over_lambda")));
    }
    if (type.value == "rpa") {
      const long m = g.integer(g.require("sensors"));
      if (m < 1) fail(doc, 0, "'sensors' must be positive");
      return make_rpa(static_cast<std::size_t>(m), g.number(g.require("min_spacing_over_lambda")),
                      g.number(g.require("max_radius_over_lambda")),
                      static_cast<std::uint64_t>(g.integer_or("seed", 1)));
    }
    if (type.value == "csv") {
      std::filesystem::path path = g.require("path").value;
      if (path.is_relative()) path = std::filesystem::path(doc.path).parent_path() / path;
      auto mode = ReferenceMode::Centroid;
      if (const Entry* r = g.find("reference")) {
        if (r->value == "origin") {
          mode = ReferenceMode::Origin;
        } else if (r->value != "centroid") {
          fail(doc, r->line, "'reference' must be centroid or origin");
        }
      }
      return load_geometry_csv(path.string(), mode);
    }
  } catch (const ArgumentError& e) {
    fail(doc, type.line, std::string("geometry: ") + e.what());
  }
  fail(doc, type.line, "geometry type must be uca, rpa or csv");
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list item");
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      double v = 0.0;
      if (!csv::parse_double(item, v) || !std::isfinite(v)) throw ConfigError("bad number '" + item + "'");
      out.push_back(v);
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    double a = 0.0, step = 0.0, b = 0.0;
    if (c2 == std::string::npos || !csv::parse_double(trim(item.substr(0, c1)), a) ||
        !csv::parse_double(trim(item.substr(c1 + 1, c2 - c1 - 1)), step) ||
        !csv::parse_double(trim(item.substr(c2 + 1)), b)) {
      throw ConfigError("bad range '" + item + "' (expected a:step:b)");
    }
    if (!(step > 0.0) || b < a) throw ConfigError("range '" + item + "' needs step > 0 and a <= b");
    const long count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (count > 100000) throw ConfigError("range '" + item + "' is too long");
    for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

Document parse_document(const std::string& text, const std::string& path) {
  Document doc;
  doc.path = path;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) fail(doc, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      doc.sections[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(doc, line, "expected key = value");
    if (section.empty()) fail(doc, line, "key outside of a section");
    Entry e{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (e.key.empty() || e.value.empty()) fail(doc, line, "empty key or value");
    doc.sections[section].push_back(std::move(e));
  }
  return doc;
}

Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path, path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path);
}

Scenario scenario_from(const Document& doc) {
  check_sections(doc, {"geometry", "sources", "estimate", "solver"});
  Scenario scn{geometry_from(doc), {}, {}};
  const Section src(doc, "sources", {"source"});
  for (const Entry* e : src.all("source")) {
    std::vector<double> v;
    try {
      v = parse_number_list(e->value);
    } catch (const ConfigError& err) {
      fail(doc, e->line, std::string("source: ") + err.what());
    }
    if (v.size() < 1 || v.size() > 3 || e->value.find(':') != std::string::npos) {
      fail(doc, e->line, "source expects 'angle_deg[, magnitude[, phase_deg]]'");
    }
    const double mag = v.size() > 1 ? v[1] : 1.0;
    const double phase = v.size() > 2 ? v[2] : 0.0;
    scn.sources.push_back({wrap_angle(deg2rad(v[0])), std::polar(mag, deg2rad(phase))});
  }
  if (scn.sources.empty()) fail(doc, 0, "[sources] needs at least one 'source' line");
  apply_estimate_sections(doc, scn.options);
  return scn;
}

Scenario load_scenario(const std::string& path) { return scenario_from(read_document(path)); }

ExperimentConfig sweep_from(const Document& doc) {
  check_sections(doc, {"sweep", "estimate", "solver"});
  const Section s(doc, "sweep",
                  {"sensors", "p", "radius_over_lambda", "sources", "min_separation_deg", "trials", "threshold_deg",
                   "seed", "jobs"});
  if (!s.present()) fail(doc, 0, "missing section [sweep]");
  ExperimentConfig cfg;
  cfg.sensors = static_cast<int>(s.integer_or("sensors", cfg.sensors));
  cfg.p = s.integers(s.require("p"));
  cfg.radius_over_lambda = s.numbers(s.require("radius_over_lambda"));
  cfg.sources = s.integers(s.require("sources"));
  cfg.min_separation_deg = s.numbers(s.require("min_separation_deg"));
  cfg.trials = static_cast<int>(s.integer_or("trials", cfg.trials));
  cfg.threshold_deg = s.number_or("threshold_deg", cfg.threshold_deg);
  cfg.seed = static_cast<std::uint64_t>(s.integer_or("seed", static_cast<long>(cfg.seed)));
  cfg.jobs = static_cast<int>(s.integer_or("jobs", cfg.jobs));
  apply_estimate_sections(doc, cfg.options);
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    fail(doc, 0, e.what());
  }
  return cfg;
}

ExperimentConfig load_sweep(const std::string& path) { return sweep_from(read_document(path)); }

}  // namespace sfdoa::config
