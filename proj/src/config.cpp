// Config parsing, validation, task execution and artifact emission for
// the experiment runner.

#include "pressurelab/config.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pressurelab/entropy.hpp"

namespace plab {

using Json = nlohmann::ordered_json;

ConfigError::ConfigError(std::string p, std::string m)
    : std::runtime_error(p.empty() ? m : p + ": " + m),
      path(std::move(p)),
      message(std::move(m)) {}

TaskCapError::TaskCapError(std::string t, const ResolutionCapError& cause)
    : std::runtime_error("task " + t + ": " + cause.what()),
      task(std::move(t)),
      required(cause.required),
      cap(cause.cap) {}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

const std::vector<std::string> kKnownTasks = {"pressure", "entropy", "variational",
                                              "factor_audit", "inequality_audit"};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void expect_keys(const Json& j, const std::string& path, std::vector<std::string> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(path, "unknown key \"" + it.key() + "\"");
}

int int_field(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

Rational rational_field(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(path, e.what());
    }
  }
  if (j.is_number_float()) return Rational(mpq_class(j.get<double>()));
  throw ConfigError(path, "expected a rational (integer or string like \"3/4\")");
}

Word word_from_text(const std::string& s, const std::string& path) {
  Word w;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        w.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigError(path, "bad symbol \"" + tok + "\"");
      }
    }
    return w;
  }
  for (char c : s) {
    if (c < '0' || c > '9')
      throw ConfigError(path, "word strings use digits (commas for symbols >= 10)");
    w.push_back(c - '0');
  }
  return w;
}

Word word_field(const Json& j, const std::string& path) {
  if (j.is_array()) {
    Word w;
    for (const auto& e : j) {
      if (!e.is_number_integer()) throw ConfigError(path, "word entries must be integers");
      w.push_back(e.get<int>());
    }
    return w;
  }
  if (j.is_string()) return word_from_text(j.get<std::string>(), path);
  throw ConfigError(path, "expected a word (string or array of symbols)");
}

Subshift subshift_field(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  expect_keys(j, path, {"full_shift", "transitions"});
  if (j.contains("full_shift")) {
    const int k = int_field(j["full_shift"], path + ".full_shift");
    if (k < 1) throw ConfigError(path + ".full_shift", "alphabet size must be >= 1");
    return Subshift::full_shift(k);
  }
  if (!j.contains("transitions"))
    throw ConfigError(path, "need \"transitions\" or \"full_shift\"");
  const Json& tj = j["transitions"];
  if (!tj.is_array() || tj.empty())
    throw ConfigError(path + ".transitions", "expected a nonempty 0/1 matrix");
  const int n = static_cast<int>(tj.size());
  std::vector<std::vector<bool>> allowed(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a) {
    const Json& row = tj[a];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ConfigError(path + ".transitions", "row " + std::to_string(a) + " must have " +
                                                   std::to_string(n) + " entries");
    for (int b = 0; b < n; ++b) {
      const Json& e = row[b];
      if (e.is_boolean())
        allowed[a][b] = e.get<bool>();
      else if (e.is_number_integer() && (e.get<int>() == 0 || e.get<int>() == 1))
        allowed[a][b] = e.get<int>() == 1;
      else
        throw ConfigError(path + ".transitions", "entries must be 0 or 1");
    }
  }
  for (int a = 0; a < n; ++a)
    if (std::none_of(allowed[a].begin(), allowed[a].end(), [](bool b) { return b; }))
      throw ConfigError(path + ".transitions",
                        "symbol " + std::to_string(a) + " has no successor");
  for (int b = 0; b < n; ++b) {
    bool any = false;
    for (int a = 0; a < n; ++a) any = any || allowed[a][b];
    if (!any)
      throw ConfigError(path + ".transitions",
                        "symbol " + std::to_string(b) + " has no predecessor");
  }
  try {
    return Subshift(n, std::move(allowed));
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

CylinderFunction cylfn_field(const Subshift& S, const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  expect_keys(j, path, {"window", "values"});
  const int window = j.contains("window") ? int_field(j["window"], path + ".window") : 1;
  if (window < 1) throw ConfigError(path + ".window", "window must be >= 1");
  const std::vector<Word> words = enumerate_words(S, window);
  std::vector<Rational> vals(words.size(), Rational(0));
  if (j.contains("values")) {
    const Json& vj = j["values"];
    if (vj.is_array()) {
      if (vj.size() != words.size())
        throw ConfigError(path + ".values", "expected " + std::to_string(words.size()) +
                                                " values, one per admissible window word "
                                                "in lexicographic order");
      for (std::size_t i = 0; i < words.size(); ++i)
        vals[i] = rational_field(vj[i], path + ".values");
    } else if (vj.is_object()) {
      for (auto it = vj.begin(); it != vj.end(); ++it) {
        const std::string wp = path + ".values." + it.key();
        const Word w = word_from_text(it.key(), wp);
        auto pos = std::lower_bound(words.begin(), words.end(), w);
        if (pos == words.end() || *pos != w)
          throw ConfigError(wp, "not an admissible window word");
        vals[pos - words.begin()] = rational_field(it.value(), wp);
      }
    } else {
      throw ConfigError(path + ".values", "expected an array or a word-to-value object");
    }
  }
  try {
    return CylinderFunction(S, window, std::move(vals));
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

EnergyFunctional energy_field(const Subshift& S, const Json& j, const std::string& path) {
  if (j.is_null()) return EnergyFunctional::zero(S);
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  expect_keys(j, path, {"terms"});
  if (!j.contains("terms") || j["terms"].empty()) return EnergyFunctional::zero(S);
  const Json& terms = j["terms"];
  if (!terms.is_array()) throw ConfigError(path + ".terms", "expected an array");
  std::vector<EnergyFunctional::Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + ".terms[" + std::to_string(i) + "]";
    const Json& tj = terms[i];
    if (!tj.is_object()) throw ConfigError(tp, "expected an object");
    expect_keys(tj, tp, {"outer", "inner"});
    Polynomial outer;
    if (tj.contains("outer")) {
      if (!tj["outer"].is_array()) throw ConfigError(tp + ".outer", "expected coefficients");
      for (const auto& c : tj["outer"])
        outer.coeff.push_back(rational_field(c, tp + ".outer"));
    } else {
      outer.coeff = {Rational(0), Rational(1)};
    }
    if (!tj.contains("inner")) throw ConfigError(tp, "missing \"inner\"");
    out.push_back({std::move(outer), cylfn_field(S, tj["inner"], tp + ".inner")});
  }
  try {
    return EnergyFunctional(std::move(out));
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

CylSet element_field(const Subshift& S, const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of words");
  CylSet acc = CylSet::empty_set(S);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Word w = word_field(j[i], path + "[" + std::to_string(i) + "]");
    try {
      acc = set_union(S, acc, CylSet::cylinder(S, w));
    } catch (const std::exception& e) {
      throw ConfigError(path + "[" + std::to_string(i) + "]", e.what());
    }
  }
  return acc;
}

bool has_task(const ExperimentConfig& cfg, const char* t) {
  return std::find(cfg.tasks.begin(), cfg.tasks.end(), t) != cfg.tasks.end();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const std::exception& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  expect_keys(doc, "config",
              {"system", "energy", "covers", "n_range", "m_list", "tasks", "seed", "precision",
               "resolution_cap", "workers", "entropy_n_max", "factor", "variational"});
  if (!doc.contains("system")) throw ConfigError("system", "missing");
  Subshift S = subshift_field(doc["system"], "system");
  EnergyFunctional E =
      doc.contains("energy") ? energy_field(S, doc["energy"], "energy") : EnergyFunctional::zero(S);
  ExperimentConfig cfg{std::move(S), std::move(E)};

  if (doc.contains("covers")) {
    const Json& cj = doc["covers"];
    if (!cj.is_array()) throw ConfigError("covers", "expected an array");
    for (std::size_t k = 0; k < cj.size(); ++k) {
      const std::string cp = "covers[" + std::to_string(k) + "]";
      const Json& one = cj[k];
      if (!one.is_object()) throw ConfigError(cp, "expected an object");
      expect_keys(one, cp, {"name", "elements"});
      CoverSpec spec;
      spec.name = one.contains("name") ? one["name"].get<std::string>()
                                       : "cover" + std::to_string(k);
      if (!one.contains("elements") || !one["elements"].is_array())
        throw ConfigError(cp, "missing \"elements\"");
      for (std::size_t i = 0; i < one["elements"].size(); ++i)
        spec.cover.elements.push_back(element_field(
            cfg.system, one["elements"][i], cp + ".elements[" + std::to_string(i) + "]"));
      cfg.covers.push_back(std::move(spec));
    }
  }

  if (doc.contains("n_range")) {
    const Json& nj = doc["n_range"];
    if (nj.is_array() && nj.size() == 2) {
      cfg.n_lo = int_field(nj[0], "n_range");
      cfg.n_hi = int_field(nj[1], "n_range");
    } else if (nj.is_number_integer()) {
      cfg.n_lo = 1;
      cfg.n_hi = nj.get<int>();
    } else {
      throw ConfigError("n_range", "expected [lo, hi] or a single upper bound");
    }
  }
  if (doc.contains("m_list")) {
    if (!doc["m_list"].is_array()) throw ConfigError("m_list", "expected an array");
    for (const auto& m : doc["m_list"]) cfg.m_list.push_back(int_field(m, "m_list"));
  }
  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) throw ConfigError("tasks", "expected an array");
    for (const auto& t : doc["tasks"]) {
      if (!t.is_string()) throw ConfigError("tasks", "task names must be strings");
      cfg.tasks.push_back(t.get<std::string>());
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw ConfigError("seed", "expected an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("precision")) {
    const std::string p = doc["precision"].get<std::string>();
    if (p == "float")
      cfg.precision = Precision::Float;
    else if (p == "exact")
      cfg.precision = Precision::Exact;
    else
      throw ConfigError("precision", "expected \"float\" or \"exact\"");
  }
  if (doc.contains("resolution_cap"))
    cfg.resolution_cap = int_field(doc["resolution_cap"], "resolution_cap");
  if (doc.contains("workers")) cfg.workers = int_field(doc["workers"], "workers");
  if (doc.contains("entropy_n_max"))
    cfg.entropy_n_max = int_field(doc["entropy_n_max"], "entropy_n_max");

  if (doc.contains("factor")) {
    const Json& fj = doc["factor"];
    if (!fj.is_object()) throw ConfigError("factor", "expected an object");
    expect_keys(fj, "factor",
                {"source", "window", "map", "n_range", "surjectivity_check_length"});
    if (!fj.contains("source")) throw ConfigError("factor", "missing \"source\" system");
    Subshift src = subshift_field(fj["source"], "factor.source");
    const int window =
        fj.contains("window") ? int_field(fj["window"], "factor.window") : 1;
    if (!fj.contains("map") || !fj["map"].is_object())
      throw ConfigError("factor", "missing \"map\" (source window word -> target symbol)");
    std::map<Word, Symbol> bm;
    for (auto it = fj["map"].begin(); it != fj["map"].end(); ++it) {
      const std::string kp = "factor.map." + it.key();
      bm[word_from_text(it.key(), kp)] = int_field(it.value(), kp);
    }
    int flo = 1, fhi = 3;
    if (fj.contains("n_range")) {
      const Json& nj = fj["n_range"];
      if (!nj.is_array() || nj.size() != 2)
        throw ConfigError("factor.n_range", "expected [lo, hi]");
      flo = int_field(nj[0], "factor.n_range");
      fhi = int_field(nj[1], "factor.n_range");
    }
    int scl = fj.contains("surjectivity_check_length")
                  ? int_field(fj["surjectivity_check_length"], "factor.surjectivity_check_length")
                  : 6;
    try {
      SlidingBlockCode code(std::move(src), cfg.system, window, std::move(bm));
      cfg.factor.emplace(FactorTaskSpec{std::move(code), flo, fhi, scl});
    } catch (const std::exception& e) {
      throw ConfigError("factor", e.what());
    }
  }

  if (doc.contains("variational")) {
    const Json& vj = doc["variational"];
    if (!vj.is_object()) throw ConfigError("variational", "expected an object");
    expect_keys(vj, "variational",
                {"memory", "starts", "max_sweeps", "budget", "n_ent", "golden_iters",
                 "attach_pressure"});
    VariationalTaskSpec& vs = cfg.variational;
    if (vj.contains("memory")) vs.memory = int_field(vj["memory"], "variational.memory");
    if (vj.contains("starts")) vs.opts.starts = int_field(vj["starts"], "variational.starts");
    if (vj.contains("max_sweeps"))
      vs.opts.max_sweeps = int_field(vj["max_sweeps"], "variational.max_sweeps");
    if (vj.contains("budget")) {
      if (!vj["budget"].is_number_integer())
        throw ConfigError("variational.budget", "expected an integer");
      vs.opts.budget = vj["budget"].get<std::int64_t>();
    }
    if (vj.contains("n_ent")) vs.opts.n_ent = int_field(vj["n_ent"], "variational.n_ent");
    if (vj.contains("golden_iters"))
      vs.opts.golden_iters = int_field(vj["golden_iters"], "variational.golden_iters");
    if (vj.contains("attach_pressure")) {
      if (!vj["attach_pressure"].is_boolean())
        throw ConfigError("variational.attach_pressure", "expected a boolean");
      vs.attach_pressure = vj["attach_pressure"].get<bool>();
    }
  }

  cfg.source_text = text;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("", "cannot read config file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  if (cfg.tasks.empty()) out.push_back({"tasks", "empty task list"});
  for (const std::string& t : cfg.tasks)
    if (std::find(kKnownTasks.begin(), kKnownTasks.end(), t) == kKnownTasks.end())
      out.push_back({"tasks", "unknown task \"" + t + "\""});
  if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo)
    out.push_back({"n_range", "need 1 <= lo <= hi"});
  for (int m : cfg.m_list)
    if (m < 0) out.push_back({"m_list", "scales must be >= 0"});
  const bool needs_cover = has_task(cfg, "pressure") || has_task(cfg, "entropy") ||
                           has_task(cfg, "variational") || has_task(cfg, "factor_audit") ||
                           has_task(cfg, "inequality_audit");
  if (needs_cover && cfg.covers.empty())
    out.push_back({"covers", "the requested tasks need at least one cover"});
  for (std::size_t i = 0; i < cfg.covers.size(); ++i) {
    try {
      validate_cover(cfg.system, cfg.covers[i].cover);
    } catch (const std::exception& e) {
      out.push_back({"covers[" + std::to_string(i) + "]",
                     std::string("not a cover: ") + e.what()});
    }
  }
  if (has_task(cfg, "factor_audit")) {
    if (!cfg.factor)
      out.push_back({"factor", "factor_audit task needs a factor section"});
    else if (cfg.factor->n_lo < 1 || cfg.factor->n_hi < cfg.factor->n_lo)
      out.push_back({"factor.n_range", "need 1 <= lo <= hi"});
  }
  if (cfg.workers < 1) out.push_back({"workers", "must be >= 1"});
  if (cfg.entropy_n_max < 1) out.push_back({"entropy_n_max", "must be >= 1"});
  if (cfg.resolution_cap < 0) out.push_back({"resolution_cap", "must be >= 0"});
  if (cfg.variational.memory < 1) out.push_back({"variational.memory", "must be >= 1"});
  if (cfg.variational.opts.starts < 1) out.push_back({"variational.starts", "must be >= 1"});
  if (cfg.variational.opts.budget < 1) out.push_back({"variational.budget", "must be >= 1"});
  return out;
}

std::vector<Diagnostic> validate_text(const std::string& text) {
  try {
    return validate(parse_config(text));
  } catch (const ConfigError& e) {
    return {{e.path, e.message}};
  }
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const Diagnostic& d : diags) {
    Json one;
    one["path"] = d.path;
    one["message"] = d.message;
    arr.push_back(one);
  }
  return arr.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& cfg, const std::string& output_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);

  RunManifest man;
  man.config_hash = hex64(fnv1a64(cfg.source_text));
  man.tool_version = "pressurelab 0.1.0";
  man.table_version = "1";
  man.seed = cfg.seed;
  man.precision = cfg.precision == Precision::Exact ? "exact" : "float";

  const Subshift& S = cfg.system;
  const EnergyFunctional& E = cfg.energy;
  const SearchCaps caps{cfg.resolution_cap};

  Json audits = Json::array();
  int passed = 0, failed = 0;
  auto note_audit = [&](const std::string& task, const std::string& name, int n, bool ok) {
    Json a;
    a["task"] = task;
    a["name"] = name;
    if (n >= 0) a["n"] = n;
    a["ok"] = ok;
    audits.push_back(a);
    (ok ? passed : failed) += 1;
  };
  auto write_file = [&](const std::string& name, const std::string& content) {
    const fs::path p = fs::path(output_dir) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << content;
    man.outputs.push_back(name);
  };
  auto timed = [&](const std::string& task, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    man.timings.push_back({task, dt.count()});
  };

  std::optional<PressureReport> pressure_cache;
  auto get_pressure = [&](const char* task) -> const PressureReport& {
    if (!pressure_cache) {
      try {
        pressure_cache = pressure_report(S, cfg.covers.front().cover, E, cfg.n_lo, cfg.n_hi,
                                         cfg.m_list, cfg.precision, caps, 0, cfg.workers);
      } catch (const ResolutionCapError& e) {
        throw TaskCapError(task, e);
      }
    }
    return *pressure_cache;
  };

  if (has_task(cfg, "pressure")) {
    timed("pressure", [&] {
      const PressureReport& rep = get_pressure("pressure");
      std::ostringstream csv;
      csv << "# pressurelab pressure table v" << man.table_version << "\n";
      csv << "# cover=" << cfg.covers.front().name << " precision=" << man.precision
          << " m_eps=" << rep.m_eps << " tau_hat=" << rational_to_string(rep.tau_hat)
          << "\n";
      csv << "n,log_p1,log_p2,log_p3,log_p4,rate_p1,rate_p2,rate_p3,rate_p4";
      for (int m : rep.m_list) csv << ",log_Pn_m" << m << ",log_Qn_m" << m;
      csv << ",audit_ok\n";
      for (const PressureRow& r : rep.rows) {
        csv << r.n << ',' << fmt_double(r.p1.log_value) << ',' << fmt_double(r.p2.log_value)
            << ',' << fmt_double(r.p3.log_value) << ',' << fmt_double(r.p4.log_value);
        csv << ',' << fmt_double(r.p1.rate(r.n)) << ',' << fmt_double(r.p2.rate(r.n)) << ','
            << fmt_double(r.p3.rate(r.n)) << ',' << fmt_double(r.p4.rate(r.n));
        for (std::size_t i = 0; i < rep.m_list.size(); ++i)
          csv << ',' << fmt_double(r.pn[i].second.log_value) << ','
              << fmt_double(r.qn[i].second.log_value);
        csv << ',' << (r.audit.all_ok() ? 1 : 0) << '\n';
      }
      write_file("pressure.csv", csv.str());
      for (const PressureRow& r : rep.rows)
        note_audit("pressure", "inequalities", r.n, r.audit.all_ok());
    });
  }

  if (has_task(cfg, "entropy")) {
    timed("entropy", [&] {
      std::ostringstream csv;
      csv << "# pressurelab entropy table v" << man.table_version << "\n";
      csv << "cover,n,rate_log_count\n";
      for (const CoverSpec& cs : cfg.covers) {
        const EntropyRateEstimate est =
            topological_cover_entropy(S, cs.cover, cfg.entropy_n_max);
        for (const auto& [n, v] : est.per_n)
          csv << cs.name << ',' << n << ',' << fmt_double(v) << '\n';
      }
      write_file("entropy.csv", csv.str());
    });
  }

  if (has_task(cfg, "variational")) {
    timed("variational", [&] {
      OptimizeOptions o = cfg.variational.opts;
      o.seed = cfg.seed;
      o.prec = cfg.precision;
      o.caps = caps;
      if (cfg.variational.attach_pressure) {
        o.pressure_n_lo = cfg.n_lo;
        o.pressure_n_hi = cfg.n_hi;
      }
      std::optional<VariationalReport> r;
      try {
        r = optimize(S, cfg.covers.front().cover, E, cfg.variational.memory, o);
      } catch (const ResolutionCapError& e) {
        throw TaskCapError("variational", e);
      }
      Json vj;
      vj["memory"] = r->memory;
      vj["best_value"] = r->best_value;
      vj["entropy_term"] = r->entropy_term;
      vj["energy_term"] = r->energy_term;
      vj["entropy_truncation"] = r->entropy_truncation;
      vj["evaluations"] = r->evaluations;
      vj["budget_exhausted"] = r->budget_exhausted;
      Json rows = Json::array();
      for (const auto& row : r->best_measure.rows()) {
        Json jr = Json::array();
        for (const Rational& q : row) jr.push_back(rational_to_string(q));
        rows.push_back(jr);
      }
      vj["kernel"] = rows;
      Json stat = Json::array();
      for (const Rational& q : r->best_measure.stationary())
        stat.push_back(rational_to_string(q));
      vj["stationary"] = stat;
      if (r->pressure_rate_window) {
        vj["pressure_rate_low"] = r->pressure_rate_window->low;
        vj["pressure_rate_high"] = r->pressure_rate_window->high;
        vj["gap"] = r->gap;
      }
      vj["abundance_note"] = r->abundance_note;
      write_file("variational.json", vj.dump(2) + "\n");
      if (r->pressure_rate_window)
        note_audit("variational", "value_below_rate_band", -1,
                   r->best_value <= r->pressure_rate_window->high + 0.1);
    });
  }

  if (has_task(cfg, "factor_audit")) {
    timed("factor_audit", [&] {
      const FactorTaskSpec& fs_ = *cfg.factor;
      std::optional<FactorPressureAudit> a;
      try {
        a = factor_pressure_identity(fs_.code, cfg.covers.front().cover, E, fs_.n_lo, fs_.n_hi,
                                     cfg.precision, caps, fs_.surjectivity_check_length);
      } catch (const ResolutionCapError& e) {
        throw TaskCapError("factor_audit", e);
      }
      note_audit("factor_audit", "surjective_to_checked_length", -1, a->surjective_to_length);
      for (const auto& row : a->rows)
        note_audit("factor_audit", "p1_identity", row.n, row.equal);
    });
  }

  if (has_task(cfg, "inequality_audit")) {
    timed("inequality_audit", [&] {
      const PressureReport& rep = get_pressure("inequality_audit");
      for (const PressureRow& r : rep.rows) {
        note_audit("inequality_audit", "chain_inf_le_sup", r.n, r.audit.chain_inf_le_sup);
        note_audit("inequality_audit", "p1_le_p2_shifted", r.n, r.audit.p1_le_p2_shifted);
        note_audit("inequality_audit", "p3_le_p4_shifted", r.n, r.audit.p3_le_p4_shifted);
        note_audit("inequality_audit", "p3_le_qn_shifted", r.n, r.audit.p3_le_qn_shifted);
        note_audit("inequality_audit", "qn_le_pn_le_p2", r.n, r.audit.qn_le_pn_le_p2);
        note_audit("inequality_audit", "p4_le_qn", r.n, r.audit.p4_le_qn);
      }
    });
  }

  Json aj;
  aj["passed"] = passed;
  aj["failed"] = failed;
  aj["audits"] = audits;
  write_file("audits.json", aj.dump(2) + "\n");

  man.audits_passed = passed;
  man.audits_failed = failed;

  Json mj;
  mj["config_hash"] = man.config_hash;
  mj["tool_version"] = man.tool_version;
  mj["table_version"] = man.table_version;
  mj["seed"] = man.seed;
  mj["precision"] = man.precision;
  Json tj = Json::array();
  for (const TaskTiming& t : man.timings) {
    Json one;
    one["task"] = t.task;
    one["seconds"] = t.seconds;
    tj.push_back(one);
  }
  mj["timings"] = tj;
  mj["audits_passed"] = man.audits_passed;
  mj["audits_failed"] = man.audits_failed;
  Json oj = Json::array();
  for (const std::string& o : man.outputs) oj.push_back(o);
  oj.push_back("manifest.json");
  mj["outputs"] = oj;
  write_file("manifest.json", mj.dump(2) + "\n");

  return man;
}

}  // namespace plab
