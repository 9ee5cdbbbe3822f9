#include "heatbeam/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace pt = boost::property_tree;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

using Section = std::map<std::string, std::string>;

double parse_double(const std::string& where, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw ParseError(where + ": '" + text + "' is not a finite number");
  }
  return v;
}

long parse_integer(const std::string& where, const std::string& text) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ParseError(where + ": '" + text + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& where, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError(where + ": '" + text + "' is not a boolean");
}

Eigen::MatrixXd parse_matrix(const std::string& where, const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row_text;
  while (std::getline(all, row_text, ';')) {
    std::istringstream row(row_text);
    std::vector<double> row_values;
    std::string token;
    while (row >> token) row_values.push_back(parse_double(where, token));
    if (!row_values.empty()) rows.push_back(std::move(row_values));
  }
  if (rows.empty()) throw ParseError(where + ": empty matrix");
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) {
      throw ParseError(where + ": rows of unequal length");
    }
  }
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Eigen::VectorXd parse_vector(const std::string& where, const std::string& text) {
  const Eigen::MatrixXd m = parse_matrix(where, text);
  if (m.rows() != 1 && m.cols() != 1) {
    throw ParseError(where + ": expected a vector");
  }
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) out += "; ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_number(m(i, j));
    }
  }
  return out;
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += format_number(v[i]);
  }
  return out;
}

// Consumes keys from one section; leftovers are reported as unknown.
class SectionReader {
 public:
  SectionReader(std::string name, Section values)
      : name_(std::move(name)), values_(std::move(values)) {}

  std::optional<std::string> take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }
  std::string where(const std::string& key) const {
    return "[" + name_ + "] " + key;
  }
  double number(const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? parse_double(where(key), *v) : fallback;
  }
  double required_number(const std::string& key) {
    const auto v = take(key);
    if (!v) throw ParseError(where(key) + " is required");
    return parse_double(where(key), *v);
  }
  std::optional<double> number_or_auto(const std::string& key) {
    const auto v = take(key);
    if (!v || *v == "auto") return std::nullopt;
    return parse_double(where(key), *v);
  }
  long integer(const std::string& key, long fallback) {
    const auto v = take(key);
    return v ? parse_integer(where(key), *v) : fallback;
  }
  void finish(const std::string& context = "") const {
    if (values_.empty()) return;
    std::string keys;
    for (const auto& [k, _] : values_) keys += (keys.empty() ? "" : ", ") + k;
    throw UnknownKey("[" + name_ + "] " + keys +
                     (context.empty() ? "" : " (" + context + ")"));
  }

 private:
  std::string name_;
  Section values_;
};

const std::set<std::string> kSections = {"material", "grid",   "time",
                                         "controller", "lyapunov", "output",
                                         "initial",  "tune"};

ControllerSpec read_controller(SectionReader& r, RunConfig& cfg) {
  const auto kind = r.take("kind");
  if (!kind) throw ParseError("[controller] kind is required");
  ControllerSpec ctrl;
  bool dynamic = false;
  if (*kind == "open-loop") {
    ctrl = OpenLoop{};
  } else if (*kind == "static") {
    ctrl = StaticFeedback{r.required_number("xi1"), r.required_number("xi2")};
  } else if (*kind == "scalar") {
    ctrl = ScalarDynamic{r.required_number("xi1"), r.required_number("xi2"),
                         r.number("eta", 0.0)};
    dynamic = true;
  } else if (*kind == "hybrid") {
    HybridFeedback h;
    h.xi1 = r.required_number("xi1");
    const auto need = [&](const char* key) {
      const auto v = r.take(key);
      if (!v) throw ParseError(r.where(key) + " is required");
      return *v;
    };
    h.A = parse_matrix(r.where("A"), need("A"));
    h.b = parse_vector(r.where("b"), need("b"));
    h.c = parse_vector(r.where("c"), need("c"));
    h.d = r.number("d", 0.0);
    h.Gamma = r.number("Gamma", 0.0);
    const auto zeta = r.take("zeta");
    h.zeta = zeta ? parse_vector(r.where("zeta"), *zeta)
                  : Eigen::VectorXd::Zero(h.A.rows());
    ctrl = std::move(h);
    dynamic = true;
  } else {
    throw InvalidController("unknown kind '" + *kind +
                            "' (open-loop, static, scalar, hybrid)");
  }
  if (dynamic) {
    const int n = controller_order(ctrl);
    const auto q = r.take("Q");
    cfg.Q = q ? parse_matrix(r.where("Q"), *q) : Eigen::MatrixXd::Identity(n, n);
    if (const auto path = r.take("certificate")) cfg.certificate = *path;
  }
  r.finish("not used by kind = " + *kind);
  validate_controller(ctrl);
  return ctrl;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  std::map<std::string, Section> sections;
  for (const auto& [name, node] : tree) {
    if (node.empty() && !node.data().empty()) {
      throw UnknownKey("'" + name + "' outside any section");
    }
    if (!kSections.count(name)) throw UnknownKey("section [" + name + "]");
    Section s;
    for (const auto& [key, value] : node) s[key] = value.data();
    sections[name] = std::move(s);
  }
  const auto reader = [&](const std::string& name) {
    const auto it = sections.find(name);
    return SectionReader(name, it == sections.end() ? Section{} : it->second);
  };

  RunConfig cfg;
  {
    auto r = reader("material");
    std::map<std::string, double> raw;
    for (const auto key : kMaterialKeys) {
      const std::string k(key);
      if (const auto v = r.take(k)) raw[k] = parse_double(r.where(k), *v);
    }
    r.finish();
    cfg.material = validate_params(raw);
  }
  {
    auto r = reader("grid");
    cfg.N = static_cast<int>(r.integer("N", cfg.N));
    r.finish();
    if (cfg.N < 2) throw NTooSmall("N = " + std::to_string(cfg.N) + " < 2");
  }
  {
    auto r = reader("time");
    cfg.dt = r.number_or_auto("dt");
    cfg.T = r.number("T", cfg.T);
    cfg.record_every = static_cast<int>(r.integer("record_every", cfg.record_every));
    cfg.solver_tolerance = r.number("solver_tolerance", cfg.solver_tolerance);
    r.finish();
    if (cfg.dt && !(*cfg.dt > 0)) throw InvalidRun("dt must be positive");
    if (!(cfg.T >= 0)) throw InvalidRun("T must be nonnegative");
    if (cfg.record_every < 1) throw InvalidRun("record_every must be >= 1");
    if (!(cfg.solver_tolerance > 0)) throw InvalidRun("solver_tolerance must be positive");
  }
  {
    auto r = reader("controller");
    cfg.controller = read_controller(r, cfg);
    const int n = controller_order(cfg.controller);
    if (n > 0 && (cfg.Q.rows() != n || cfg.Q.cols() != n)) {
      throw DimensionMismatch("Q must be " + std::to_string(n) + " x " +
                              std::to_string(n));
    }
  }
  {
    auto r = reader("lyapunov");
    cfg.b1 = r.number("b1", cfg.b1);
    cfg.delta = r.number_or_auto("delta");
    cfg.fit_start = r.number("fit_start", cfg.fit_start);
    r.finish();
    if (!(cfg.b1 > 0)) {
      throw InvalidParameters({{ParameterViolation::Kind::NonPositive, "b1"}});
    }
    if (cfg.delta && !(*cfg.delta > 0)) throw DeltaOutOfRange("delta must be positive");
    if (!(cfg.fit_start >= 0 && cfg.fit_start < 1)) {
      throw InvalidRun("fit_start must lie in [0, 1)");
    }
  }
  {
    auto r = reader("output");
    if (const auto v = r.take("directory")) cfg.output_dir = *v;
    if (const auto v = r.take("snapshots"))
      cfg.snapshots = parse_bool(r.where("snapshots"), *v);
    r.finish();
  }
  {
    auto r = reader("initial");
    auto& in = cfg.initial;
    if (const auto v = r.take("profile")) in.profile = *v;
    in.k = static_cast<int>(r.integer("k", in.k));
    in.center = r.number("center", in.center);
    in.width = r.number("width", in.width);
    in.amplitude = r.number("amplitude", in.amplitude);
    if (const auto v = r.take("fields")) {
      std::istringstream is(*v);
      in.fields.clear();
      for (std::string f; is >> f;) in.fields.push_back(f);
    }
    if (const auto v = r.take("path")) in.path = *v;
    r.finish();
    static const std::set<std::string> profiles = {"zero", "sine", "gaussian",
                                                   "tabulated"};
    if (!profiles.count(in.profile)) {
      throw UnknownKey("[initial] profile '" + in.profile + "'");
    }
    static const std::set<std::string> fields = {"z", "u1", "u2", "w1", "w2"};
    for (const auto& f : in.fields)
      if (!fields.count(f)) throw UnknownKey("[initial] field '" + f + "'");
    if (in.profile == "tabulated" && in.path.empty()) {
      throw ParseError("[initial] path is required for a tabulated profile");
    }
    if (in.profile == "gaussian" && !(in.width > 0)) {
      throw InvalidRun("[initial] width must be positive");
    }
  }
  {
    auto r = reader("tune");
    auto& box = cfg.tune;
    box.xi1_lo = r.number("xi1_lo", box.xi1_lo);
    box.xi1_hi = r.number("xi1_hi", box.xi1_hi);
    box.xi2_lo = r.number("xi2_lo", box.xi2_lo);
    box.xi2_hi = r.number("xi2_hi", box.xi2_hi);
    box.points = static_cast<int>(r.integer("points", box.points));
    const long threads = r.integer("threads", 0);
    if (threads < 0) throw InvalidRun("[tune] threads must be >= 0");
    cfg.tune_threads = static_cast<unsigned>(threads);
    r.finish();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  const auto base = std::filesystem::path(path).parent_path();
  const auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative())
      p = (base / p).lexically_normal().string();
  };
  resolve(cfg.certificate);
  resolve(cfg.initial.path);
  return cfg;
}

std::string to_ini(const RunConfig& cfg) {
  std::ostringstream os;
  const auto kv = [&](const char* key, const std::string& value) {
    os << key << " = " << value << '\n';
  };
  const auto num = [&](const char* key, double v) { kv(key, format_number(v)); };
  const auto& m = cfg.material;

  os << "[material]\n";
  num("rho", m.rho);
  num("mu", m.mu);
  num("alpha1", m.alpha1);
  num("beta", m.beta);
  num("gamma", m.gamma);
  num("kappa", m.kappa);
  num("l1", m.l1);
  num("l2", m.l2);

  os << "\n[grid]\n";
  kv("N", std::to_string(cfg.N));

  os << "\n[time]\n";
  kv("dt", cfg.dt ? format_number(*cfg.dt) : "auto");
  num("T", cfg.T);
  kv("record_every", std::to_string(cfg.record_every));
  num("solver_tolerance", cfg.solver_tolerance);

  os << "\n[controller]\n";
  kv("kind", to_string(kind_of(cfg.controller)));
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StaticFeedback>) {
          num("xi1", c.xi1);
          num("xi2", c.xi2);
        } else if constexpr (std::is_same_v<T, ScalarDynamic>) {
          num("xi1", c.xi1);
          num("xi2", c.xi2);
          num("eta", c.eta);
        } else if constexpr (std::is_same_v<T, HybridFeedback>) {
          num("xi1", c.xi1);
          kv("A", format_matrix(c.A));
          kv("b", format_vector(c.b));
          kv("c", format_vector(c.c));
          num("d", c.d);
          num("Gamma", c.Gamma);
          kv("zeta", format_vector(c.zeta));
        }
      },
      cfg.controller);
  if (controller_order(cfg.controller) > 0) {
    kv("Q", format_matrix(cfg.Q));
    if (!cfg.certificate.empty()) kv("certificate", cfg.certificate);
  }

  os << "\n[lyapunov]\n";
  num("b1", cfg.b1);
  kv("delta", cfg.delta ? format_number(*cfg.delta) : "auto");
  num("fit_start", cfg.fit_start);

  os << "\n[output]\n";
  kv("directory", cfg.output_dir);
  kv("snapshots", cfg.snapshots ? "true" : "false");

  os << "\n[initial]\n";
  const auto& in = cfg.initial;
  kv("profile", in.profile);
  kv("k", std::to_string(in.k));
  num("center", in.center);
  num("width", in.width);
  num("amplitude", in.amplitude);
  std::string fields;
  for (const auto& f : in.fields) fields += (fields.empty() ? "" : " ") + f;
  kv("fields", fields);
  if (!in.path.empty()) kv("path", in.path);

  os << "\n[tune]\n";
  num("xi1_lo", cfg.tune.xi1_lo);
  num("xi1_hi", cfg.tune.xi1_hi);
  num("xi2_lo", cfg.tune.xi2_lo);
  num("xi2_hi", cfg.tune.xi2_hi);
  kv("points", std::to_string(cfg.tune.points));
  kv("threads", std::to_string(cfg.tune_threads));
  return os.str();
}

}  // namespace heatbeam
