#include "hamosc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hamosc/errors.hpp"
#include "json.hpp"

namespace hamosc {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

constexpr Eigen::Index kMaxDim = 32;

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + " must be finite");
  return x;
}

double positive(const json& v, const std::string& where) {
  const double x = number(v, where);
  if (!(x > 0.0)) throw ConfigError(where + " must be positive");
  return x;
}

ScalarExpr expression(const json& v, const std::string& where) {
  if (v.is_number()) return ScalarExpr::constant(number(v, where));
  if (!v.is_string()) throw ConfigError(where + " must be an expression string");
  try {
    return parse_expr(v.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(e, where);
  }
}

std::string at(const std::string& name, std::size_t i, std::size_t j) {
  return name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void check_shape(const json& v, Eigen::Index n, const std::string& name) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(n)) {
    throw ConfigError(name + " must be an array of " + std::to_string(n) + " rows");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != static_cast<std::size_t>(n)) {
      throw ConfigError(name + "[" + std::to_string(i) + "] must have " + std::to_string(n) +
                        " entries");
    }
  }
}

TimeMatrix expr_matrix(const json& v, Eigen::Index n, const std::string& name) {
  check_shape(v, n, name);
  std::vector<ComplexExpr> entries;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      const json& e = v[i][j];
      const auto where = at(name, i, j);
      ComplexExpr ce;
      if (e.is_object()) {
        only_keys(e, {"re", "im"}, where);
        if (!e.contains("re")) throw ConfigError(where + " needs a 're' field");
        ce.re = expression(e["re"], where + ".re");
        ce.im = e.contains("im") ? expression(e["im"], where + ".im") : ScalarExpr::constant(0.0);
      } else {
        ce.re = expression(e, where);
        ce.im = ScalarExpr::constant(0.0);
      }
      entries.push_back(std::move(ce));
    }
  }
  return TimeMatrix(name, n, std::move(entries));
}

CMatrix numeric_matrix(const json& v, Eigen::Index n, const std::string& name) {
  check_shape(v, n, name);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& e = v[i][j];
      const auto where = at(name, i, j);
      if (e.is_object()) {
        only_keys(e, {"re", "im"}, where);
        if (!e.contains("re")) throw ConfigError(where + " needs a 're' field");
        m(i, j) = Complex(number(e["re"], where + ".re"),
                          e.contains("im") ? number(e["im"], where + ".im") : 0.0);
      } else {
        m(i, j) = number(e, where);
      }
    }
  }
  return m;
}

}  // namespace

Config parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(offset, {"valid JSON"}, e.what());
  } catch (const json::exception& e) {
    // number overflow and similar value errors carry no byte position
    throw ConfigError(std::string("unreadable JSON value: ") + e.what());
  }
  only_keys(doc, {"n", "t0", "A", "B", "C", "mu", "p", "phi0", "psi0", "integrator", "criteria"},
            "config");
  for (const char* key : {"n", "A", "B", "C"}) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  }
  if (!doc["n"].is_number_integer()) throw ConfigError("n must be an integer");
  const auto n64 = doc["n"].get<std::int64_t>();
  if (n64 < 1 || n64 > kMaxDim) throw ConfigError("n must lie in [1, 32]");
  const auto n = static_cast<Eigen::Index>(n64);

  Config cfg;
  SystemSpec& s = cfg.spec;
  s.n = n;
  s.t0 = doc.contains("t0") ? number(doc["t0"], "t0") : 0.0;
  s.A = expr_matrix(doc["A"], n, "A");
  s.B = expr_matrix(doc["B"], n, "B");
  s.C = expr_matrix(doc["C"], n, "C");
  s.mu = doc.contains("mu") ? expression(doc["mu"], "mu") : ScalarExpr::constant(0.0);
  s.p = doc.contains("p") ? expression(doc["p"], "p") : ScalarExpr::constant(1.0);
  if (doc.contains("phi0")) cfg.compare.phi0 = numeric_matrix(doc["phi0"], n, "phi0");
  if (doc.contains("psi0")) cfg.compare.psi0 = numeric_matrix(doc["psi0"], n, "psi0");

  cfg.T = s.t0 + 50.0;
  if (doc.contains("integrator")) {
    const json& ig = doc["integrator"];
    only_keys(ig, {"rtol", "atol", "T"}, "integrator");
    if (ig.contains("rtol")) cfg.compare.integrator.rtol = positive(ig["rtol"], "integrator.rtol");
    if (ig.contains("atol")) cfg.compare.integrator.atol = positive(ig["atol"], "integrator.atol");
    if (ig.contains("T")) cfg.T = number(ig["T"], "integrator.T");
    if (!(cfg.T > s.t0)) throw ConfigError("integrator.T must exceed t0");
  }

  auto& co = cfg.compare.criteria;
  co.divergence.t_max = s.t0 + 200.0;
  if (doc.contains("criteria")) {
    const json& c = doc["criteria"];
    only_keys(c, {"T_max", "checkpoints", "threshold", "K", "g_weight"}, "criteria");
    if (c.contains("T_max")) co.divergence.t_max = number(c["T_max"], "criteria.T_max");
    if (!(co.divergence.t_max > s.t0)) throw ConfigError("criteria.T_max must exceed t0");
    if (c.contains("checkpoints")) {
      if (!c["checkpoints"].is_number_integer()) throw ConfigError("criteria.checkpoints must be an integer");
      const auto m = c["checkpoints"].get<std::int64_t>();
      if (m < 4 || m > 20) throw ConfigError("criteria.checkpoints must lie in [4, 20]");
      co.divergence.checkpoints = static_cast<int>(m);
    }
    if (c.contains("threshold")) co.divergence.threshold = number(c["threshold"], "criteria.threshold");
    if (c.contains("K")) co.K = numeric_matrix(c["K"], n, "criteria.K");
    if (c.contains("g_weight")) co.g_weight = numeric_matrix(c["g_weight"], n, "criteria.g_weight");
  }
  cfg.hash = fnv1a64(doc.dump());
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return parse_config(buf.str());
}

}  // namespace hamosc
