#include "ocp_cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ocp/error.hpp"

namespace ocp::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  return j;
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("'" + key + "' must be a string");
  return j.get<std::string>();
}

template <class T, class Get>
std::vector<T> scalar_or_list(const json& j, const std::string& key, Get get) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) throw ConfigError("'" + key + "' must not be an empty list");
    for (const auto& e : j) out.push_back(get(e, key));
  } else {
    out.push_back(get(j, key));
  }
  return out;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  require_object(root, "config");
  reject_unknown(root,
                 {"problem", "k", "beta", "n_t", "scheme", "t_f", "diffusivity", "wind", "solver",
                  "prec", "output"},
                 "config");

  RunConfig cfg;
  if (!root.contains("problem")) throw ConfigError("missing required key 'problem'");
  cfg.problem = get_string(root["problem"], "problem");
  if (!root.contains("k")) throw ConfigError("missing required key 'k'");
  cfg.k = scalar_or_list<int>(root["k"], "k", get_int);
  for (int k : cfg.k) check(k >= 1 && k <= 12, "'k' must lie in [1, 12]");

  if (root.contains("beta")) {
    cfg.beta = scalar_or_list<double>(root["beta"], "beta", get_number);
    for (double b : cfg.beta) check(b > 0.0 && b <= 1e12, "'beta' must lie in (0, 1e12]");
  }
  if (root.contains("n_t")) {
    cfg.n_t = get_int(root["n_t"], "n_t");
    check(*cfg.n_t >= 2 && *cfg.n_t <= 10000, "'n_t' must lie in [2, 10000]");
  }
  if (root.contains("scheme")) cfg.scheme = parse_time_scheme(get_string(root["scheme"], "scheme"));
  if (root.contains("t_f")) {
    cfg.t_f = get_number(root["t_f"], "t_f");
    check(*cfg.t_f > 0.0, "'t_f' must be positive");
  }
  if (root.contains("diffusivity")) {
    cfg.diffusivity = get_number(root["diffusivity"], "diffusivity");
    check(*cfg.diffusivity > 0.0, "'diffusivity' must be positive");
  }
  if (root.contains("wind")) cfg.wind = get_string(root["wind"], "wind");

  if (root.contains("solver")) {
    const json& s = require_object(root["solver"], "'solver'");
    reject_unknown(s, {"rtol", "restart", "maxit"}, "'solver'");
    if (s.contains("rtol")) cfg.solver.rtol = get_number(s["rtol"], "solver.rtol");
    if (s.contains("restart")) cfg.solver.restart = get_int(s["restart"], "solver.restart");
    if (s.contains("maxit")) cfg.solver.maxit = get_int(s["maxit"], "solver.maxit");
    check(cfg.solver.rtol > 0.0 && cfg.solver.rtol < 1.0, "'solver.rtol' must lie in (0, 1)");
    check(cfg.solver.restart >= 1 && cfg.solver.restart <= 1000,
          "'solver.restart' must lie in [1, 1000]");
    check(cfg.solver.maxit >= 1, "'solver.maxit' must be at least 1");
  }
  if (root.contains("prec")) {
    const json& p = require_object(root["prec"], "'prec'");
    reject_unknown(p, {"cheb_sweeps", "mg_cycles", "exact_inner"}, "'prec'");
    if (p.contains("cheb_sweeps")) cfg.prec.cheb_sweeps = get_int(p["cheb_sweeps"], "prec.cheb_sweeps");
    if (p.contains("mg_cycles")) cfg.prec.mg_cycles = get_int(p["mg_cycles"], "prec.mg_cycles");
    if (p.contains("exact_inner")) cfg.prec.exact_inner = get_bool(p["exact_inner"], "prec.exact_inner");
    check(cfg.prec.cheb_sweeps >= 1 && cfg.prec.cheb_sweeps <= 1000,
          "'prec.cheb_sweeps' must lie in [1, 1000]");
    check(cfg.prec.mg_cycles >= 1 && cfg.prec.mg_cycles <= 100,
          "'prec.mg_cycles' must lie in [1, 100]");
  }
  if (root.contains("output")) {
    const json& o = require_object(root["output"], "'output'");
    reject_unknown(o, {"dir", "residuals"}, "'output'");
    if (o.contains("dir")) cfg.output.dir = get_string(o["dir"], "output.dir");
    if (o.contains("residuals")) cfg.output.residuals = get_bool(o["residuals"], "output.residuals");
    check(!cfg.output.dir.empty(), "'output.dir' must not be empty");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace ocp::cli
