#include "degenlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "degenlab/exact1d.hpp"
#include "degenlab/fdsolver.hpp"
#include "degenlab/inkspots.hpp"
#include "degenlab/quadrature.hpp"
#include "degenlab/verifier.hpp"
#include "degenlab/weighted_spaces.hpp"

namespace degenlab::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// utilities

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int resolve_threads(const json& cfg, const Overrides& overrides) {
  int t = 0;
  if (cfg.contains("threads")) t = cfg.at("threads").get<int>();
  if (const char* env = std::getenv("DEGENLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) t = static_cast<int>(v);
  }
  if (overrides.threads > 0) t = overrides.threads;
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(t, 1, 64);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Row {
  int row = 0;
  double key = 0.0;
  std::string metric;
  double value = 0.0;
};

struct RowSink {
  std::vector<Row> rows;
  int current = 0;

  void put(const std::string& metric, double value, double key = 0.0) {
    rows.push_back(Row{current, key, metric, value});
  }
  void next() { ++current; }
};

// ---------------------------------------------------------------------------
// schema validation

struct Checker {
  std::vector<Diagnostic>* diags;

  void error(const std::string& field, const std::string& message) {
    diags->push_back(Diagnostic{field, message, false});
  }

  bool keys(const json& obj, const std::string& where,
            const std::vector<std::string>& required,
            const std::vector<std::string>& optional) {
    if (!obj.is_object()) {
      error(where, "must be an object");
      return false;
    }
    bool ok = true;
    for (const auto& k : required) {
      if (!obj.contains(k)) {
        error(where.empty() ? k : where + "." + k, "missing required key");
        ok = false;
      }
    }
    for (const auto& [k, v] : obj.items()) {
      (void)v;
      const bool known =
          std::find(required.begin(), required.end(), k) != required.end() ||
          std::find(optional.begin(), optional.end(), k) != optional.end();
      if (!known) {
        error(where.empty() ? k : where + "." + k, "unknown key");
        ok = false;
      }
    }
    return ok;
  }

  bool number(const json& obj, const std::string& where, const std::string& key,
              bool required = true) {
    if (!obj.contains(key)) {
      if (required) error(where + "." + key, "missing required key");
      return false;
    }
    if (!obj.at(key).is_number()) {
      error(where + "." + key, "must be a number");
      return false;
    }
    return true;
  }

  bool integer(const json& obj, const std::string& where, const std::string& key,
               bool required = true) {
    if (!obj.contains(key)) {
      if (required) error(where + "." + key, "missing required key");
      return false;
    }
    if (!obj.at(key).is_number_integer()) {
      error(where + "." + key, "must be an integer");
      return false;
    }
    return true;
  }
};

void validate_pieces(Checker& c, const json& arr, const std::string& where) {
  if (!arr.is_array()) {
    c.error(where, "must be an array of pieces");
    return;
  }
  int idx = 0;
  for (const auto& piece : arr) {
    const std::string pw = where + "[" + std::to_string(idx++) + "]";
    if (!c.keys(piece, pw, {"lo", "hi"}, {"terms", "coef", "exponent"})) continue;
    c.number(piece, pw, "lo");
    c.number(piece, pw, "hi");
    if (piece.contains("lo") && piece.contains("hi") && piece["lo"].is_number() &&
        piece["hi"].is_number() &&
        !(piece["lo"].get<double>() < piece["hi"].get<double>())) {
      c.error(pw, "needs lo < hi");
    }
    if (piece.contains("terms")) {
      if (!piece["terms"].is_array()) {
        c.error(pw + ".terms", "must be an array");
        continue;
      }
      int t = 0;
      for (const auto& term : piece["terms"]) {
        const std::string tw = pw + ".terms[" + std::to_string(t++) + "]";
        if (!c.keys(term, tw, {"coef", "exponent"}, {})) continue;
        c.number(term, tw, "coef");
        c.number(term, tw, "exponent");
      }
    } else if (!(piece.contains("coef") && piece.contains("exponent"))) {
      c.error(pw, "needs terms or coef/exponent");
    } else {
      c.number(piece, pw, "coef");
      c.number(piece, pw, "exponent");
    }
  }
}

void validate_data(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {}, {"F", "f"})) return;
  if (obj.contains("F")) validate_pieces(c, obj["F"], where + ".F");
  if (obj.contains("f")) validate_pieces(c, obj["f"], where + ".f");
}

void validate_problem(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {"n_b", "n_bhat", "n_c"}, {"a", "lambda", "data"})) {
    return;
  }
  c.number(obj, where, "n_b");
  c.number(obj, where, "n_bhat");
  c.number(obj, where, "n_c");
  if (c.number(obj, where, "a", false) && !(obj["a"].get<double>() > 0.0)) {
    c.error(where + ".a", "must be positive");
  }
  if (c.number(obj, where, "lambda", false) &&
      !(obj["lambda"].get<double>() >= 0.0)) {
    c.error(where + ".lambda", "must be >= 0");
  }
  if (obj.contains("data")) validate_data(c, obj["data"], where + ".data");
}

void validate_grid(Checker& c, const json& obj, const std::string& where,
                   int min_n) {
  if (!c.keys(obj, where, {"n"}, {"s_min", "s_max", "x_min", "x_max"})) return;
  if (c.integer(obj, where, "n") && obj["n"].get<int>() < min_n) {
    c.error(where + ".n", "must be >= " + std::to_string(min_n));
  }
  const bool has_s = obj.contains("s_min") || obj.contains("s_max");
  const bool has_x = obj.contains("x_min") || obj.contains("x_max");
  if (has_s == has_x) {
    c.error(where, "give exactly one of (s_min, s_max) or (x_min, x_max)");
    return;
  }
  if (has_s) {
    if (c.number(obj, where, "s_min") && c.number(obj, where, "s_max") &&
        !(obj["s_min"].get<double>() < obj["s_max"].get<double>())) {
      c.error(where, "needs s_min < s_max");
    }
  } else {
    if (c.number(obj, where, "x_min") && c.number(obj, where, "x_max")) {
      const double lo = obj["x_min"].get<double>();
      const double hi = obj["x_max"].get<double>();
      if (!(lo > 0.0) || !(lo < hi)) c.error(where, "needs 0 < x_min < x_max");
    }
  }
}

void validate_weight(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {"kind"}, {"a"})) return;
  if (!obj["kind"].is_string()) {
    c.error(where + ".kind", "must be a string");
    return;
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "one") {
    if (obj.contains("a")) c.error(where + ".a", "not allowed for kind 'one'");
  } else if (kind == "power") {
    if (c.number(obj, where, "a") && !(obj["a"].get<double>() > -1.0)) {
      c.error(where + ".a", "must be > -1");
    }
  } else {
    c.error(where + ".kind", "must be 'one' or 'power'");
  }
}

void validate_field(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {"values"}, {"breaks"})) return;
  if (!obj["values"].is_array() || obj["values"].empty()) {
    c.error(where + ".values", "must be a nonempty array");
    return;
  }
  std::size_t nb = 0;
  if (obj.contains("breaks")) {
    if (!obj["breaks"].is_array()) {
      c.error(where + ".breaks", "must be an array");
      return;
    }
    nb = obj["breaks"].size();
  }
  if (obj["values"].size() != nb + 1) {
    c.error(where + ".values", "needs breaks.size() + 1 entries");
  }
}

void validate_coeffs(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {}, {"a", "a0", "c0", "nu", "K"})) return;
  for (const char* k : {"a", "a0", "c0"}) {
    if (obj.contains(k)) validate_field(c, obj[k], where + "." + k);
  }
  if (c.number(obj, where, "nu", false)) {
    const double nu = obj["nu"].get<double>();
    if (!(nu > 0.0 && nu <= 1.0)) c.error(where + ".nu", "must lie in (0, 1]");
  }
  if (c.number(obj, where, "K", false) && !(obj["K"].get<double>() >= 1.0)) {
    c.error(where + ".K", "must be >= 1");
  }
}

void validate_function(Checker& c, const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) {
    c.error(where, "needs a string 'kind'");
    return;
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "bump") {
    if (!c.keys(obj, where, {"kind", "center", "width"}, {"amplitude"})) return;
    c.number(obj, where, "center");
    if (c.number(obj, where, "width") && !(obj["width"].get<double>() > 0.0)) {
      c.error(where + ".width", "must be positive");
    }
    c.number(obj, where, "amplitude", false);
  } else if (kind == "xexp") {
    c.keys(obj, where, {"kind"}, {});
  } else if (kind == "pieces") {
    if (c.keys(obj, where, {"kind", "pieces"}, {})) {
      validate_pieces(c, obj["pieces"], where + ".pieces");
    }
  } else {
    c.error(where + ".kind", "must be 'bump', 'xexp', or 'pieces'");
  }
}

void validate_time(Checker& c, const json& obj, const std::string& where) {
  if (!c.keys(obj, where, {"t_end", "m"}, {"scheme"})) return;
  if (c.number(obj, where, "t_end") && !(obj["t_end"].get<double>() > 0.0)) {
    c.error(where + ".t_end", "must be positive");
  }
  if (c.integer(obj, where, "m") && obj["m"].get<int>() < 1) {
    c.error(where + ".m", "must be >= 1");
  }
  if (obj.contains("scheme")) {
    if (!obj["scheme"].is_string() ||
        (obj["scheme"] != "ie" && obj["scheme"] != "cn")) {
      c.error(where + ".scheme", "must be 'ie' or 'cn'");
    }
  }
}

void validate_profile(Checker& c, const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) {
    c.error(where, "needs a string 'kind'");
    return;
  }
  const std::string kind = obj["kind"].get<std::string>();
  if (kind == "one") {
    c.keys(obj, where, {"kind"}, {});
  } else if (kind == "power") {
    if (c.keys(obj, where, {"kind", "exponent"}, {}) &&
        c.number(obj, where, "exponent") &&
        !(obj["exponent"].get<double>() >= 0.0)) {
      c.error(where + ".exponent", "must be >= 0");
    }
  } else {
    c.error(where + ".kind", "must be 'one' or 'power'");
  }
}

void validate_intervals(Checker& c, const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    c.error(where, "must be a nonempty array of [lo, hi] pairs");
    return;
  }
  double prev_hi = -std::numeric_limits<double>::infinity();
  int idx = 0;
  for (const auto& pair : arr) {
    const std::string pw = where + "[" + std::to_string(idx++) + "]";
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      c.error(pw, "must be a [lo, hi] number pair");
      continue;
    }
    const double lo = pair[0].get<double>(), hi = pair[1].get<double>();
    if (!(lo < hi)) c.error(pw, "needs lo < hi");
    if (!(prev_hi <= lo)) c.error(pw, "intervals must be sorted and disjoint");
    prev_hi = hi;
  }
}

void check_p(Checker& c, const json& params, const std::string& where) {
  if (c.number(params, where, "p") && !(params["p"].get<double>() > 1.0)) {
    c.error(where + ".p", "must be > 1");
  }
}

const std::vector<std::string> kExperiments = {
    "norms",        "hardy",        "euler-exact", "solve-elliptic",
    "solve-parabolic", "bs-price",  "theta-sweep", "lambda-sweep",
    "ink-spots",    "ap-weight",    "convergence"};

std::vector<Diagnostic> validate_config(const json& cfg) {
  std::vector<Diagnostic> diags;
  Checker c{&diags};

  if (!c.keys(cfg, "",
              {"experiment", "params"},
              {"label", "out_dir", "format", "seed", "threads"})) {
    return diags;
  }
  if (!cfg["experiment"].is_string()) {
    c.error("experiment", "must be a string");
    return diags;
  }
  const std::string kind = cfg["experiment"].get<std::string>();
  if (std::find(kExperiments.begin(), kExperiments.end(), kind) ==
      kExperiments.end()) {
    c.error("experiment", "unknown experiment '" + kind + "'");
    return diags;
  }
  if (cfg.contains("label") && !cfg["label"].is_string()) {
    c.error("label", "must be a string");
  }
  if (cfg.contains("out_dir") && !cfg["out_dir"].is_string()) {
    c.error("out_dir", "must be a string");
  }
  if (cfg.contains("format")) {
    if (!cfg["format"].is_string() ||
        (cfg["format"] != "csv" && cfg["format"] != "json")) {
      c.error("format", "must be 'csv' or 'json'");
    }
  }
  if (cfg.contains("seed") &&
      (!cfg["seed"].is_number_integer() || cfg["seed"].get<long long>() < 0)) {
    c.error("seed", "must be a nonnegative integer");
  }
  if (cfg.contains("threads") &&
      (!cfg["threads"].is_number_integer() || cfg["threads"].get<int>() < 0)) {
    c.error("threads", "must be a nonnegative integer");
  }

  const json& params = cfg["params"];
  const std::string w = "params";
  if (!params.is_object()) {
    c.error(w, "must be an object");
    return diags;
  }

  if (kind == "norms") {
    if (!c.keys(params, w, {"function", "p", "theta", "grid"}, {"dyadic"})) {
      return diags;
    }
    validate_function(c, params["function"], w + ".function");
    check_p(c, params, w);
    c.number(params, w, "theta");
    validate_grid(c, params["grid"], w + ".grid", 3);
    if (params.contains("dyadic") && !params["dyadic"].is_boolean()) {
      c.error(w + ".dyadic", "must be a boolean");
    }
  } else if (kind == "hardy") {
    if (!c.keys(params, w, {"function", "p", "theta", "grid"}, {})) return diags;
    validate_function(c, params["function"], w + ".function");
    check_p(c, params, w);
    c.number(params, w, "theta");
    validate_grid(c, params["grid"], w + ".grid", 3);
  } else if (kind == "euler-exact") {
    if (!c.keys(params, w, {"problem", "p", "theta"}, {"eval_points"})) {
      return diags;
    }
    validate_problem(c, params["problem"], w + ".problem");
    check_p(c, params, w);
    c.number(params, w, "theta");
    if (params.contains("eval_points")) {
      if (!params["eval_points"].is_array()) {
        c.error(w + ".eval_points", "must be an array of positive numbers");
      } else {
        for (const auto& x : params["eval_points"]) {
          if (!x.is_number() || !(x.get<double>() > 0.0)) {
            c.error(w + ".eval_points", "entries must be positive numbers");
            break;
          }
        }
      }
    }
  } else if (kind == "solve-elliptic") {
    if (!c.keys(params, w, {"problem", "p", "theta", "grid"}, {"coeffs"})) {
      return diags;
    }
    validate_problem(c, params["problem"], w + ".problem");
    check_p(c, params, w);
    c.number(params, w, "theta");
    validate_grid(c, params["grid"], w + ".grid", 16);
    if (params.contains("coeffs")) {
      validate_coeffs(c, params["coeffs"], w + ".coeffs");
    }
  } else if (kind == "solve-parabolic") {
    if (!c.keys(params, w, {"problem", "p", "theta", "grid", "time"},
                {"coeffs", "profile"})) {
      return diags;
    }
    validate_problem(c, params["problem"], w + ".problem");
    check_p(c, params, w);
    c.number(params, w, "theta");
    validate_grid(c, params["grid"], w + ".grid", 16);
    validate_time(c, params["time"], w + ".time");
    if (params.contains("coeffs")) {
      validate_coeffs(c, params["coeffs"], w + ".coeffs");
    }
    if (params.contains("profile")) {
      validate_profile(c, params["profile"], w + ".profile");
    }
  } else if (kind == "bs-price") {
    if (!c.keys(params, w, {"sigma", "r", "horizon", "strike", "payoff"},
                {"spot", "half_width", "n", "steps"})) {
      return diags;
    }
    for (const char* k : {"sigma", "horizon", "strike"}) {
      if (c.number(params, w, k) && !(params[k].get<double>() > 0.0)) {
        c.error(w + "." + k, "must be positive");
      }
    }
    c.number(params, w, "r");
    if (!params["payoff"].is_string() ||
        (params["payoff"] != "call" && params["payoff"] != "put")) {
      c.error(w + ".payoff", "must be 'call' or 'put'");
    }
    if (c.number(params, w, "spot", false) &&
        !(params["spot"].get<double>() > 0.0)) {
      c.error(w + ".spot", "must be positive");
    }
    if (c.number(params, w, "half_width", false) &&
        !(params["half_width"].get<double>() >= 2.0)) {
      c.error(w + ".half_width", "must be >= 2");
    }
    if (c.integer(params, w, "n", false) && params["n"].get<int>() < 65) {
      c.error(w + ".n", "must be >= 65");
    }
    if (c.integer(params, w, "steps", false) && params["steps"].get<int>() < 4) {
      c.error(w + ".steps", "must be >= 4");
    }
  } else if (kind == "theta-sweep") {
    if (!c.keys(params, w, {"problem", "p"}, {"lattice_points"})) return diags;
    validate_problem(c, params["problem"], w + ".problem");
    check_p(c, params, w);
    if (c.integer(params, w, "lattice_points", false) &&
        params["lattice_points"].get<int>() < 3) {
      c.error(w + ".lattice_points", "must be >= 3");
    }
  } else if (kind == "lambda-sweep") {
    if (!c.keys(params, w, {"problem", "p", "theta"}, {"lambdas", "grid"})) {
      return diags;
    }
    validate_problem(c, params["problem"], w + ".problem");
    check_p(c, params, w);
    c.number(params, w, "theta");
    if (params.contains("lambdas")) {
      if (!params["lambdas"].is_array() || params["lambdas"].empty()) {
        c.error(w + ".lambdas", "must be a nonempty array");
      } else {
        for (const auto& l : params["lambdas"]) {
          if (!l.is_number() || !(l.get<double>() >= 0.0)) {
            c.error(w + ".lambdas", "entries must be >= 0");
            break;
          }
        }
      }
    }
    if (params.contains("grid")) validate_grid(c, params["grid"], w + ".grid", 16);
  } else if (kind == "ink-spots") {
    if (!c.keys(params, w, {"E", "gamma"},
                {"F", "T", "weight", "p", "op", "t", "resolution"})) {
      return diags;
    }
    validate_intervals(c, params["E"], w + ".E");
    if (params.contains("F")) validate_intervals(c, params["F"], w + ".F");
    if (c.number(params, w, "gamma")) {
      const double g = params["gamma"].get<double>();
      if (!(g > 0.0 && g < 1.0)) c.error(w + ".gamma", "must lie in (0, 1)");
    }
    c.number(params, w, "T", false);
    if (params.contains("weight")) {
      validate_weight(c, params["weight"], w + ".weight");
    }
    if (params.contains("p")) check_p(c, params, w);
    std::string op = "bound";
    if (params.contains("op")) {
      if (!params["op"].is_string()) {
        c.error(w + ".op", "must be a string");
      } else {
        op = params["op"].get<std::string>();
        if (op != "bound" && op != "cover" && op != "hypothesis" &&
            op != "critical-radius") {
          c.error(w + ".op",
                  "must be 'bound', 'cover', 'hypothesis', or 'critical-radius'");
        }
      }
    }
    if (op == "critical-radius" && !params.contains("t")) {
      c.error(w + ".t", "required for op 'critical-radius'");
    }
    if (params.contains("t")) c.number(params, w, "t");
    if (c.integer(params, w, "resolution", false) &&
        params["resolution"].get<int>() < 8) {
      c.error(w + ".resolution", "must be >= 8");
    }
  } else if (kind == "ap-weight") {
    if (!c.keys(params, w, {"weight", "p"},
                {"resolution", "doubling", "comparison"})) {
      return diags;
    }
    validate_weight(c, params["weight"], w + ".weight");
    check_p(c, params, w);
    if (c.integer(params, w, "resolution", false) &&
        params["resolution"].get<int>() < 16) {
      c.error(w + ".resolution", "must be >= 16");
    }
    for (const char* k : {"doubling", "comparison"}) {
      if (params.contains(k) && !params[k].is_boolean()) {
        c.error(w + "." + k, "must be a boolean");
      }
    }
  } else if (kind == "convergence") {
    if (!c.keys(params, w, {"problem", "p", "theta", "grid"}, {"levels"})) {
      return diags;
    }
    validate_problem(c, params["problem"], w + ".problem");
    if (params["problem"].is_object() && params["problem"].contains("lambda") &&
        params["problem"]["lambda"].is_number() &&
        params["problem"]["lambda"].get<double>() != 0.0) {
      c.error(w + ".problem.lambda", "convergence studies need lambda = 0");
    }
    check_p(c, params, w);
    c.number(params, w, "theta");
    validate_grid(c, params["grid"], w + ".grid", 17);
    if (c.integer(params, w, "levels", false)) {
      const int l = params["levels"].get<int>();
      if (l < 3 || l > 8) c.error(w + ".levels", "must lie in [3, 8]");
    }
  }
  return diags;
}

// ---------------------------------------------------------------------------
// config -> core objects (assumes a validated config)

PowerPiecewise parse_pieces(const json& arr) {
  std::vector<PowerPiece> pieces;
  for (const auto& pj : arr) {
    PowerPiece piece;
    piece.lo = pj.at("lo").get<double>();
    piece.hi = pj.at("hi").get<double>();
    if (pj.contains("terms")) {
      for (const auto& tj : pj["terms"]) {
        piece.terms.push_back(
            PowerTerm{tj.at("coef").get<double>(), tj.at("exponent").get<double>()});
      }
    } else {
      piece.terms.push_back(
          PowerTerm{pj.at("coef").get<double>(), pj.at("exponent").get<double>()});
    }
    pieces.push_back(std::move(piece));
  }
  return PowerPiecewise(std::move(pieces));
}

EulerProblem parse_problem(const json& obj) {
  EulerProblem problem;
  problem.ratios.n_b = obj.at("n_b").get<double>();
  problem.ratios.n_bhat = obj.at("n_bhat").get<double>();
  problem.ratios.n_c = obj.at("n_c").get<double>();
  if (obj.contains("a")) problem.a = obj.at("a").get<double>();
  if (obj.contains("lambda")) problem.lambda = obj.at("lambda").get<double>();
  if (obj.contains("data")) {
    const json& data = obj.at("data");
    if (data.contains("F")) problem.F = parse_pieces(data.at("F"));
    if (data.contains("f")) problem.f = parse_pieces(data.at("f"));
  }
  return problem;
}

LogGrid parse_grid(const json& obj) {
  const int n = obj.at("n").get<int>();
  if (obj.contains("x_min")) {
    return build_log_grid(obj.at("x_min").get<double>(),
                          obj.at("x_max").get<double>(), n);
  }
  LogGrid grid;
  grid.s_min = obj.at("s_min").get<double>();
  grid.s_max = obj.at("s_max").get<double>();
  grid.n = n;
  return grid;
}

TimeWeight parse_weight(const json& obj) {
  if (obj.at("kind").get<std::string>() == "one") return TimeWeight{};
  return power_time_weight(obj.at("a").get<double>());
}

PiecewiseField parse_field(const json& obj, PiecewiseField::Var var) {
  PiecewiseField field;
  field.var = var;
  if (obj.contains("breaks")) {
    field.breaks = obj.at("breaks").get<std::vector<double>>();
  }
  field.values = obj.at("values").get<std::vector<double>>();
  return field;
}

RoughCoefficients parse_coeffs(const json* obj, double fallback_a) {
  RoughCoefficients coeffs;
  coeffs.a = PiecewiseField::constant_field(fallback_a);
  if (!obj) return coeffs;
  if (obj->contains("a")) {
    coeffs.a = parse_field(obj->at("a"), PiecewiseField::Var::X);
  }
  if (obj->contains("a0")) {
    coeffs.a0 = parse_field(obj->at("a0"), PiecewiseField::Var::T);
  }
  if (obj->contains("c0")) {
    coeffs.c0 = parse_field(obj->at("c0"), PiecewiseField::Var::T);
  }
  if (obj->contains("nu")) coeffs.nu = obj->at("nu").get<double>();
  if (obj->contains("K")) coeffs.K = obj->at("K").get<double>();
  return coeffs;
}

SampledFunction parse_function(const json& obj, const LogGrid& grid) {
  const std::string kind = obj.at("kind").get<std::string>();
  if (kind == "bump") {
    TestBump bump;
    bump.center = obj.at("center").get<double>();
    bump.width = obj.at("width").get<double>();
    if (obj.contains("amplitude")) bump.amplitude = obj.at("amplitude").get<double>();
    return SampledFunction::sample_s(
        grid, [bump](double s) { return bump.value(s); },
        Interp::PiecewiseLinear);
  }
  if (kind == "xexp") {
    return SampledFunction::sample(
        grid, [](double x) { return x * std::exp(-x); }, Interp::PiecewiseLinear);
  }
  const PowerPiecewise pieces = parse_pieces(obj.at("pieces"));
  return SampledFunction::sample(
      grid, [&pieces](double x) { return pieces(x); }, Interp::PiecewiseLinear);
}

IntervalSet parse_intervals(const json& arr) {
  std::vector<std::pair<double, double>> ivs;
  for (const auto& pair : arr) {
    ivs.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  return IntervalSet(std::move(ivs));
}

std::function<double(double)> parse_profile(const json* obj) {
  if (!obj) return [](double) { return 1.0; };
  const std::string kind = obj->at("kind").get<std::string>();
  if (kind == "one") return [](double) { return 1.0; };
  const double q = obj->at("exponent").get<double>();
  return [q](double t) { return std::pow(t, q); };
}

// ---------------------------------------------------------------------------
// experiment execution

void run_norms(const json& params, RowSink& sink) {
  const LogGrid grid = parse_grid(params.at("grid"));
  const SampledFunction u = parse_function(params.at("function"), grid);
  const NormSpec spec{params.at("p").get<double>(),
                      params.at("theta").get<double>(),
                      params.at("p").get<double>()};
  sink.put("lp_norm", lp_theta_norm(u, spec));
  sink.put("h1_norm", h1_theta_norm(u, spec));
  const bool dyadic = !params.contains("dyadic") || params["dyadic"].get<bool>();
  if (dyadic) {
    const CutoffFamily cut = build_cutoff(spec.p);
    sink.put("dyadic_norm", dyadic_norm(u, spec, cut));
    sink.put("cutoff_margin", cut.margin);
  }
}

void run_hardy(const json& params, RowSink& sink) {
  const LogGrid grid = parse_grid(params.at("grid"));
  const SampledFunction u = parse_function(params.at("function"), grid);
  const NormSpec spec{params.at("p").get<double>(),
                      params.at("theta").get<double>(),
                      params.at("p").get<double>()};
  const HardyReport rep = hardy_check(u, spec);
  sink.put("lhs", rep.lhs);
  sink.put("rhs", rep.rhs);
  sink.put("slack", rep.slack);
  sink.put("holds", rep.holds ? 1.0 : 0.0);
}

void run_euler_exact(const json& params, RowSink& sink) {
  const EulerProblem problem = parse_problem(params.at("problem"));
  const double p = params.at("p").get<double>();
  const double theta = params.at("theta").get<double>();
  EulerProblem eff = problem;
  eff.lambda = 0.0;
  eff.ratios.n_c += problem.lambda / problem.a;
  const ExactEulerSolution sol(eff, p, theta);
  sink.put("alpha", sol.roots().alpha);
  sink.put("beta", sol.roots().beta);
  const ThetaWindow window = admissible_theta(sol.roots(), p);
  sink.put("window_lo", window.lo);
  sink.put("window_hi", window.hi);
  sink.put("regime", static_cast<double>(static_cast<int>(sol.regime())));
  sink.put("B1", sol.B1());
  sink.put("B2", sol.B2());
  sink.put("A1_infinity", sol.A1_infinity());
  sink.put("A2_infinity", sol.A2_infinity());
  sink.put("u_norm", sol.solution_norm());
  sink.put("xdu_norm", sol.x_derivative_norm());
  if (params.contains("eval_points")) {
    sink.next();
    for (const auto& xj : params["eval_points"]) {
      const double x = xj.get<double>();
      sink.put("u", sol(x), x);
      sink.put("xdu", sol.x_derivative(x), x);
    }
  }
}

void run_solve_elliptic(const json& params, RowSink& sink) {
  const EulerProblem problem = parse_problem(params.at("problem"));
  const double p = params.at("p").get<double>();
  const double theta = params.at("theta").get<double>();
  const LogGrid grid = parse_grid(params.at("grid"));
  const json* cj = params.contains("coeffs") ? &params.at("coeffs") : nullptr;
  const RoughCoefficients coeffs = parse_coeffs(cj, problem.a);
  GridData data;
  data.F = problem.F;
  data.f = problem.f;
  const SolveReport rep = elliptic_solve_fd(coeffs, problem.ratios,
                                            problem.lambda, data, grid, p, theta);
  const NormSpec spec{p, theta, p};
  const double un = lp_theta_norm(rep.solution, spec);
  SampledFunction dcar(rep.solution.grid(), rep.solution.log_derivative_values(),
                       rep.solution.interp());
  const double dn = lp_theta_norm(dcar, spec);
  const double damp = 1.0 + std::sqrt(problem.lambda);
  const double Fn = lp_theta_norm(problem.F, p, theta, -1.0);
  const double fn = lp_theta_norm(problem.f, p, theta, 0.0);
  sink.put("u_norm", un);
  sink.put("xdu_norm", dn);
  sink.put("data_F_norm", Fn);
  sink.put("data_f_norm", fn);
  sink.put("lhs", damp * un + dn);
  sink.put("rhs", Fn + fn / damp);
  sink.put("ratio", (Fn + fn / damp) == 0.0 ? 0.0
                                            : (damp * un + dn) / (Fn + fn / damp));
  sink.put("residual_norm", rep.residual_norm);
  sink.put("truncation_certificate", rep.truncation_certificate);
  sink.put("window_violation", rep.window_violation ? 1.0 : 0.0);
}

void run_solve_parabolic(const json& params, RowSink& sink) {
  const EulerProblem problem = parse_problem(params.at("problem"));
  const double p = params.at("p").get<double>();
  const double theta = params.at("theta").get<double>();
  const LogGrid grid = parse_grid(params.at("grid"));
  const json& tj = params.at("time");
  TimeGrid tg{tj.at("t_end").get<double>(), tj.at("m").get<int>()};
  const TimeScheme scheme =
      tj.contains("scheme") && tj["scheme"] == "cn" ? TimeScheme::CrankNicolson
                                                    : TimeScheme::ImplicitEuler;
  const json* cj = params.contains("coeffs") ? &params.at("coeffs") : nullptr;
  const RoughCoefficients coeffs = parse_coeffs(cj, problem.a);
  const json* pj = params.contains("profile") ? &params.at("profile") : nullptr;
  const auto profile = parse_profile(pj);
  GridData data;
  data.F = problem.F;
  data.f = problem.f;
  const ParabolicReport rep =
      parabolic_solve_fd(coeffs, problem.ratios, problem.lambda, data, profile,
                         grid, tg, p, theta, scheme);
  const double gq = std::pow(
      gauss_legendre([&](double t) { return std::pow(std::abs(profile(t)), p); },
                     0.0, tg.t_end, std::max(64, 4 * tg.m)),
      1.0 / p);
  const double damp = 1.0 + std::sqrt(problem.lambda);
  const double Fn = gq * lp_theta_norm(problem.F, p, theta, -1.0);
  const double fn = gq * lp_theta_norm(problem.f, p, theta, 0.0);
  sink.put("st_u_norm", rep.solution_space_time_norm);
  sink.put("st_xdu_norm", rep.x_derivative_space_time_norm);
  sink.put("data_F_norm", Fn);
  sink.put("data_f_norm", fn);
  const double lhs = damp * rep.solution_space_time_norm +
                     rep.x_derivative_space_time_norm;
  const double rhs = Fn + fn / damp;
  sink.put("lhs", lhs);
  sink.put("rhs", rhs);
  sink.put("ratio", rhs == 0.0 ? 0.0 : lhs / rhs);
  sink.put("residual_norm", rep.residual_norm);
  sink.put("weak_residual", rep.weak_residual);
  sink.put("truncation_certificate", rep.truncation_certificate);
  sink.put("window_violation", rep.window_violation ? 1.0 : 0.0);
}

void run_bs_price(const json& params, RowSink& sink) {
  MarketParams market;
  market.sigma = params.at("sigma").get<double>();
  market.r = params.at("r").get<double>();
  market.horizon = params.at("horizon").get<double>();
  const double strike = params.at("strike").get<double>();
  const double spot =
      params.contains("spot") ? params.at("spot").get<double>() : strike;
  const bool is_call = params.at("payoff").get<std::string>() == "call";
  const double half_width =
      params.contains("half_width") ? params.at("half_width").get<double>() : 8.0;
  const int n = params.contains("n") ? params.at("n").get<int>() : 4097;
  const int steps = params.contains("steps") ? params.at("steps").get<int>() : 2048;

  const double sK = std::log(strike);
  if (!(std::abs(std::log(spot) - sK) < half_width - 1.0)) {
    fail(ErrorKind::ConfigError, "spot too far from the strike-centered grid");
  }
  LogGrid grid{sK - half_width, sK + half_width, n};
  const double a = 0.5 * market.sigma * market.sigma;
  LowerOrderRatios ratios{-2.0 * market.r / (market.sigma * market.sigma), 0.0,
                          2.0 * market.r / (market.sigma * market.sigma)};
  const double x_cut = std::exp(grid.s_max - 1.0);
  GridData data;
  data.F = PowerPiecewise(
      {PowerPiece{strike, x_cut, {PowerTerm{a, 2.0}}}});
  data.f = PowerPiecewise(
      {PowerPiece{strike, x_cut,
                  {PowerTerm{market.r * strike, 0.0},
                   PowerTerm{-market.sigma * market.sigma, 1.0}}}});
  RoughCoefficients coeffs;
  coeffs.a = PiecewiseField::constant_field(a);
  coeffs.nu = std::min(a, 1.0 / a);
  TimeGrid tg{market.horizon, steps};
  const ParabolicReport rep = parabolic_solve_fd(
      coeffs, ratios, 0.0, data, [](double) { return 1.0; }, grid, tg, 2.0, 0.0,
      TimeScheme::CrankNicolson);

  const double lift = rep.final_solution.value_at_s(std::log(spot));
  const double call_fd = lift + std::max(spot - strike, 0.0);
  const double disc = std::exp(-market.r * market.horizon);
  const double price_fd =
      is_call ? call_fd : call_fd - spot + strike * disc;

  Payoff payoff;
  payoff.kind = is_call ? PayoffKind::Call : PayoffKind::Put;
  payoff.strike = strike;
  const double price_quad = bs_solve(market, payoff, spot);
  const double price_closed = bs_closed_form(market, payoff, spot);
  sink.put("price_fd", price_fd);
  sink.put("price_quadrature", price_quad);
  sink.put("price_closed_form", price_closed);
  sink.put("fd_error", std::abs(price_fd - price_closed));
  sink.put("quadrature_error", std::abs(price_quad - price_closed));
  sink.put("weak_residual", rep.weak_residual);
}

void run_theta_sweep(const json& params, RowSink& sink) {
  const EulerProblem problem = parse_problem(params.at("problem"));
  const double p = params.at("p").get<double>();
  const int lattice = params.contains("lattice_points")
                          ? params.at("lattice_points").get<int>()
                          : 11;
  const SweepResult sweep = theta_sweep(problem, p, lattice);
  sink.put("window_lo", sweep.window_lo);
  sink.put("window_hi", sweep.window_hi);
  sink.put("mid_ratio", sweep.mid_ratio);
  for (double flag : sweep.blowup_flags) sink.put("blowup_flag", flag, flag);
  for (const auto& row : sweep.rows) {
    sink.next();
    sink.put("ratio", row.report.ratio, row.key);
    sink.put("lhs", row.report.lhs, row.key);
    sink.put("rhs", row.report.rhs, row.key);
    sink.put("probe", row.probe ? 1.0 : 0.0, row.key);
    sink.put("flagged", row.flagged ? 1.0 : 0.0, row.key);
  }
}

void run_lambda_sweep(const json& params, RowSink& sink) {
  const EulerProblem problem = parse_problem(params.at("problem"));
  const double p = params.at("p").get<double>();
  const double theta = params.at("theta").get<double>();
  std::vector<double> lambdas;
  if (params.contains("lambdas")) {
    lambdas = params.at("lambdas").get<std::vector<double>>();
  }
  std::optional<LogGrid> grid;
  if (params.contains("grid")) grid = parse_grid(params.at("grid"));
  const SweepResult sweep = lambda_sweep(problem, p, theta, lambdas, grid);
  sink.put("window_lo", sweep.window_lo);
  sink.put("window_hi", sweep.window_hi);
  sink.put("lambda_star", sweep.lambda_star);
  for (const auto& row : sweep.rows) {
    sink.next();
    sink.put("ratio", row.report.ratio, row.key);
    sink.put("lhs", row.report.lhs, row.key);
    sink.put("rhs", row.report.rhs, row.key);
    sink.put("window_violation", row.report.window_violation ? 1.0 : 0.0,
             row.key);
  }
}

void run_ink_spots(const json& params, RowSink& sink) {
  const IntervalSet E = parse_intervals(params.at("E"));
  const double gamma = params.at("gamma").get<double>();
  const double T = params.contains("T") ? params.at("T").get<double>() : 0.0;
  const double p = params.contains("p") ? params.at("p").get<double>() : 2.0;
  const TimeWeight w = params.contains("weight")
                           ? parse_weight(params.at("weight"))
                           : TimeWeight{};
  const std::string op =
      params.contains("op") ? params.at("op").get<std::string>() : "bound";

  IntervalSet F;
  if (params.contains("F")) {
    F = parse_intervals(params.at("F"));
  } else {
    const auto hull = E.hull();
    const double pad = E.length() / gamma + 1.0;
    F = IntervalSet({{hull.first - pad, hull.second + pad}});
  }

  if (op == "critical-radius") {
    sink.put("critical_radius",
             critical_radius(E, params.at("t").get<double>(), gamma));
    return;
  }
  if (op == "cover") {
    const CoverSelection sel = select_cover(E, gamma);
    sink.put("cylinders", static_cast<double>(sel.cylinders.size()));
    sink.put("residual", sel.residual);
    sink.put("rounds", static_cast<double>(sel.rounds));
    int idx = 0;
    for (const auto& [t, r] : sel.cylinders) {
      sink.next();
      sink.put("center", t, static_cast<double>(idx));
      sink.put("radius", r, static_cast<double>(idx));
      ++idx;
    }
    return;
  }
  if (op == "hypothesis") {
    const int resolution =
        params.contains("resolution") ? params.at("resolution").get<int>() : 256;
    const HypothesisResult res = hypothesis_check(E, F, gamma, T, resolution);
    sink.put("holds", res.holds ? 1.0 : 0.0);
    sink.put("has_witness", res.has_witness ? 1.0 : 0.0);
    if (res.has_witness) {
      sink.put("witness_t", res.t);
      sink.put("witness_R", res.R);
    }
    return;
  }
  const LemmaReport rep = ink_spots_bound(E, F, gamma, w, p, T);
  sink.put("hypothesis_holds", rep.hypothesis_holds ? 1.0 : 0.0);
  sink.put("wE", rep.wE);
  sink.put("wF", rep.wF);
  sink.put("ap_constant", rep.ap_constant);
  sink.put("delta", rep.delta);
  sink.put("bound_rhs", rep.bound_rhs);
  sink.put("conclusion_holds", rep.conclusion_holds ? 1.0 : 0.0);
}

void run_ap_weight(const json& params, RowSink& sink, std::uint64_t seed) {
  const TimeWeight w = parse_weight(params.at("weight"));
  const double p = params.at("p").get<double>();
  const long resolution =
      params.contains("resolution") ? params.at("resolution").get<long>() : 256;
  sink.put("ap_estimate", ap_constant_estimate(w, p, resolution));
  const bool doubling =
      !params.contains("doubling") || params.at("doubling").get<bool>();
  if (doubling) {
    const DoublingReport rep = doubling_check(w, p);
    sink.put("doubling_applicable", rep.applicable ? 1.0 : 0.0);
    sink.put("doubling_holds", rep.holds ? 1.0 : 0.0);
    sink.put("doubling_worst_ratio", rep.worst_ratio);
  }
  const bool comparison =
      !params.contains("comparison") || params.at("comparison").get<bool>();
  if (comparison) {
    const MeasureComparisonReport rep = measure_comparison_check(w, p, seed);
    sink.put("comparison_holds", rep.holds ? 1.0 : 0.0);
    sink.put("comparison_N", rep.N);
    sink.put("comparison_delta", rep.delta);
    sink.put("comparison_worst_lower", rep.worst_lower);
    sink.put("comparison_worst_upper", rep.worst_upper);
  }
}

void run_convergence(const json& params, RowSink& sink, int threads) {
  EulerProblem problem = parse_problem(params.at("problem"));
  problem.ratios.n_c += problem.lambda / problem.a;
  problem.lambda = 0.0;
  const double p = params.at("p").get<double>();
  const double theta = params.at("theta").get<double>();
  const LogGrid base = parse_grid(params.at("grid"));
  const int levels =
      params.contains("levels") ? params.at("levels").get<int>() : 4;

  const ExactEulerSolution exact(problem, p, theta);
  RoughCoefficients coeffs;
  coeffs.a = PiecewiseField::constant_field(problem.a);
  GridData data;
  data.F = problem.F;
  data.f = problem.f;

  std::vector<double> hs(levels), errs(levels);
  parallel_for(levels, threads, [&](int l) {
    LogGrid grid = base;
    grid.n = (base.n - 1) * (1 << l) + 1;
    const SolveReport rep = elliptic_solve_fd(coeffs, problem.ratios, 0.0, data,
                                              grid, p, theta);
    double scale = 0.0, worst = 0.0;
    for (int j = 0; j < grid.n; ++j) {
      const double ref = exact(grid.x(j));
      scale = std::max(scale, std::abs(ref));
      worst = std::max(worst, std::abs(rep.solution.values()[j] - ref));
    }
    hs[l] = grid.h();
    errs[l] = worst / std::max(scale, 1e-300);
  });

  const ConvergenceReport rep = convergence_study(
      [&](int l) { return hs[l]; }, [&](int l) { return errs[l]; }, levels);
  sink.put("final_order", rep.final_order);
  sink.put("monotone", rep.monotone ? 1.0 : 0.0);
  for (int l = 0; l < levels; ++l) {
    sink.next();
    sink.put("h", rep.levels[l].h, static_cast<double>(l));
    sink.put("error", rep.levels[l].error, static_cast<double>(l));
    if (l > 0) sink.put("order", rep.levels[l].order, static_cast<double>(l));
  }
}

// ---------------------------------------------------------------------------
// output writing

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunOutput write_outputs(const std::string& experiment, const std::string& label,
                        const std::string& out_dir, const std::string& format,
                        const std::string& hash, int threads,
                        const std::vector<Row>& rows) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunOutput out;
  out.rows = static_cast<int>(rows.size());

  if (format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"row", r.row},
                     {"key", r.key},
                     {"metric", r.metric},
                     {"value", r.value}});
    }
    out.csv_path = (fs::path(out_dir) / "results.json").string();
    std::ofstream os(out.csv_path);
    os << arr.dump(2) << "\n";
  } else {
    out.csv_path = (fs::path(out_dir) / "results.csv").string();
    std::ofstream os(out.csv_path);
    os << "experiment,config_hash,row,key,metric,value\n";
    for (const auto& r : rows) {
      os << experiment << "," << hash << "," << r.row << ","
         << format_double(r.key) << "," << r.metric << ","
         << format_double(r.value) << "\n";
    }
  }

  json summary{{"experiment", experiment},
               {"config_hash", hash},
               {"rows", out.rows},
               {"results", fs::path(out.csv_path).filename().string()},
               {"threads", threads},
               {"timestamp", timestamp_utc()}};
  if (!label.empty()) summary["label"] = label;
  out.summary_path = (fs::path(out_dir) / "summary.json").string();
  std::ofstream ss(out.summary_path);
  ss << summary.dump(2) << "\n";
  return out;
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::ConfigError, "cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ConfigError, std::string("config parse error: ") + e.what());
  }
  return cfg;
}

}  // namespace

std::vector<Diagnostic> validate_file(const std::string& config_path) {
  std::ifstream is(config_path);
  if (!is) {
    return {Diagnostic{"", "cannot open config file: " + config_path, false}};
  }
  json cfg;
  try {
    cfg = json::parse(is);
  } catch (const json::parse_error& e) {
    return {Diagnostic{"", std::string("parse error: ") + e.what(), false}};
  }
  return validate_config(cfg);
}

RunOutput run_config_file(const std::string& config_path,
                          const Overrides& overrides) {
  const json cfg = load_config(config_path);
  const std::vector<Diagnostic> diags = validate_config(cfg);
  for (const auto& d : diags) {
    if (!d.warning) {
      fail(ErrorKind::ConfigError,
           d.field.empty() ? d.message : d.field + ": " + d.message);
    }
  }

  const std::string experiment = cfg.at("experiment").get<std::string>();
  const std::string label =
      cfg.contains("label") ? cfg.at("label").get<std::string>() : "";
  std::string out_dir =
      cfg.contains("out_dir") ? cfg.at("out_dir").get<std::string>() : "out";
  if (!overrides.out_dir.empty()) out_dir = overrides.out_dir;
  std::string format =
      cfg.contains("format") ? cfg.at("format").get<std::string>() : "csv";
  if (!overrides.format.empty()) format = overrides.format;
  std::uint64_t seed =
      cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1;
  if (overrides.has_seed) seed = overrides.seed;
  const int threads = resolve_threads(cfg, overrides);

  const std::string hash =
      hex64(fnv1a64(cfg.dump() + ":" + std::to_string(seed)));

  RowSink sink;
  const json& params = cfg.at("params");
  if (experiment == "norms") {
    run_norms(params, sink);
  } else if (experiment == "hardy") {
    run_hardy(params, sink);
  } else if (experiment == "euler-exact") {
    run_euler_exact(params, sink);
  } else if (experiment == "solve-elliptic") {
    run_solve_elliptic(params, sink);
  } else if (experiment == "solve-parabolic") {
    run_solve_parabolic(params, sink);
  } else if (experiment == "bs-price") {
    run_bs_price(params, sink);
  } else if (experiment == "theta-sweep") {
    run_theta_sweep(params, sink);
  } else if (experiment == "lambda-sweep") {
    run_lambda_sweep(params, sink);
  } else if (experiment == "ink-spots") {
    run_ink_spots(params, sink);
  } else if (experiment == "ap-weight") {
    run_ap_weight(params, sink, seed);
  } else {
    run_convergence(params, sink, threads);
  }

  return write_outputs(experiment, label, out_dir, format, hash, threads,
                       sink.rows);
}

int cli_main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for degenerate divergence-form equations"};
  app.require_subcommand(1);

  std::string run_config;
  Overrides overrides;
  std::uint64_t seed_value = 0;
  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_config, "JSON config file")->required();
  run->add_option("--out", overrides.out_dir, "output directory override");
  run->add_option("--format", overrides.format, "results format")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = run->add_option("--seed", seed_value, "seed override");
  run->add_option("--threads", overrides.threads, "worker thread cap");

  std::string validate_config_path;
  auto* validate = app.add_subcommand("validate", "schema-check a config");
  validate->add_option("config", validate_config_path, "JSON config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (validate->parsed()) {
    const auto diags = validate_file(validate_config_path);
    bool errors = false;
    for (const auto& d : diags) {
      errors = errors || !d.warning;
      std::fprintf(stderr, "%s: %s%s%s\n", d.warning ? "warning" : "error",
                   d.field.c_str(), d.field.empty() ? "" : ": ",
                   d.message.c_str());
    }
    if (!errors) std::printf("ok\n");
    return errors ? 2 : 0;
  }

  overrides.has_seed = seed_opt->count() > 0;
  overrides.seed = seed_value;
  try {
    const RunOutput out = run_config_file(run_config, overrides);
    std::printf("wrote %s (%d rows) and %s\n", out.csv_path.c_str(), out.rows,
                out.summary_path.c_str());
    return 0;
  } catch (const Error& e) {
    json err{{"error",
              {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return e.kind() == ErrorKind::ConfigError ? 2 : 3;
  } catch (const std::exception& e) {
    json err{{"error", {{"kind", "Internal"}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  }
}

}  // namespace degenlab::cli
