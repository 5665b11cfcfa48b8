// landlaw command-line driver. Everything numerical goes through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "landlaw/landlaw.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kCheckFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  NumericalError(ll_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  ll_status status;
};

// Statuses caused by bad input rather than by the numerics.
bool is_input_error(ll_status s) {
  switch (s) {
    case LL_ERR_INVALID_ARGUMENT:
    case LL_ERR_INVALID_DOMAIN:
    case LL_ERR_INVALID_PARTITION:
    case LL_ERR_DEGENERATE_CUBE:
    case LL_ERR_INCOMPATIBLE_PERIOD:
    case LL_ERR_INVALID_POTENTIAL:
    case LL_ERR_DIMENSION_MISMATCH:
    case LL_ERR_PARITY:
    case LL_ERR_SCALE:
    case LL_ERR_WINDOW:
    case LL_ERR_IO: return true;
    default: return false;
  }
}

void check(ll_status s, const char* what) {
  if (s == LL_OK) return;
  const std::string msg = std::string(what) + ": " + ll_status_name(s) + ": " + ll_last_error();
  if (is_input_error(s)) throw ConfigError(msg);
  throw NumericalError(s, msg);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Potential = std::unique_ptr<ll_potential, Deleter<ll_potential, ll_potential_free>>;
using Operator = std::unique_ptr<ll_hamiltonian, Deleter<ll_hamiltonian, ll_hamiltonian_free>>;
using Landscape = std::unique_ptr<ll_landscape, Deleter<ll_landscape, ll_landscape_free>>;
using Report = std::unique_ptr<ll_report, Deleter<ll_report, ll_report_free>>;
using Curve = std::unique_ptr<ll_curve, Deleter<ll_curve, ll_curve_free>>;
using Ensemble = std::unique_ptr<ll_ensemble, Deleter<ll_ensemble, ll_ensemble_free>>;
using Suite = std::unique_ptr<ll_suite, Deleter<ll_suite, ll_suite_free>>;

// ---- configuration schema ------------------------------------------------

const json& schema() {
  static const json s = {
      {"output", "string"},
      {"threads", "uint"},
      {"verbosity", "int"},
      {"potential",
       {{"d", "uint"},
        {"K", "uint"},
        {"law", "string"},
        {"lo", "number"},
        {"hi", "number"},
        {"p", "number"},
        {"height", "number"},
        {"values", "number[]"},
        {"probs", "number[]"},
        {"cell_dims", "uint[]"},
        {"cell", "number[]"},
        {"file", "string"},
        {"bound", "number"},
        {"seed", "uint"},
        {"realization", "uint"}}},
      {"grid",
       {{"points", "uint"}, {"min", "number"}, {"max", "number"}, {"spacing", "string"}, {"values", "number[]"}}},
      {"solve", {{"solver", "string"}, {"tolerance", "number"}, {"direct_limit", "uint"}, {"allow_constant", "bool"}}},
      {"count", {{"method", "string"}, {"dense_limit", "uint"}}},
      {"boxcount", {{"landscape", "string"}}},
      {"compare", {{"n_curve", "string"}, {"landscape", "string"}}},
      {"ensemble",
       {{"realizations", "uint"},
        {"seed", "uint"},
        {"dual", "bool"},
        {"window", {{"mu0", "number"}, {"kstar", "number"}}}}},
      {"verify", {{"seed", "uint"}, {"trials", "uint"}, {"chernoff_trials", "uint"}}},
      {"figure4", {{"seed", "uint"}, {"seeds", "uint"}, {"plot", "bool"}}},
  };
  return s;
}

bool type_ok(const json& v, const std::string& type) {
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "int") return v.is_number_integer();
  if (type == "uint") return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (type == "bool") return v.is_boolean();
  if (type.ends_with("[]")) {
    if (!v.is_array()) return false;
    const std::string inner = type.substr(0, type.size() - 2);
    for (const auto& x : v)
      if (!type_ok(x, inner)) return false;
    return true;
  }
  return false;
}

void validate(const json& cfg, const json& sch, const std::string& prefix) {
  if (!cfg.is_object()) throw ConfigError("'" + (prefix.empty() ? std::string("<root>") : prefix) + "' must be an object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!sch.contains(key)) throw ConfigError("unknown key '" + path + "'");
    const json& rule = sch.at(key);
    if (rule.is_object()) {
      validate(value, rule, path);
    } else if (!type_ok(value, rule.get<std::string>())) {
      throw ConfigError("key '" + path + "' must be of type " + rule.get<std::string>());
    }
  }
}

template <class T>
T get_or(const json& cfg, const json::json_pointer& ptr, T fallback) {
  return cfg.contains(ptr) ? cfg.at(ptr).get<T>() : fallback;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// ---- command-line flags ----------------------------------------------------

struct Flags {
  std::string config;
  std::optional<std::string> output;
  std::optional<unsigned> threads;
  std::optional<unsigned> d, k;
  std::optional<std::string> law, potential_file;
  std::optional<double> lo, hi, p, height, bound;
  std::optional<std::uint64_t> seed, realization;
  std::optional<unsigned> points;
  std::optional<double> grid_min, grid_max;
  std::optional<std::string> spacing, solver, count_method;
  std::optional<double> tolerance;
  std::optional<unsigned> dense_limit;
  bool allow_constant = false;
  std::optional<std::string> landscape, n_curve;
  std::optional<unsigned> realizations, trials, chernoff_trials, seeds;
  std::optional<double> mu0, kstar;
  bool dual = false;
  bool plot = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON configuration file");
  sub->add_option("--out", f.output, "output directory");
  sub->add_option("--threads", f.threads, "worker threads");
  sub->add_option("--d", f.d, "lattice dimension");
  sub->add_option("--K", f.k, "torus side length");
  sub->add_option("--law", f.law, "uniform | bernoulli | discrete | periodic | file");
  sub->add_option("--potential", f.potential_file, "potential field file (implies --law file)");
  sub->add_option("--lo", f.lo, "uniform lower end");
  sub->add_option("--hi", f.hi, "uniform upper end");
  sub->add_option("--p", f.p, "Bernoulli probability");
  sub->add_option("--height", f.height, "Bernoulli height");
  sub->add_option("--bound", f.bound, "V_max for file or periodic potentials");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--realization", f.realization, "realization index");
  sub->add_option("--points", f.points, "grid points");
  sub->add_option("--grid-min", f.grid_min, "smallest grid value");
  sub->add_option("--grid-max", f.grid_max, "largest grid value");
  sub->add_option("--spacing", f.spacing, "log | linear");
  sub->add_option("--solver", f.solver, "auto | direct | cg");
  sub->add_option("--tolerance", f.tolerance, "landscape residual bound");
  sub->add_option("--count-method", f.count_method, "auto | dense | inertia");
  sub->add_option("--dense-limit", f.dense_limit, "largest K^d counted densely");
  sub->add_flag("--allow-constant", f.allow_constant, "accept constant potentials");
}

json flag_patch(const std::string& verb, const Flags& f) {
  json p = json::object();
  auto put = [&p](const char* ptr, const auto& opt) {
    if (opt) p[json::json_pointer(ptr)] = *opt;
  };
  put("/output", f.output);
  put("/threads", f.threads);
  put("/potential/d", f.d);
  put("/potential/K", f.k);
  put("/potential/law", f.law);
  if (f.potential_file) {
    p["potential"]["file"] = *f.potential_file;
    p["potential"]["law"] = "file";
  }
  put("/potential/lo", f.lo);
  put("/potential/hi", f.hi);
  put("/potential/p", f.p);
  put("/potential/height", f.height);
  put("/potential/bound", f.bound);
  put("/potential/realization", f.realization);
  put("/grid/points", f.points);
  put("/grid/min", f.grid_min);
  put("/grid/max", f.grid_max);
  put("/grid/spacing", f.spacing);
  put("/solve/solver", f.solver);
  put("/solve/tolerance", f.tolerance);
  if (f.allow_constant) p["solve"]["allow_constant"] = true;
  put("/count/method", f.count_method);
  put("/count/dense_limit", f.dense_limit);
  if (verb == "boxcount") put("/boxcount/landscape", f.landscape);
  if (verb == "compare") {
    put("/compare/landscape", f.landscape);
    put("/compare/n_curve", f.n_curve);
  }
  if (f.seed) {
    if (verb == "ensemble") p["ensemble"]["seed"] = *f.seed;
    else if (verb == "verify") p["verify"]["seed"] = *f.seed;
    else if (verb == "figure4") p["figure4"]["seed"] = *f.seed;
    else p["potential"]["seed"] = *f.seed;
  }
  put("/ensemble/realizations", f.realizations);
  if (f.dual) p["ensemble"]["dual"] = true;
  put("/ensemble/window/mu0", f.mu0);
  put("/ensemble/window/kstar", f.kstar);
  put("/verify/trials", f.trials);
  put("/verify/chernoff_trials", f.chernoff_trials);
  put("/figure4/seeds", f.seeds);
  if (f.plot) p["figure4"]["plot"] = true;
  return p;
}

json load_config(const std::string& verb, const Flags& f) {
  json cfg = json::object();
  if (!f.config.empty()) {
    std::ifstream is(f.config);
    if (!is) throw ConfigError("cannot open config file " + f.config);
    try {
      cfg = json::parse(is);
    } catch (const json::parse_error& e) {
      throw ConfigError("config file " + f.config + " is not valid JSON: " + e.what());
    }
    validate(cfg, schema(), "");
  }
  cfg.merge_patch(flag_patch(verb, f));
  validate(cfg, schema(), "");
  return cfg;
}

// ---- shared pieces -------------------------------------------------------

struct Run {
  std::string verb;
  json cfg;
  fs::path out;
  std::vector<std::uint64_t> seeds;

  fs::path file(const std::string& name) const { return out / name; }

  void meta(const fs::path& artifact, const json& extra = json::object()) const {
    json m;
    m["version"] = ll_version();
    m["verb"] = verb;
    m["config"] = cfg;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
    m["config_hash"] = hash;
    m["seeds"] = seeds;
    m["extra"] = extra;
    std::ofstream os(artifact.string() + ".meta.json");
    os << m.dump(2) << '\n';
  }
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ll_distribution distribution_from(const json& pot) {
  const std::string law = get_or<std::string>(pot, "/law"_json_pointer, "uniform");
  ll_distribution d{};
  if (law == "uniform") {
    d.law = LL_LAW_UNIFORM;
    d.lo = get_or(pot, "/lo"_json_pointer, 0.0);
    d.hi = get_or(pot, "/hi"_json_pointer, 1.0);
  } else if (law == "bernoulli") {
    d.law = LL_LAW_BERNOULLI;
    d.p = get_or(pot, "/p"_json_pointer, 0.5);
    d.height = get_or(pot, "/height"_json_pointer, 1.0);
  } else if (law == "discrete") {
    d.law = LL_LAW_DISCRETE;
  } else {
    throw ConfigError("potential.law '" + law + "' is not a random law");
  }
  return d;
}

// Discrete laws keep their arrays alive here.
struct LawStorage {
  std::vector<double> values, probs;
  ll_distribution dist{};
};

LawStorage law_from(const json& pot) {
  LawStorage s;
  s.dist = distribution_from(pot);
  if (s.dist.law == LL_LAW_DISCRETE) {
    s.values = get_or(pot, "/values"_json_pointer, std::vector<double>{});
    s.probs = get_or(pot, "/probs"_json_pointer, std::vector<double>{});
    if (s.values.size() != s.probs.size()) throw ConfigError("potential.values and potential.probs differ in length");
    s.dist.values = s.values.data();
    s.dist.probs = s.probs.data();
    s.dist.count = s.values.size();
  }
  return s;
}

Potential make_potential(Run& run) {
  const json pot = run.cfg.value("potential", json::object());
  const std::string law = get_or<std::string>(pot, "/law"_json_pointer, "uniform");
  ll_potential* raw = nullptr;
  if (law == "file") {
    if (!pot.contains("file")) throw ConfigError("potential.file is required for law 'file'");
    check(ll_potential_load(pot["file"].get<std::string>().c_str(), &raw), "loading potential");
    if (pot.contains("bound")) {
      Potential loaded(raw);
      int d = 0, k = 0;
      check(ll_potential_info(loaded.get(), &d, &k, nullptr, nullptr), "potential");
      std::vector<double> v(static_cast<std::size_t>(std::pow(k, d) + 0.5));
      check(ll_potential_values(loaded.get(), v.data(), v.size()), "potential");
      check(ll_potential_create(d, k, v.data(), v.size(), pot["bound"].get<double>(), &raw), "potential");
    }
    return Potential(raw);
  }
  if (!pot.contains("K")) throw ConfigError("potential.K is required");
  const int d = get_or(pot, "/d"_json_pointer, 1);
  const int k = pot["K"].get<int>();
  if (law == "periodic") {
    const auto dims = get_or(pot, "/cell_dims"_json_pointer, std::vector<int>{});
    const auto cell = get_or(pot, "/cell"_json_pointer, std::vector<double>{});
    if (static_cast<int>(dims.size()) != d) throw ConfigError("potential.cell_dims must have d entries");
    check(ll_potential_periodic(d, k, dims.data(), cell.data(), cell.size(), &raw), "periodic potential");
    return Potential(raw);
  }
  const LawStorage s = law_from(pot);
  const auto seed = get_or<std::uint64_t>(pot, "/seed"_json_pointer, 0);
  const auto realization = get_or<std::uint64_t>(pot, "/realization"_json_pointer, 0);
  run.seeds.push_back(seed);
  check(ll_potential_sample(d, k, &s.dist, seed, realization, &raw), "sampling potential");
  return Potential(raw);
}

ll_solve_options solve_options(const json& cfg) {
  ll_solve_options o;
  ll_solve_options_default(&o);
  const json s = cfg.value("solve", json::object());
  const std::string solver = get_or<std::string>(s, "/solver"_json_pointer, "auto");
  if (solver == "auto") o.solver = LL_SOLVER_AUTO;
  else if (solver == "direct") o.solver = LL_SOLVER_DIRECT;
  else if (solver == "cg") o.solver = LL_SOLVER_CG;
  else throw ConfigError("solve.solver must be auto, direct or cg");
  o.tolerance = get_or(s, "/tolerance"_json_pointer, o.tolerance);
  o.direct_limit = get_or(s, "/direct_limit"_json_pointer, o.direct_limit);
  o.allow_constant = get_or(s, "/allow_constant"_json_pointer, false) ? 1 : 0;
  return o;
}

ll_count_options count_options(const json& cfg) {
  ll_count_options o;
  ll_count_options_default(&o);
  const json c = cfg.value("count", json::object());
  const std::string method = get_or<std::string>(c, "/method"_json_pointer, "auto");
  if (method == "auto") o.method = LL_COUNT_AUTO;
  else if (method == "dense") o.method = LL_COUNT_DENSE;
  else if (method == "inertia") o.method = LL_COUNT_INERTIA;
  else throw ConfigError("count.method must be auto, dense or inertia");
  o.dense_limit = get_or(c, "/dense_limit"_json_pointer, o.dense_limit);
  return o;
}

std::vector<double> make_grid(const json& cfg, int d, int k, double vmax) {
  const json g = cfg.value("grid", json::object());
  double floor = 0.0;
  check(ll_min_box_mu(k, &floor), "grid");
  if (g.contains("values")) {
    auto v = g["values"].get<std::vector<double>>();
    if (!std::is_sorted(v.begin(), v.end())) throw ConfigError("grid.values must be sorted");
    return v;
  }
  const auto points = get_or<std::size_t>(g, "/points"_json_pointer, 200);
  if (points < 2) throw ConfigError("grid.points must be at least 2");
  const double top = 4.0 * d + vmax;
  if (!g.contains("min") && !g.contains("max") && get_or<std::string>(g, "/spacing"_json_pointer, "log") == "log") {
    std::vector<double> out(points);
    std::size_t n = 0;
    check(ll_default_grid(d, k, vmax, points, out.data(), out.size(), &n), "grid");
    if (n < points)
      std::cerr << "warning: dropped " << points - n << " grid points below the box-counting floor 1/K^2 = "
                << fmt(floor) << '\n';
    out.resize(n);
    return out;
  }
  const std::string spacing = get_or<std::string>(g, "/spacing"_json_pointer, "log");
  const double lo = get_or(g, "/min"_json_pointer, 1e-3 * top);
  const double hi = get_or(g, "/max"_json_pointer, top);
  if (!(lo > 0.0 && hi > lo)) throw ConfigError("grid needs 0 < min < max");
  std::vector<double> out;
  std::size_t dropped = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    double mu = 0.0;
    if (spacing == "log") mu = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    else if (spacing == "linear") mu = lo + t * (hi - lo);
    else throw ConfigError("grid.spacing must be log or linear");
    if (i + 1 == points) mu = hi;
    if (mu < floor) ++dropped;
    else out.push_back(mu);
  }
  if (dropped)
    std::cerr << "warning: dropped " << dropped << " grid points below the box-counting floor 1/K^2 = " << fmt(floor)
              << '\n';
  return out;
}

struct Problem {
  Potential v;
  Operator h;
  int d = 0;
  int k = 0;
  double vref = 0.0;
  double top = 0.0;
  std::size_t volume = 0;
};

Problem make_problem(Run& run) {
  Problem p;
  p.v = make_potential(run);
  check(ll_potential_info(p.v.get(), &p.d, &p.k, nullptr, &p.vref), "potential");
  ll_hamiltonian* h = nullptr;
  check(ll_hamiltonian_create(p.v.get(), &h), "assembling H");
  p.h.reset(h);
  check(ll_hamiltonian_info(h, nullptr, nullptr, &p.top), "H");
  p.volume = 1;
  for (int i = 0; i < p.d; ++i) p.volume *= static_cast<std::size_t>(p.k);
  return p;
}

Landscape solve(const Run& run, const ll_hamiltonian* h) {
  const ll_solve_options o = solve_options(run.cfg);
  ll_landscape* l = nullptr;
  check(ll_landscape_solve(h, &o, &l), "solving the landscape");
  return Landscape(l);
}

std::vector<double> ids(const Run& run, const ll_hamiltonian* h, const std::vector<double>& grid) {
  const ll_count_options o = count_options(run.cfg);
  std::vector<double> n(grid.size());
  check(ll_ids_curve(h, grid.data(), grid.size(), &o, n.data()), "counting eigenvalues");
  return n;
}

std::vector<double> nu(const ll_landscape* l, const std::vector<double>& grid) {
  std::vector<double> v(grid.size());
  check(ll_nu_curve(l, grid.data(), grid.size(), v.data()), "box counting");
  return v;
}

void failure_report(const std::string& verb, const json& detail) {
  json j;
  j["status"] = "check-failure";
  j["verb"] = verb;
  j["detail"] = detail;
  std::cerr << j.dump() << '\n';
}

// ---- verbs ---------------------------------------------------------------

int cmd_solve(Run& run) {
  Problem p = make_problem(run);
  Landscape l = solve(run, p.h.get());
  double residual = 0.0;
  ll_solver solver = LL_SOLVER_AUTO;
  std::size_t iterations = 0;
  check(ll_landscape_info(l.get(), nullptr, nullptr, &residual, &solver, &iterations), "landscape");
  std::vector<double> u(p.volume);
  check(ll_landscape_values(l.get(), u.data(), u.size()), "landscape");
  const auto pot = run.file("potential.txt");
  const auto land = run.file("landscape.txt");
  check(ll_potential_save(p.v.get(), pot.c_str()), "writing potential");
  check(ll_landscape_save(l.get(), land.c_str()), "writing landscape");
  const double umin = *std::min_element(u.begin(), u.end());
  const json extra = {{"residual", residual},
                      {"solver", solver == LL_SOLVER_CG ? "cg" : "direct"},
                      {"iterations", iterations},
                      {"min_u", umin}};
  run.meta(pot);
  run.meta(land, extra);
  std::cout << "landscape d=" << p.d << " K=" << p.k << " residual=" << fmt(residual) << " min_u=" << fmt(umin)
            << " -> " << land.string() << '\n';
  return kOk;
}

int cmd_ids(Run& run) {
  Problem p = make_problem(run);
  const auto grid = make_grid(run.cfg, p.d, p.k, p.vref);
  const auto n = ids(run, p.h.get(), grid);
  const auto path = run.file("N.csv");
  check(ll_curve_write(path.c_str(), grid.data(), n.data(), grid.size(), "N"), "writing curve");
  run.meta(path, {{"d", p.d}, {"K", p.k}});
  std::cout << "N curve with " << grid.size() << " points -> " << path.string() << '\n';
  return kOk;
}

int cmd_boxcount(Run& run) {
  Landscape l;
  int d = 0, k = 0;
  double vref = 0.0;
  const json bc = run.cfg.value("boxcount", json::object());
  if (bc.contains("landscape")) {
    ll_landscape* raw = nullptr;
    check(ll_landscape_load(bc["landscape"].get<std::string>().c_str(), &raw), "loading landscape");
    l.reset(raw);
    check(ll_landscape_info(raw, &d, &k, nullptr, nullptr, nullptr), "landscape");
    vref = run.cfg.contains("/potential/bound"_json_pointer) ? run.cfg["potential"]["bound"].get<double>() : 0.0;
  } else {
    Problem p = make_problem(run);
    l = solve(run, p.h.get());
    d = p.d;
    k = p.k;
    vref = p.vref;
  }
  const auto grid = make_grid(run.cfg, d, k, vref);
  const auto v = nu(l.get(), grid);
  const auto path = run.file("Nu.csv");
  check(ll_curve_write(path.c_str(), grid.data(), v.data(), grid.size(), "N_u"), "writing curve");
  run.meta(path, {{"d", d}, {"K", k}});
  std::cout << "N_u curve with " << grid.size() << " points -> " << path.string() << '\n';
  return kOk;
}

int cmd_compare(Run& run) {
  const json c = run.cfg.value("compare", json::object());
  std::vector<double> grid, n;
  Landscape l;
  int d = 0;
  if (c.contains("n_curve") || c.contains("landscape")) {
    if (!c.contains("n_curve") || !c.contains("landscape"))
      throw ConfigError("compare.n_curve and compare.landscape must be given together");
    ll_curve* raw = nullptr;
    check(ll_curve_read(c["n_curve"].get<std::string>().c_str(), &raw), "reading N curve");
    Curve curve(raw);
    std::size_t size = 0;
    check(ll_curve_size(raw, &size), "curve");
    grid.resize(size);
    n.resize(size);
    check(ll_curve_data(raw, grid.data(), n.data(), size), "curve");
    ll_landscape* lraw = nullptr;
    check(ll_landscape_load(c["landscape"].get<std::string>().c_str(), &lraw), "loading landscape");
    l.reset(lraw);
    check(ll_landscape_info(lraw, &d, nullptr, nullptr, nullptr, nullptr), "landscape");
  } else {
    Problem p = make_problem(run);
    d = p.d;
    grid = make_grid(run.cfg, p.d, p.k, p.vref);
    n = ids(run, p.h.get(), grid);
    l = solve(run, p.h.get());
    const auto npath = run.file("N.csv");
    check(ll_curve_write(npath.c_str(), grid.data(), n.data(), grid.size(), "N"), "writing curve");
    run.meta(npath);
  }
  ll_report* raw = nullptr;
  check(ll_upper_bound_check(grid.data(), n.data(), grid.size(), l.get(), &raw), "upper bound check");
  Report report(raw);
  json fit = nullptr;
  double c1 = 0.0, c2 = 0.0, dist = 0.0;
  const ll_status fs = ll_fit_scaling(grid.data(), n.data(), grid.size(), l.get(), &c1, &c2, &dist);
  if (fs == LL_OK) {
    check(ll_report_attach_fit(raw, c1, c2, dist), "report");
    fit = {{"c1", c1}, {"c2", c2}, {"sup_distance", dist}};
  } else if (fs != LL_ERR_FIT) {
    check(fs, "fit_scaling");
  } else {
    std::cerr << "warning: fit_scaling: " << ll_last_error() << '\n';
  }
  const auto path = run.file("compare.csv");
  check(ll_report_write(raw, path.c_str()), "writing report");
  std::size_t points = 0, violations = 0, truncated = 0;
  double margin = 0.0;
  check(ll_report_summary(raw, &points, &violations, &truncated, &margin), "report");
  run.meta(path, {{"C1", 4 * d}, {"violations", violations}, {"truncated", truncated}, {"fit", fit}});
  std::cout << "upper law N(mu) <= N_u(" << 4 * d << " mu): " << points << " points, " << violations
            << " violations, min margin " << fmt(margin) << " -> " << path.string() << '\n';
  if (violations == 0) return kOk;
  json rows = json::array();
  std::cout << "violation,mu,lhs,rhs\n";
  for (std::size_t i = 0; i < violations; ++i) {
    double mu = 0.0, lhs = 0.0, rhs = 0.0;
    check(ll_report_violation(raw, i, &mu, &lhs, &rhs), "report");
    std::cout << "violation," << fmt(mu) << ',' << fmt(lhs) << ',' << fmt(rhs) << '\n';
    rows.push_back({{"mu", mu}, {"lhs", lhs}, {"rhs", rhs}});
  }
  failure_report(run.verb, {{"check", "upper"}, {"violations", rows}});
  return kCheckFailure;
}

int cmd_dual(Run& run) {
  Problem p = make_problem(run);
  if (p.k % 2 != 0) throw ConfigError("dual needs an even K (got " + std::to_string(p.k) + ")");
  const auto grid = make_grid(run.cfg, p.d, p.k, p.vref);
  const ll_count_options co = count_options(run.cfg);
  std::int64_t deviation = 0;
  check(ll_dual_identity(p.h.get(), grid.data(), grid.size(), &co, &deviation), "dual identity");
  ll_hamiltonian* draw = nullptr;
  check(ll_hamiltonian_dual(p.h.get(), &draw), "dual operator");
  Operator dual(draw);

  double spectrum_gap = 0.0;
  const bool dense = p.volume <= (co.dense_limit ? co.dense_limit : 4096);
  if (dense) {
    std::vector<double> a(p.volume), b(p.volume);
    check(ll_hamiltonian_spectrum(p.h.get(), a.data(), a.size()), "spectrum");
    check(ll_hamiltonian_spectrum(draw, b.data(), b.size()), "dual spectrum");
    for (double& x : a) x = p.top - x;
    std::sort(a.begin(), a.end());
    for (std::size_t i = 0; i < a.size(); ++i) spectrum_gap = std::max(spectrum_gap, std::abs(a[i] - b[i]));
  }

  const auto n = ids(run, p.h.get(), grid);
  Landscape dl = solve(run, draw);
  std::vector<double> nu_dual(grid.size());
  check(ll_dual_nu_curve(dl.get(), p.top, grid.data(), grid.size(), nu_dual.data()), "dual box counting");
  // Dual upper law: 1 - N_u~(4d mu~) <= N(mu) wherever 4d mu~ is in the box-counting domain.
  double floor = 0.0;
  check(ll_min_box_mu(p.k, &floor), "grid");
  std::vector<double> bound(grid.size(), std::nan(""));
  std::size_t violations = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double arg = 4.0 * p.d * (p.top - grid[i]);
    if (arg < floor) continue;
    double v = 0.0;
    check(ll_box_counting(dl.get(), arg, &v), "dual box counting");
    bound[i] = 1.0 - v;
    if (bound[i] > n[i]) ++violations;
  }
  const auto path = run.file("dual.csv");
  {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << "mu,N,Nu_dual,dual_bound\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      os << fmt(grid[i]) << ',' << fmt(n[i]) << ',' << fmt(nu_dual[i]) << ',' << fmt(bound[i]) << '\n';
  }
  const json extra = {{"identity_max_deviation", deviation},
                      {"spectrum_max_gap", dense ? json(spectrum_gap) : json(nullptr)},
                      {"dual_bound_violations", violations}};
  run.meta(path, extra);
  std::cout << "dual identity max deviation " << deviation;
  if (dense) std::cout << ", spectrum reflection gap " << fmt(spectrum_gap);
  std::cout << ", dual bound violations " << violations << " -> " << path.string() << '\n';
  if (deviation == 0 && violations == 0 && spectrum_gap <= 1e-9) return kOk;
  failure_report(run.verb, extra);
  return kCheckFailure;
}

int cmd_ensemble(Run& run) {
  const json pot = run.cfg.value("potential", json::object());
  const json ens = run.cfg.value("ensemble", json::object());
  if (!pot.contains("K")) throw ConfigError("potential.K is required");
  const LawStorage law = law_from(pot);
  ll_ensemble_config cfg{};
  cfg.d = get_or(pot, "/d"_json_pointer, 1);
  cfg.k = pot["K"].get<int>();
  cfg.dist = law.dist;
  cfg.realizations = get_or<std::size_t>(ens, "/realizations"_json_pointer, 10);
  cfg.seed = get_or<std::uint64_t>(ens, "/seed"_json_pointer, 0);
  run.seeds.push_back(cfg.seed);
  const double vmax = law.dist.law == LL_LAW_UNIFORM     ? law.dist.hi
                      : law.dist.law == LL_LAW_BERNOULLI ? law.dist.height
                      : law.values.empty()               ? 0.0
                                                         : *std::max_element(law.values.begin(), law.values.end());
  const auto grid = make_grid(run.cfg, cfg.d, cfg.k, vmax);
  cfg.grid = grid.data();
  cfg.grid_size = grid.size();
  cfg.want_n = cfg.want_nu = cfg.want_upper = 1;
  cfg.want_dual = get_or(ens, "/dual"_json_pointer, false) ? 1 : 0;
  cfg.threads = get_or<std::size_t>(run.cfg, "/threads"_json_pointer, 1);
  cfg.count = count_options(run.cfg);
  cfg.solve = solve_options(run.cfg);
  ll_ensemble* raw = nullptr;
  check(ll_ensemble_run(&cfg, &raw), "ensemble");
  Ensemble e(raw);
  const auto path = run.file("ensemble.csv");
  check(ll_ensemble_write(raw, path.c_str()), "writing ensemble");
  std::size_t violations = 0;
  check(ll_ensemble_upper_violations(raw, &violations), "upper check");
  json extra = {{"realizations", cfg.realizations},
                {"common_random_numbers", true},
                {"upper_violations", violations}};
  if (ens.contains("window")) {
    const double mu0 = get_or(ens, "/window/mu0"_json_pointer, grid.back());
    const double kstar = get_or(ens, "/window/kstar"_json_pointer, 1.0);
    double lo = 0.0, hi = 0.0, slope = 0.0;
    std::size_t used = 0, excluded = 0;
    check(ll_ensemble_tail(raw, cfg.k, mu0, kstar, &lo, &hi, &used, &excluded, &slope), "tail fit");
    extra["tail"] = {{"lo", lo}, {"hi", hi}, {"points", used}, {"excluded", excluded}, {"slope", slope}};
    std::cout << "tail window [" << fmt(lo) << ", " << fmt(hi) << "] with " << used << " points (" << excluded
              << " excluded): slope " << fmt(slope) << '\n';
  }
  run.meta(path, extra);
  std::cout << "ensemble of " << cfg.realizations << " realizations, upper-law violations " << violations << " -> "
            << path.string() << '\n';
  if (violations == 0) return kOk;
  failure_report(run.verb, {{"check", "mean upper"}, {"violations", violations}});
  return kCheckFailure;
}

int cmd_verify(Run& run) {
  const json v = run.cfg.value("verify", json::object());
  const auto seed = get_or<std::uint64_t>(v, "/seed"_json_pointer, 1);
  const auto trials = get_or<std::size_t>(v, "/trials"_json_pointer, 500);
  const auto ctrials = get_or<std::size_t>(v, "/chernoff_trials"_json_pointer, 100000);
  run.seeds.push_back(seed);
  ll_suite* raw = nullptr;
  check(ll_suite_run(seed, trials, ctrials, &raw), "oracle suite");
  Suite s(raw);
  const auto text = run.file("verify.txt");
  const auto csv = run.file("verify.csv");
  check(ll_suite_write(raw, text.c_str(), 0), "writing suite");
  check(ll_suite_write(raw, csv.c_str(), 1), "writing suite");
  check(ll_suite_write(raw, "-", 0), "writing suite");
  int pass = 0;
  check(ll_suite_hard_pass(raw, &pass), "suite");
  run.meta(csv);
  if (pass) return kOk;
  json failed = json::array();
  std::size_t rows = 0;
  check(ll_suite_rows(raw, &rows), "suite");
  for (std::size_t i = 0; i < rows; ++i) {
    const char* name = nullptr;
    int hard = 0;
    std::size_t t = 0, ok = 0;
    check(ll_suite_row(raw, i, &name, &hard, &t, &ok, nullptr), "suite");
    if (hard && ok != t) failed.push_back({{"oracle", name}, {"passed", ok}, {"trials", t}});
  }
  failure_report(run.verb, {{"failed", failed}});
  return kCheckFailure;
}

int cmd_figure4(Run& run) {
  const json f = run.cfg.value("figure4", json::object());
  const auto seed = get_or<std::uint64_t>(f, "/seed"_json_pointer, 7);
  const auto seeds = get_or<std::size_t>(f, "/seeds"_json_pointer, 1);
  if (seeds < 1) throw ConfigError("figure4.seeds must be >= 1");
  constexpr int d = 1;
  constexpr int k = 300;
  const ll_distribution dist{LL_LAW_UNIFORM, 0.0, 10.0, 0.0, 0.0, nullptr, nullptr, 0};
  const double top = 4.0 * d + 10.0;
  std::vector<double> grid;
  const std::size_t points = get_or<std::size_t>(run.cfg, "/grid/points"_json_pointer, 280);
  for (std::size_t i = 1; i <= points; ++i) grid.push_back(top * static_cast<double>(i) / static_cast<double>(points));

  std::vector<double> n(grid.size(), 0.0), dual_nu(grid.size(), 0.0);
  std::vector<Landscape> landscapes;
  json per_seed = json::array();
  for (std::size_t s = 0; s < seeds; ++s) {
    run.seeds.push_back(seed + s);
    ll_potential* vraw = nullptr;
    check(ll_potential_sample(d, k, &dist, seed + s, 0, &vraw), "sampling potential");
    Potential v(vraw);
    ll_hamiltonian* hraw = nullptr;
    check(ll_hamiltonian_create(vraw, &hraw), "assembling H");
    Operator h(hraw);
    const auto ns = ids(run, hraw, grid);
    Landscape l = solve(run, hraw);
    ll_hamiltonian* draw = nullptr;
    check(ll_hamiltonian_dual(hraw, &draw), "dual operator");
    Operator dual(draw);
    Landscape dl = solve(run, draw);
    std::vector<double> ds(grid.size());
    check(ll_dual_nu_curve(dl.get(), top, grid.data(), grid.size(), ds.data()), "dual box counting");
    double c1 = 0.0, c2 = 0.0, dist_s = 0.0;
    check(ll_fit_scaling(grid.data(), ns.data(), grid.size(), l.get(), &c1, &c2, &dist_s), "fit_scaling");
    per_seed.push_back({{"seed", seed + s}, {"c1", c1}, {"c2", c2}, {"sup_distance", dist_s}});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      n[i] += ns[i] / static_cast<double>(seeds);
      dual_nu[i] += ds[i] / static_cast<double>(seeds);
    }
    landscapes.push_back(std::move(l));
  }
  std::vector<const ll_landscape*> ptrs;
  for (const auto& l : landscapes) ptrs.push_back(l.get());
  double c1 = 0.0, c2 = 0.0, dist_fit = 0.0;
  check(ll_fit_scaling_mean(grid.data(), n.data(), grid.size(), ptrs.data(), ptrs.size(), &c1, &c2, &dist_fit),
        "fit_scaling");
  // Scaled landscape curve c1 * mean N_u(c2 mu).
  std::vector<double> scaled(grid.size(), 0.0);
  for (const auto& l : landscapes) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double v = 0.0;
      check(ll_box_counting(l.get(), c2 * grid[i], &v), "box counting");
      scaled[i] += c1 * v / static_cast<double>(seeds);
    }
  }
  const auto path = run.file("figure4.csv");
  {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << "mu,N,Nu,Nu_dual\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
      os << fmt(grid[i]) << ',' << fmt(n[i]) << ',' << fmt(scaled[i]) << ',' << fmt(dual_nu[i]) << '\n';
  }
  run.meta(path, {{"d", d},
                  {"K", k},
                  {"law", "uniform[0,10]"},
                  {"fit", {{"c1", c1}, {"c2", c2}, {"sup_distance", dist_fit}}},
                  {"per_seed", per_seed}});
  if (get_or(f, "/plot"_json_pointer, false)) {
    std::ofstream gp(run.file("figure4.gp"));
    gp << "set datafile separator ','\nset key left top\nset xlabel 'mu'\n"
       << "plot 'figure4.csv' using 1:2 with lines title 'N', \\\n"
       << "     '' using 1:3 with lines title 'c1 N_u(c2 mu)', \\\n"
       << "     '' using 1:4 with lines title '1 - N_u dual'\n";
  }
  std::cout << "figure4: " << seeds << " seed(s), c1=" << fmt(c1) << " c2=" << fmt(c2)
            << " sup-distance=" << fmt(dist_fit) << " -> " << path.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Landscape-law numerics on periodic lattices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ll_version()));
  Flags flags;
  struct Verb {
    const char* name;
    const char* help;
    int (*run)(Run&);
  };
  const Verb verbs[] = {
      {"solve", "solve H u = 1 and write the landscape field", cmd_solve},
      {"ids", "integrated density of states N(mu)", cmd_ids},
      {"boxcount", "landscape box-counting function N_u(mu)", cmd_boxcount},
      {"compare", "upper landscape law check and scaling fit", cmd_compare},
      {"dual", "dual operator identity and dual curves", cmd_dual},
      {"ensemble", "Anderson ensemble means and tail fit", cmd_ensemble},
      {"verify", "oracle suite over a seeded battery", cmd_verify},
      {"figure4", "d=1, K=300, uniform[0,10] comparison of N and N_u", cmd_figure4},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const Verb& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, flags);
    subs.emplace_back(sub, &v);
  }
  for (auto& [sub, v] : subs) {
    const std::string name = v->name;
    if (name == "boxcount" || name == "compare") sub->add_option("--landscape", flags.landscape, "landscape field file");
    if (name == "compare") sub->add_option("--n-curve", flags.n_curve, "N curve CSV");
    if (name == "ensemble") {
      sub->add_option("--realizations", flags.realizations, "number of realizations");
      sub->add_flag("--dual", flags.dual, "also average the dual curve");
      sub->add_option("--mu0", flags.mu0, "upper edge of the tail window");
      sub->add_option("--kstar", flags.kstar, "tail window lower edge K_*/K^2");
    }
    if (name == "verify") {
      sub->add_option("--trials", flags.trials, "randomized trials per oracle");
      sub->add_option("--chernoff-trials", flags.chernoff_trials, "Monte Carlo draws per Chernoff cell");
    }
    if (name == "figure4") {
      sub->add_option("--seeds", flags.seeds, "number of consecutive seeds to average");
      sub->add_flag("--plot", flags.plot, "write a gnuplot script next to the CSV");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  for (auto& [sub, v] : subs) {
    if (!sub->parsed()) continue;
    Run run;
    run.verb = v->name;
    try {
      run.cfg = load_config(run.verb, flags);
      run.out = get_or<std::string>(run.cfg, "/output"_json_pointer, ".");
      fs::create_directories(run.out);
      return v->run(run);
    } catch (const ConfigError& e) {
      std::cerr << json{{"status", "config-error"}, {"verb", run.verb}, {"message", e.what()}}.dump() << '\n';
      return kConfigError;
    } catch (const NumericalError& e) {
      std::cerr << json{{"status", "numerical-failure"}, {"verb", run.verb}, {"code", ll_status_name(e.status)},
                        {"message", e.what()}}
                       .dump()
                << '\n';
      return kNumericalFailure;
    } catch (const json::exception& e) {
      std::cerr << json{{"status", "config-error"}, {"verb", run.verb}, {"message", e.what()}}.dump() << '\n';
      return kConfigError;
    } catch (const fs::filesystem_error& e) {
      std::cerr << json{{"status", "config-error"}, {"verb", run.verb}, {"message", e.what()}}.dump() << '\n';
      return kConfigError;
    }
  }
  return kConfigError;
}
