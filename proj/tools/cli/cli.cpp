#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "evolvekit/density.hpp"
#include "evolvekit/errors.hpp"
#include "evolvekit/geometry.hpp"
#include "evolvekit/simulator.hpp"
#include "evolvekit/verification.hpp"

namespace evolvekit::cli {

using json = nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_number(text.substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec != std::errc{} || ptr != last || text.empty())
    throw InvalidArgument("expected a non-negative integer, got '" + text + "'");
  return value;
}

unsigned thread_cap() {
  const char* env = std::getenv("EVOLVEKIT_THREADS");
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (!env || !*env) return hw;
  const std::uint64_t requested = parse_seed(env);
  if (requested == 0) throw InvalidArgument("EVOLVEKIT_THREADS must be >= 1");
  return static_cast<unsigned>(std::min<std::uint64_t>(requested, hw));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json manifest(const std::string& command, const json& params, std::uint64_t seed) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"params", params},
          {"seed", seed},
          {"version", EVOLVEKIT_VERSION_STRING},
          {"timestamp", utc_timestamp()}};
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::filesystem::path partial = path;
  partial += ".partial";
  {
    std::ofstream file(partial, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open " + partial.string() + " for writing");
    try {
      body(file);
      file.flush();
      if (!file) throw std::runtime_error("write to " + partial.string() + " failed");
    } catch (...) {
      file.close();
      std::error_code ec;
      std::filesystem::remove(partial, ec);
      throw;
    }
  }
  std::error_code ec;
  std::filesystem::rename(partial, path, ec);
  if (ec) {
    std::filesystem::remove(partial, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

// Sidecar manifest first, then the payload; stdout gets the payload only.
void emit(const std::string& out_path, const json& run_manifest, std::ostream& out,
          const std::function<void(std::ostream&)>& body) {
  if (out_path.empty()) {
    body(out);
    return;
  }
  write_file(out_path + ".manifest.json", [&](std::ostream& os) { os << run_manifest.dump(2) << '\n'; });
  write_file(out_path, body);
}

void require_format(const std::string& format) {
  if (format != "csv" && format != "json") throw InvalidArgument("--format must be csv or json");
}

std::string join(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_number(values[i]);
  }
  return s;
}

std::string coordinate_header(int n) {
  std::string s;
  for (int j = 1; j <= n; ++j) {
    if (j > 1) s += ',';
    s += "x_" + std::to_string(j);
  }
  return s;
}

EvolutionParams make_params(int n, const std::string& lambda, const std::string& v) {
  EvolutionParams p{n, parse_number(lambda), parse_number(v)};
  p.validate();
  return p;
}

json params_json(const EvolutionParams& p) { return {{"n", p.n}, {"lambda", p.lambda}, {"v", p.v}}; }

// --- geometry ---------------------------------------------------------------

struct GeometryArgs {
  int n = 1;
  std::string format = "csv";
  std::string out;
};

int cmd_geometry(const GeometryArgs& a, std::ostream& out) {
  if (a.n < 1) throw InvalidArgument("n must be >= 1");
  require_format(a.format);
  const SimplexGeometry g(a.n);
  const double unit_volume = g.volume(1.0);
  const double edge = std::sqrt(2.0 * (a.n + 1.0) / a.n);
  const double dot = -1.0 / a.n;
  const json m = manifest("geometry", {{"n", a.n}, {"format", a.format}}, 0);
  emit(a.out, m, out, [&](std::ostream& os) {
    if (a.format == "csv") {
      os << "vertex," << coordinate_header(a.n) << '\n';
      for (int i = 0; i <= a.n; ++i) os << i << ',' << join(g.vertex(i)) << '\n';
      os << "#unit_volume=" << format_number(unit_volume) << ",edge_length=" << format_number(edge)
         << ",vertex_dot=" << format_number(dot) << '\n';
    } else {
      json doc{{"schema_version", kSchemaVersion}, {"n", a.n}};
      json vertices = json::array();
      for (int i = 0; i <= a.n; ++i) {
        auto v = g.vertex(i);
        vertices.push_back(std::vector<double>(v.begin(), v.end()));
      }
      doc["vertices"] = vertices;
      doc["constants"] = {{"unit_volume", unit_volume}, {"edge_length", edge}, {"vertex_dot", dot}};
      os << doc.dump(2) << '\n';
    }
  });
  return kExitOk;
}

// --- density ----------------------------------------------------------------

struct DensityArgs {
  int n = 1;
  std::string lambda = "1", v = "1", t = "1";
  std::string grid;
  std::vector<std::string> points;
  std::string format = "csv";
  std::string out;
};

struct Axis {
  double lo, hi;
  std::size_t count;
};

Axis parse_axis(const std::string& text) {
  const std::size_t a = text.find(':');
  const std::size_t b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw InvalidArgument("grid axis must be lo:hi:count, got '" + text + "'");
  Axis axis{parse_number(text.substr(0, a)), parse_number(text.substr(a + 1, b - a - 1)), 0};
  axis.count = parse_seed(text.substr(b + 1));
  if (axis.count < 1) throw InvalidArgument("grid axis needs at least one point");
  if (axis.count > 1 && !(axis.hi > axis.lo)) throw InvalidArgument("grid axis needs hi > lo");
  return axis;
}

std::vector<std::vector<double>> box_grid(int n, const std::string& spec) {
  std::vector<Axis> axes;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = spec.find(',', start);
    axes.push_back(parse_axis(spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (axes.size() == 1) axes.resize(n, axes.front());
  if (axes.size() != static_cast<std::size_t>(n)) throw InvalidArgument("grid needs one axis or exactly n axes");
  std::size_t total = 1;
  for (const Axis& ax : axes) {
    if (ax.count > 100000000 / total) throw InvalidArgument("grid has more than 1e8 points");
    total *= ax.count;
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t p = 0; p < total; ++p) {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) {
      const Axis& ax = axes[j];
      x[j] = ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * static_cast<double>(idx[j]) / (ax.count - 1);
    }
    pts.push_back(std::move(x));
    for (int j = n - 1; j >= 0 && ++idx[j] == axes[j].count; --j) idx[j] = 0;
  }
  return pts;
}

// Barycentric lattice with m subdivisions per edge, mapped onto T_vt.
std::vector<std::vector<double>> simplex_grid(const EvolutionParams& p, double t, std::size_t m) {
  if (p.n > 3) throw InvalidArgument("simplex grid is offered for n <= 3 only");
  if (m < 1 || m > 2000) throw InvalidArgument("simplex grid subdivisions must lie in [1, 2000]");
  const SimplexGeometry g(p.n);
  const auto corners = g.vertices_at(p.v * t);
  std::vector<std::vector<double>> pts;
  std::vector<std::size_t> k(p.n + 1, 0);
  std::function<void(int, std::size_t)> rec = [&](int i, std::size_t left) {
    if (i == p.n) {
      k[i] = left;
      std::vector<double> x(p.n, 0.0);
      for (int c = 0; c <= p.n; ++c)
        for (int j = 0; j < p.n; ++j) x[j] += static_cast<double>(k[c]) / m * corners[c][j];
      pts.push_back(std::move(x));
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, m);
  return pts;
}

int cmd_density(const DensityArgs& a, std::ostream& out) {
  require_format(a.format);
  const EvolutionParams p = make_params(a.n, a.lambda, a.v);
  const double t = parse_number(a.t);
  if (!(t > 0.0)) throw InvalidArgument("t must be > 0");
  if (a.grid.empty() == a.points.empty()) throw InvalidArgument("give exactly one of --grid or --point");

  std::vector<std::vector<double>> pts;
  if (!a.grid.empty()) {
    if (a.grid.rfind("simplex:", 0) == 0)
      pts = simplex_grid(p, t, parse_seed(a.grid.substr(8)));
    else
      pts = box_grid(p.n, a.grid);
  } else {
    for (const auto& s : a.points) {
      auto x = parse_list(s);
      if (x.size() != static_cast<std::size_t>(p.n)) throw InvalidArgument("point '" + s + "' does not have n coordinates");
      pts.push_back(std::move(x));
    }
  }

  const DensityModel model(p);
  std::vector<DensityValue> values;
  values.reserve(pts.size());
  for (const auto& x : pts) values.push_back(model.evaluate(x, t));
  const double acm = ac_mass(p, t);
  const double bp = boundary_probability(p, t);

  json params = params_json(p);
  params["t"] = t;
  params["grid"] = a.grid;
  params["points"] = a.points;
  params["format"] = a.format;
  emit(a.out, manifest("density", params, 0), out, [&](std::ostream& os) {
    if (a.format == "csv") {
      os << coordinate_header(p.n) << ",membership,density\n";
      for (std::size_t i = 0; i < pts.size(); ++i)
        os << join(pts[i]) << ',' << to_string(values[i].location) << ',' << format_number(values[i].value) << '\n';
      os << "#ac_mass=" << format_number(acm) << ",boundary_probability=" << format_number(bp) << '\n';
    } else {
      json rows = json::array();
      for (std::size_t i = 0; i < pts.size(); ++i)
        rows.push_back({{"x", pts[i]}, {"membership", to_string(values[i].location)}, {"density", values[i].value}});
      json doc{{"schema_version", kSchemaVersion}, {"params", params_json(p)}, {"t", t}, {"rows", rows},
               {"ac_mass", acm}, {"boundary_probability", bp}};
      os << doc.dump(2) << '\n';
    }
  });
  return kExitOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  int n = 1;
  std::string lambda = "1", v = "1", t = "1";
  std::size_t samples = 1000;
  std::string seed = "0";
  std::string policy = "uniform";
  std::string format = "csv";
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, unsigned threads) {
  require_format(a.format);
  const EvolutionParams p = make_params(a.n, a.lambda, a.v);
  SimulationConfig config;
  config.horizon = parse_number(a.t);
  config.samples = a.samples;
  config.seed = parse_seed(a.seed);
  config.initial_direction = InitialDirection::parse(a.policy);
  config.threads = threads;
  config.validate(p.n);
  const auto data = simulate_batch(p, config);

  json params = params_json(p);
  params["t"] = config.horizon;
  params["samples"] = config.samples;
  params["policy"] = config.initial_direction.to_string();
  params["format"] = a.format;
  emit(a.out, manifest("simulate", params, config.seed), out, [&](std::ostream& os) {
    if (a.format == "csv") {
      os << coordinate_header(p.n) << ",switches,initial_direction,current_direction\n";
      for (const auto& s : data)
        os << join(s.position) << ',' << s.switches << ',' << s.initial_direction << ',' << s.current_direction
           << '\n';
    } else {
      json rows = json::array();
      for (const auto& s : data)
        rows.push_back({{"x", s.position},
                        {"switches", s.switches},
                        {"initial_direction", s.initial_direction},
                        {"current_direction", s.current_direction}});
      json doc{{"schema_version", kSchemaVersion}, {"params", params_json(p)}, {"t", config.horizon},
               {"seed", config.seed}, {"samples", rows}};
      os << doc.dump(2) << '\n';
    }
  });
  return kExitOk;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::vector<int> n;
  std::string lambda = "1", v = "1";
  std::string t;
  std::size_t budget = 200000;
  std::string seed = "1";
  std::string mutate = "none";
  std::string format = "json";
  std::string out;
};

Mutation parse_mutation(const std::string& s) {
  if (s == "none") return Mutation::none;
  if (s == "prefactor") return Mutation::prefactor;
  if (s == "alpha") return Mutation::alpha;
  if (s == "volume") return Mutation::volume;
  throw InvalidArgument("--mutate must be none, prefactor, alpha or volume");
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err, unsigned threads) {
  require_format(a.format);
  const auto suite = parse_suite(a.suite);
  if (!suite) throw UsageError("unknown suite '" + a.suite + "'");
  VerifyOptions options;
  options.suite = *suite;
  options.budget = a.budget;
  options.seed = parse_seed(a.seed);
  options.threads = threads;
  options.mutation = parse_mutation(a.mutate);
  options.grid.lambda = parse_number(a.lambda);
  options.grid.v = parse_number(a.v);
  if (!a.n.empty()) options.grid.dimensions = a.n;
  if (!a.t.empty()) {
    options.grid.lambda_t.clear();
    for (double t : parse_list(a.t)) options.grid.lambda_t.push_back(options.grid.lambda * t);
  }
  for (int n : options.grid.dimensions) make_params(n, a.lambda, a.v);

  const RunResult result = run_all(options);

  json checks = json::array();
  for (const auto& r : result.reports)
    checks.push_back({{"suite", r.suite},
                      {"check", r.check},
                      {"target", r.target},
                      {"estimate", r.estimate},
                      {"sigma", r.error},
                      {"rule", r.rule},
                      {"pass", r.pass},
                      {"informational", r.informational},
                      {"detail", r.detail}});
  json params{{"suite", a.suite}, {"n", options.grid.dimensions}, {"lambda", options.grid.lambda},
              {"v", options.grid.v}, {"lambda_t", options.grid.lambda_t}, {"budget", options.budget},
              {"mutate", a.mutate}, {"format", a.format}};
  emit(a.out, manifest("verify", params, options.seed), out, [&](std::ostream& os) {
    if (a.format == "json") {
      json doc{{"schema_version", kSchemaVersion}, {"status", to_string(result.status)},
               {"failures", result.failures}, {"checks", checks}};
      os << doc.dump(2) << '\n';
    } else {
      os << "suite,check,target,estimate,sigma,pass,informational\n";
      for (const auto& r : result.reports) {
        std::string check = r.check;
        std::replace(check.begin(), check.end(), ',', ';');
        os << r.suite << ',' << check << ',' << format_number(r.target) << ',' << format_number(r.estimate) << ','
           << format_number(r.error) << ',' << (r.pass ? 1 : 0) << ',' << (r.informational ? 1 : 0) << '\n';
      }
      os << "#status=" << to_string(result.status) << ",failures=" << result.failures << '\n';
    }
  });
  for (const auto& r : result.reports)
    err << (r.informational ? "INFO " : r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.check << '\n';
  err << "status: " << to_string(result.status) << " (" << result.failures << " failing)\n";
  return result.status == RunStatus::all_passed ? kExitOk : kExitFailure;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

double parse_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last || !std::isfinite(value))
    throw InvalidArgument("expected a finite number, got '" + text + "'");
  return value;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic random evolution on the regular simplex: geometry, density, simulation, verification",
               "evolvekit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EVOLVEKIT_VERSION_STRING);

  GeometryArgs ga;
  auto* geometry = app.add_subcommand("geometry", "Vertex table of the unit simplex");
  geometry->add_option("--n", ga.n, "Dimension")->required();
  geometry->add_option("--format", ga.format, "csv or json");
  geometry->add_option("--out", ga.out, "Output path (default stdout)");

  DensityArgs da;
  auto* dens = app.add_subcommand("density", "Absolutely continuous density on a grid or at points");
  dens->add_option("--n", da.n, "Dimension")->required();
  dens->add_option("--lambda", da.lambda, "Switching rate");
  dens->add_option("--v", da.v, "Speed");
  dens->add_option("--t", da.t, "Time (> 0)");
  dens->add_option("--grid", da.grid, "lo:hi:count[,lo:hi:count...] or simplex:<m>");
  dens->add_option("--point", da.points, "Comma-separated coordinates; repeatable");
  dens->add_option("--format", da.format, "csv or json");
  dens->add_option("--out", da.out, "Output path (default stdout)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Endpoint dataset of simulated trajectories");
  sim->add_option("--n", sa.n, "Dimension")->required();
  sim->add_option("--lambda", sa.lambda, "Switching rate");
  sim->add_option("--v", sa.v, "Speed");
  sim->add_option("--t", sa.t, "Horizon");
  sim->add_option("--samples", sa.samples, "Number of trajectories");
  sim->add_option("--seed", sa.seed, "Seed");
  sim->add_option("--policy", sa.policy, "uniform or fixed:<i>");
  sim->add_option("--format", sa.format, "csv or json");
  sim->add_option("--out", sa.out, "Output path (default stdout)");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Run verification suites and write a report");
  ver->add_option("--suite", va.suite,
                  "geometry, coefficients, telegraph, normalization, bessel-integral, beta, remark, mc-fit or all");
  ver->add_option("--n", va.n, "Dimensions of the grid")->delimiter(',');
  ver->add_option("--lambda", va.lambda, "Switching rate");
  ver->add_option("--v", va.v, "Speed");
  ver->add_option("--t", va.t, "Comma-separated times");
  ver->add_option("--budget", va.budget, "Monte Carlo samples per stochastic check; 0 runs nothing");
  ver->add_option("--seed", va.seed, "Seed");
  ver->add_option("--mutate", va.mutate, "Corrupt a constant: none, prefactor, alpha, volume");
  ver->add_option("--format", va.format, "json or csv");
  ver->add_option("--out", va.out, "Report path (default stdout)");

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const unsigned threads = thread_cap();
    if (*geometry) return cmd_geometry(ga, out);
    if (*dens) return cmd_density(da, out);
    if (*sim) return cmd_simulate(sa, out, threads);
    if (*ver) return cmd_verify(va, out, err, threads);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace evolvekit::cli
