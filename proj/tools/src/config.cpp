#include "cgabor_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace cgabor::cli {

namespace {

constexpr double kPi = std::numbers::pi;

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!allowed.count(std::string(k.str())))
      throw ConfigError("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

const toml::table* sub_table(const toml::table& root, const char* name) {
  const toml::node* n = root.get(name);
  if (!n) return nullptr;
  if (!n->is_table()) throw ConfigError(std::string("[") + name + "] must be a table");
  return n->as_table();
}

std::string key_path(const std::string& where, const char* key) { return where + "." + key; }

double get_double(const toml::table& t, const std::string& where, const char* key, double fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) return *v;
  throw ConfigError(key_path(where, key) + " must be a number");
}

std::int64_t get_int(const toml::table& t, const std::string& where, const char* key, std::int64_t fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (!n->is_integer()) throw ConfigError(key_path(where, key) + " must be an integer");
  return *n->value<std::int64_t>();
}

std::string get_string(const toml::table& t, const std::string& where, const char* key,
                       const std::string& fallback) {
  const toml::node* n = t.get(key);
  if (!n) return fallback;
  if (!n->is_string()) throw ConfigError(key_path(where, key) + " must be a string");
  return *n->value<std::string>();
}

Vec to_vec(const toml::node& n, const std::string& name) {
  const toml::array* a = n.as_array();
  if (!a) throw ConfigError(name + " must be an array of numbers");
  Vec v(static_cast<Eigen::Index>(a->size()));
  for (size_t i = 0; i < a->size(); ++i) {
    const toml::node& e = (*a)[i];
    if (!(e.is_floating_point() || e.is_integer())) throw ConfigError(name + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = *e.value<double>();
  }
  return v;
}

std::optional<Vec> get_vec(const toml::table& t, const std::string& where, const char* key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  return to_vec(*n, key_path(where, key));
}

std::vector<Vec> get_vec_list(const toml::table& t, const std::string& where, const char* key) {
  std::vector<Vec> out;
  const toml::node* n = t.get(key);
  if (!n) return out;
  const toml::array* a = n->as_array();
  if (!a) throw ConfigError(key_path(where, key) + " must be an array of arrays");
  for (size_t i = 0; i < a->size(); ++i)
    out.push_back(to_vec((*a)[i], key_path(where, key) + "[" + std::to_string(i) + "]"));
  return out;
}

// Which optional settings the document gave explicitly.
struct Presence {
  bool manifold_dim = false;
  bool bargmann_n = false;
  std::optional<double> window_scalar;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

int positive_int(std::int64_t v, const std::string& name, std::int64_t cap = 1 << 30) {
  require(v >= 1 && v <= cap, name + " must be in [1, " + std::to_string(cap) + "]");
  return static_cast<int>(v);
}

void read_manifold(const toml::table& t, RunConfig& c, Presence& pr) {
  const std::string w = "manifold";
  check_keys(t, w, {"kind", "dim", "radii", "radius"});
  c.manifold.kind = get_string(t, w, "kind", c.manifold.kind);
  require(c.manifold.kind == "flat_torus" || c.manifold.kind == "round_sphere",
          "manifold.kind must be flat_torus or round_sphere");
  c.manifold.dim = positive_int(get_int(t, w, "dim", c.manifold.dim), "manifold.dim", 8);
  if (auto r = get_vec(t, w, "radii")) {
    c.manifold.radii = *r;
    if (!t.get("dim")) c.manifold.dim = static_cast<int>(r->size());
  }
  c.manifold.radius = get_double(t, w, "radius", c.manifold.radius);
  pr.manifold_dim = t.get("dim") || t.get("radii") || c.manifold.kind == "round_sphere";
}

void read_window(const toml::table& t, RunConfig& c, Presence& pr) {
  const std::string w = "window";
  check_keys(t, w, {"a", "A", "eigen_floor"});
  require(!(t.get("a") && t.get("A")), "window: give either a or A, not both");
  if (t.get("a")) pr.window_scalar = get_double(t, w, "a", 0);
  if (t.get("A")) {
    const auto rows = get_vec_list(t, w, "A");
    require(!rows.empty(), "window.A must be non-empty");
    Mat A(rows.size(), rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == static_cast<Eigen::Index>(rows.size()), "window.A must be square");
      A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    c.A = A;
  }
  c.eigen_floor = get_double(t, w, "eigen_floor", c.eigen_floor);
  require(c.eigen_floor > 0, "window.eigen_floor must be positive");
}

void read_lattice(const toml::table& t, RunConfig& c) {
  const std::string w = "lattice";
  check_keys(t, w, {"variant", "translation_scales", "modulation_scales", "K", "structure",
                    "base_point", "covector"});
  const std::string variant = get_string(t, w, "variant", "reeb");
  if (variant == "reeb")
    c.lattice.variant = LatticeVariant::reeb;
  else if (variant == "dual_basis")
    c.lattice.variant = LatticeVariant::dual_basis;
  else
    throw ConfigError("lattice.variant must be reeb or dual_basis");
  if (auto v = get_vec(t, w, "translation_scales")) c.lattice.translation_scales = *v;
  if (auto v = get_vec(t, w, "modulation_scales")) c.lattice.modulation_scales = *v;
  const auto K = get_int(t, w, "K", c.lattice.K);
  require(K >= 0 && K <= 64, "lattice.K must be in [0, 64]");
  c.lattice.K = static_cast<int>(K);
  c.structure = get_string(t, w, "structure", c.structure);
  require(c.structure == "rotation" || c.structure == "hypercomplex",
          "lattice.structure must be rotation or hypercomplex");
  if (auto v = get_vec(t, w, "base_point")) c.base_point = *v;
  if (auto v = get_vec(t, w, "covector")) c.covector = *v;
}

void read_signal(const toml::table& t, RunConfig& c) {
  const std::string w = "signal";
  check_keys(t, w, {"kind", "normal", "offset", "center", "radius", "width", "period", "value", "path"});
  auto& s = c.signal;
  s.kind = get_string(t, w, "kind", s.kind);
  require(s.kind == "half_space" || s.kind == "ball" || s.kind == "band" || s.kind == "constant" ||
              s.kind == "grid",
          "signal.kind must be one of half_space, ball, band, constant, grid");
  if (auto v = get_vec(t, w, "normal")) s.normal = *v;
  if (auto v = get_vec(t, w, "center")) s.center = *v;
  s.offset = get_double(t, w, "offset", s.offset);
  s.radius = get_double(t, w, "radius", s.radius);
  s.width = get_double(t, w, "width", s.width);
  s.period = get_double(t, w, "period", s.period);
  s.value = get_double(t, w, "value", s.value);
  s.path = get_string(t, w, "path", s.path);
}

void read_probes(const toml::table& t, RunConfig& c) {
  const std::string w = "probes";
  check_keys(t, w, {"points", "grid"});
  c.probes = get_vec_list(t, w, "points");
  if (const toml::node* g = t.get("grid")) {
    const Vec sizes = to_vec(*g, "probes.grid");
    for (Eigen::Index i = 0; i < sizes.size(); ++i) {
      require(sizes(i) >= 1 && sizes(i) == std::floor(sizes(i)), "probes.grid entries must be positive integers");
      c.probe_grid.push_back(static_cast<int>(sizes(i)));
    }
  }
  require(c.probes.empty() || c.probe_grid.empty(), "probes: give either points or grid, not both");
}

void read_budget(const toml::table& t, RunConfig& c) {
  const std::string w = "budget";
  check_keys(t, w, {"nodes", "work", "max_atoms"});
  c.budget = get_double(t, w, "nodes", c.budget);
  require(c.budget > 0, "budget.nodes must be positive");
  c.frame.work_budget = get_double(t, w, "work", c.frame.work_budget);
  c.frame.max_atoms = get_double(t, w, "max_atoms", c.frame.max_atoms);
  require(c.frame.work_budget > 0 && c.frame.max_atoms > 0, "budget.work and budget.max_atoms must be positive");
}

void read_detect(const toml::table& t, RunConfig& c) {
  const std::string w = "detect";
  check_keys(t, w, {"sphere_resolution", "fiber_nodes", "tau", "magnitude_floor", "refine_steps", "delta"});
  auto& d = c.detect;
  d.sphere_resolution = positive_int(get_int(t, w, "sphere_resolution", d.sphere_resolution),
                                     "detect.sphere_resolution");
  d.output.fiber_nodes = positive_int(get_int(t, w, "fiber_nodes", d.output.fiber_nodes), "detect.fiber_nodes");
  d.tau = get_double(t, w, "tau", d.tau);
  require(d.tau >= 0 && d.tau < 1, "detect.tau must be in [0, 1)");
  d.magnitude_floor = get_double(t, w, "magnitude_floor", d.magnitude_floor);
  require(d.magnitude_floor >= 0, "detect.magnitude_floor must be non-negative");
  const auto steps = get_int(t, w, "refine_steps", d.refine_steps);
  require(steps >= 0 && steps <= 60, "detect.refine_steps must be in [0, 60]");
  d.refine_steps = static_cast<int>(steps);
  d.output.delta = get_double(t, w, "delta", d.output.delta);
  require(d.output.delta > 0, "detect.delta must be positive");
}

void read_frame(const toml::table& t, RunConfig& c) {
  const std::string w = "frame";
  check_keys(t, w, {"method", "oversample", "decay", "min_nodes", "power_iterations", "power_tolerance"});
  auto& f = c.frame;
  const std::string method = get_string(t, w, "method", "dense");
  if (method == "dense")
    f.method = ExtremeMethod::dense;
  else if (method == "power_iteration")
    f.method = ExtremeMethod::power_iteration;
  else
    throw ConfigError("frame.method must be dense or power_iteration");
  f.oversample = get_double(t, w, "oversample", f.oversample);
  f.decay = get_double(t, w, "decay", f.decay);
  require(f.oversample > 0 && f.decay > 0, "frame.oversample and frame.decay must be positive");
  f.min_nodes = positive_int(get_int(t, w, "min_nodes", f.min_nodes), "frame.min_nodes");
  f.power_iterations = positive_int(get_int(t, w, "power_iterations", f.power_iterations),
                                    "frame.power_iterations");
  f.power_tolerance = get_double(t, w, "power_tolerance", f.power_tolerance);
}

void read_bargmann(const toml::table& t, RunConfig& c, Presence& pr) {
  const std::string w = "bargmann";
  check_keys(t, w, {"n", "fiber_nodes", "z_half_width", "z_nodes", "lemma_samples", "ratio_samples",
                    "kernel_points", "max_degree"});
  auto& b = c.bargmann;
  b.n = positive_int(get_int(t, w, "n", b.n), "bargmann.n", 8);
  pr.bargmann_n = t.get("n") != nullptr;
  b.fiber_nodes = positive_int(get_int(t, w, "fiber_nodes", b.fiber_nodes), "bargmann.fiber_nodes");
  b.z_half_width = get_double(t, w, "z_half_width", b.z_half_width);
  require(b.z_half_width > 0, "bargmann.z_half_width must be positive");
  b.z_nodes = positive_int(get_int(t, w, "z_nodes", b.z_nodes), "bargmann.z_nodes");
  b.lemma_samples = positive_int(get_int(t, w, "lemma_samples", b.lemma_samples), "bargmann.lemma_samples");
  b.ratio_samples = positive_int(get_int(t, w, "ratio_samples", b.ratio_samples), "bargmann.ratio_samples");
  b.kernel_points = positive_int(get_int(t, w, "kernel_points", b.kernel_points), "bargmann.kernel_points");
  const auto d = get_int(t, w, "max_degree", b.max_degree);
  require(d >= 0 && d <= 12, "bargmann.max_degree must be in [0, 12]");
  b.max_degree = static_cast<int>(d);
}

void read_arm(const toml::table& t, RunConfig& c) {
  const std::string w = "arm";
  check_keys(t, w, {"lengths", "band_width", "probe_count"});
  if (auto v = get_vec(t, w, "lengths")) c.arm.lengths = *v;
  require(c.arm.lengths.size() == 2, "arm.lengths must have two entries (planar two-link arm)");
  require((c.arm.lengths.array() > 0).all(), "arm.lengths must be positive");
  c.arm.band_width = get_double(t, w, "band_width", c.arm.band_width);
  require(c.arm.band_width > 0 && c.arm.band_width < 2 * kPi, "arm.band_width must be in (0, 2 pi)");
  const auto count = get_int(t, w, "probe_count", c.arm.probe_count);
  require(count >= 0 && count <= 100000, "arm.probe_count must be in [0, 100000]");
  c.arm.probe_count = static_cast<int>(count);
}

// Fills dimension-dependent defaults and checks shapes once every table is read.
void finalize(RunConfig& c, const Presence& pr) {
  // A full matrix fixes the dimension of whatever did not state one.
  if (c.A.size() > 0 && !pr.manifold_dim) c.manifold.dim = static_cast<int>(c.A.rows());
  if (c.A.size() > 0 && !pr.bargmann_n) c.bargmann.n = static_cast<int>(c.A.rows());
  const int n = c.dim();
  if (c.manifold.kind == "round_sphere") require(n == 2, "round_sphere is two-dimensional");
  if (c.manifold.kind == "flat_torus") {
    if (c.manifold.radii.size() == 0) c.manifold.radii = Vec::Ones(n);
    require(c.manifold.radii.size() == n, "manifold.radii length must equal manifold.dim");
    require((c.manifold.radii.array() > 0).all(), "manifold.radii must be positive");
  } else {
    require(c.manifold.radius > 0, "manifold.radius must be positive");
  }
  if (pr.window_scalar) {
    require(*pr.window_scalar > 0, "window.a must be positive");
    c.A = *pr.window_scalar * Mat::Identity(n, n);
    c.bargmann.A = *pr.window_scalar * Mat::Identity(c.bargmann.n, c.bargmann.n);
  } else if (c.A.size() > 0) {
    require(c.A.rows() == c.bargmann.n, "window.A dimension must equal bargmann.n");
    c.bargmann.A = c.A;
  }
  if (c.A.size() > 0) {
    require(c.A.rows() == n, "window.A dimension must equal the manifold dimension");
    require((c.A - c.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1 + c.A.cwiseAbs().maxCoeff()),
            "window.A must be symmetric");
  }

  auto fill = [n](Vec& v, double value) {
    if (v.size() == 0) v = Vec::Constant(n, value);
  };
  fill(c.lattice.translation_scales, 0.7);
  fill(c.lattice.modulation_scales, 0.7);
  require(c.lattice.translation_scales.size() == n && c.lattice.modulation_scales.size() == n,
          "lattice scales must have one entry per dimension");
  if (c.structure == "hypercomplex") require(n == 4, "hypercomplex structure needs a four-dimensional manifold");
  if (c.base_point.size() == 0) c.base_point = c.chart().lower;
  if (c.covector.size() == 0) c.covector = Vec::Unit(n, 0);
  require(c.base_point.size() == n && c.covector.size() == n, "lattice.base_point and covector need n entries");
  require(c.covector.norm() > 0, "lattice.covector must be non-zero");

  auto& s = c.signal;
  if (s.normal.size() == 0) s.normal = Vec::Unit(n, 0);
  if (s.center.size() == 0) s.center = Vec::Constant(n, kPi);
  require(s.normal.size() == n && s.center.size() == n, "signal.normal and signal.center need n entries");
  if (s.kind == "band") require(s.normal.norm() > 0 && s.width > 0, "band signal needs a non-zero normal and width > 0");
  if (s.kind == "ball") require(s.radius > 0, "signal.radius must be positive");
  if (s.kind == "grid") {
    require(!s.path.empty(), "grid signal needs signal.path");
    std::filesystem::path p = s.path;
    if (p.is_relative()) p = c.base_dir / p;
    require(std::filesystem::exists(p), "grid signal file not found: " + p.string());
    s.path = p.string();
  }
  for (const Vec& p : c.probes) require(p.size() == n, "every probe needs n coordinates");
  if (!c.probe_grid.empty()) require(static_cast<int>(c.probe_grid.size()) == n, "probes.grid needs n entries");
  c.detect.output.budget = c.budget;
  c.frame.node_budget = c.budget;
  c.bargmann.budget = c.budget;
  c.bargmann.seed = c.seed;
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "detect") return Command::detect;
  if (name == "frame-check") return Command::frame_check;
  if (name == "bargmann-verify") return Command::bargmann_verify;
  if (name == "arm-demo") return Command::arm_demo;
  throw ConfigError("unknown command '" + name + "'");
}

std::string command_name(Command c) {
  switch (c) {
    case Command::detect: return "detect";
    case Command::frame_check: return "frame-check";
    case Command::bargmann_verify: return "bargmann-verify";
    case Command::arm_demo: return "arm-demo";
  }
  return "";
}

int RunConfig::dim() const {
  if (manifold.kind == "round_sphere") return 2;
  return manifold.dim;
}

RiemannianChart RunConfig::chart() const {
  if (manifold.kind == "round_sphere") return RiemannianChart::round_sphere(manifold.radius);
  return RiemannianChart::flat_torus(manifold.radii.size() ? manifold.radii : Vec::Ones(dim()));
}

WindowSpec RunConfig::window() const {
  WindowSpec w = A.size() ? WindowSpec::constant(A) : WindowSpec::standard(dim());
  w.eigen_floor = eigen_floor;
  return w;
}

RunConfig parse_config(const std::string& toml_text, const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error: " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  RunConfig c;
  Presence pr;
  c.base_dir = base_dir;
  check_keys(root, "config", {"command", "threads", "seed", "manifold", "window", "lattice", "signal", "probes",
                              "budget", "detect", "frame", "bargmann", "arm"});
  if (root.get("command")) c.command = parse_command(get_string(root, "config", "command", ""));
  if (root.get("threads")) c.threads = positive_int(get_int(root, "config", "threads", 1), "threads", 1024);
  if (root.get("seed")) {
    const auto s = get_int(root, "config", "seed", 0);
    require(s >= 0, "seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  // Budget first: other tables copy it.
  if (auto* t = sub_table(root, "budget")) read_budget(*t, c);
  if (auto* t = sub_table(root, "manifold")) read_manifold(*t, c, pr);
  if (auto* t = sub_table(root, "window")) read_window(*t, c, pr);
  if (auto* t = sub_table(root, "lattice")) read_lattice(*t, c);
  if (auto* t = sub_table(root, "signal")) read_signal(*t, c);
  if (auto* t = sub_table(root, "probes")) read_probes(*t, c);
  if (auto* t = sub_table(root, "detect")) read_detect(*t, c);
  if (auto* t = sub_table(root, "frame")) read_frame(*t, c);
  if (auto* t = sub_table(root, "bargmann")) read_bargmann(*t, c, pr);
  if (auto* t = sub_table(root, "arm")) read_arm(*t, c);
  finalize(c, pr);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

int resolve_threads(std::optional<int> flag, const RunConfig& cfg) {
  if (flag) return *flag;
  if (cfg.threads) return *cfg.threads;
  if (const char* env = std::getenv("CONTACT_GABOR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 1024)
      throw ConfigError(std::string("CONTACT_GABOR_THREADS must be an integer in [1, 1024], got '") + env + "'");
    return static_cast<int>(v);
  }
  return 1;
}

}  // namespace cgabor::cli
