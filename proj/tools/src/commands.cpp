#include "cgabor_cli/commands.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "cgabor/parallel.hpp"
#include "cgabor_cli/report.hpp"

namespace cgabor::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i).transpose()));
  return a;
}

// Non-finite doubles become strings so the JSON stays valid.
json number(double v) {
  if (std::isfinite(v)) return v;
  return fmt17(v);
}

fs::path emit(const fs::path& out, const std::string& name, const std::string& text, RunResult& r) {
  const fs::path p = out / name;
  write_text(p, text);
  r.artifacts.push_back(p);
  return p;
}

SignalOnB make_signal(const RunConfig& cfg, const RiemannianChart& chart) {
  const auto& s = cfg.signal;
  if (s.kind == "half_space") return half_space_signal(s.normal, s.offset);
  if (s.kind == "ball") return ball_signal(chart, s.center, s.radius);
  if (s.kind == "band") return band_signal(s.normal.normalized(), s.offset, s.width, s.period);
  if (s.kind == "constant") return constant_signal(s.value);
  return grid_signal(chart, load_grid_csv(s.path));
}

std::vector<std::string> vec_fields(const Vec& v) {
  std::vector<std::string> f;
  for (Eigen::Index i = 0; i < v.size(); ++i) f.push_back(fmt17(v(i)));
  return f;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> h;
  for (int i = 1; i <= n; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

void append(std::vector<std::string>& a, const std::vector<std::string>& b) { a.insert(a.end(), b.begin(), b.end()); }

json error_report(const std::string& command, const std::string& code, const std::string& message) {
  json j;
  j["command"] = command;
  j["error"] = {{"code", code}, {"message", message}};
  return j;
}

}  // namespace

std::vector<Vec> resolve_probes(const RunConfig& cfg) {
  if (!cfg.probes.empty() || cfg.probe_grid.empty()) return cfg.probes;
  const RiemannianChart chart = cfg.chart();
  const int n = chart.n;
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      const double m = cfg.probe_grid[i];
      // Closed axes use cell centres so poles and box edges are never probed.
      const double t = chart.periodic[i] ? idx[i] / m : (idx[i] + 0.5) / m;
      x(i) = chart.lower(i) + t * chart.width(i);
    }
    out.push_back(x);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == cfg.probe_grid[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

RunResult run_detect(const RunConfig& cfg, const fs::path& out) {
  RunResult r;
  const RiemannianChart chart = cfg.chart();
  const int n = chart.n;
  const WindowSpec window = cfg.window();
  const SignalOnB f = make_signal(cfg, chart);
  const std::vector<Vec> probes = resolve_probes(cfg);

  std::vector<std::string> nh{"probe_index"};
  append(nh, numbered("b", n));
  append(nh, numbered("normal", n));
  append(nh, {"angle", "value", "contrast", "magnitude_ratio", "flag"});
  CsvTable normals(nh);

  std::vector<std::string> fh{"probe_index", "direction_index"};
  if (n == 2)
    fh.push_back("angle");
  else
    append(fh, numbered("direction", n));
  append(fh, {"re", "im", "abs"});
  CsvTable field(fh);

  std::vector<std::vector<double>> magnitudes;
  for (size_t i = 0; i < probes.size(); ++i) {
    const ManifoldPoint b = reduce(chart, probes[i]);
    const DetectionResult d = detect_boundary_normal(chart, f, b, window, cfg.detect);
    std::vector<std::string> row{std::to_string(i)};
    append(row, vec_fields(b.coords));
    append(row, vec_fields(d.normal));
    append(row, {n == 2 ? fmt17(d.angle) : "", fmt17(d.value), fmt17(d.contrast), fmt17(d.magnitude_ratio),
                 d.no_boundary ? "1" : "0"});
    normals.add_row(row);

    std::vector<double> mags;
    for (size_t k = 0; k < d.field.values.size(); ++k) {
      std::vector<std::string> fr{std::to_string(i), std::to_string(k)};
      if (n == 2)
        fr.push_back(fmt17(d.field.angles[k]));
      else
        append(fr, vec_fields(d.field.directions[k]));
      const cplx v = d.field.values[k];
      append(fr, {fmt17(v.real()), fmt17(v.imag()), fmt17(std::abs(v))});
      field.add_row(fr);
      mags.push_back(std::abs(v));
    }
    magnitudes.push_back(std::move(mags));
  }

  emit(out, "normals.csv", normals.str(), r);
  emit(out, "output_field.csv", field.str(), r);
  std::string svg;
  if (magnitudes.empty() || magnitudes.front().empty()) {
    svg = render_svg_heatmap({{0.0}}, {"|O| (no probes)", "", ""}, false);
  } else {
    svg = render_svg_heatmap(magnitudes,
                             {"|O| per probe", n == 2 ? "direction angle" : "Fibonacci direction index", "probe"},
                             n == 2);
  }
  emit(out, "heatmap.svg", svg, r);
  return r;
}

RunResult run_frame_check(const RunConfig& cfg, const fs::path& out) {
  RunResult r;
  const RiemannianChart chart = cfg.chart();
  const ManifoldPoint b = reduce(chart, cfg.base_point);
  const CospherePoint m = make_cosphere_point(chart, b, cfg.covector);
  const WindowSpec window = cfg.window();
  std::unique_ptr<ContactStructure> structure;
  if (cfg.structure == "hypercomplex")
    structure = std::make_unique<HypercomplexContact>();
  else
    structure = std::make_unique<RotationStructure>();
  const ContactFrame frame = build_contact_frame(chart, m, *structure);
  const LatticeFrame lf = build_lattice_frame(frame, cfg.lattice);
  FrameGridParams params = cfg.frame;
  params.volume_element = volume_density(chart, b);
  const FrameReport rep = frame_bounds_estimate(window, lf, cfg.lattice, params);

  json j;
  j["command"] = "frame-check";
  j["lattice"] = {{"variant", std::string(variant_name(cfg.lattice.variant))},
                  {"translation_scales", to_json(cfg.lattice.translation_scales)},
                  {"modulation_scales", to_json(cfg.lattice.modulation_scales)},
                  {"K", cfg.lattice.K},
                  {"structure", cfg.structure}};
  j["cosphere_point"] = {{"b", to_json(m.b.coords)}, {"p", to_json(m.p)}};
  j["window_A"] = matrix_json(window.at(b));
  j["degenerate"] = lf.degenerate;
  j["certificate"] = std::string(certificate_name(rep.certificate));
  j["A_est"] = number(rep.A_est);
  j["B_est"] = number(rep.B_est);
  j["test_dim"] = rep.test_dim;
  j["nodes_per_axis"] = rep.nodes_per_axis;
  j["method"] = rep.method == ExtremeMethod::dense ? "dense" : "power_iteration";
  json trace = json::array();
  for (size_t i = 0; i < rep.trace_K.size(); ++i)
    trace.push_back({{"K", rep.trace_K[i]}, {"A_est", number(rep.trace_A[i])}, {"B_est", number(rep.trace_B[i])}});
  j["trace"] = trace;
  emit(out, "frame_report.json", j.dump(2) + "\n", r);
  return r;
}

RunResult run_bargmann_verify(const RunConfig& cfg, const fs::path& out) {
  RunResult r;
  const auto results = run_bargmann_suite(cfg.bargmann);
  json j;
  j["command"] = "bargmann-verify";
  const Mat A = cfg.bargmann.A.size() ? cfg.bargmann.A : kPi * Mat::Identity(cfg.bargmann.n, cfg.bargmann.n);
  j["n"] = cfg.bargmann.n;
  j["A"] = matrix_json(A);
  j["seed"] = cfg.bargmann.seed;
  bool all = true;
  json ids = json::array();
  for (const auto& res : results) {
    all = all && res.pass;
    ids.push_back({{"name", res.name},
                   {"lhs", number(res.lhs)},
                   {"rhs", number(res.rhs)},
                   {"error", number(res.error)},
                   {"tolerance", number(res.tolerance)},
                   {"pass", res.pass},
                   {"detail", res.detail}});
  }
  j["identities"] = ids;
  j["all_pass"] = all;
  emit(out, "bargmann_report.json", j.dump(2) + "\n", r);
  r.exit_code = all ? kSuccess : kNumericalFailure;
  return r;
}

RunResult run_arm_demo(const RunConfig& cfg, const fs::path& out) {
  RunResult r;
  const ArmSpec arm{cfg.arm.lengths};
  const RiemannianChart chart = arm_config_space(arm);
  const ConstraintDensity band = anti_diagonal_band(cfg.arm.band_width);
  const std::vector<Vec> probes =
      cfg.probes.empty() ? band_edge_probes(cfg.arm.band_width, cfg.arm.probe_count) : cfg.probes;
  for (const Vec& p : probes)
    if (p.size() != 2) throw ConfigError("arm-demo probes need two joint angles");
  if (cfg.A.size() && cfg.A.rows() != 2) throw ConfigError("arm-demo needs a 2 x 2 window matrix");
  const WindowSpec window = cfg.A.size() ? cfg.window() : WindowSpec::standard(2);
  const auto rows = boundary_map_pipeline(chart, band, probes, window, cfg.detect);

  CsvTable csv({"probe_theta1", "probe_theta2", "normal_theta_component1", "normal_theta_component2", "contrast",
                "flag"});
  const Vec target = Eigen::Vector2d(1, 1).normalized();
  int within = 0;
  json probes_json = json::array();
  std::vector<TorusMarker> markers;
  for (const auto& row : rows) {
    csv.add_row({fmt17(row.probe(0)), fmt17(row.probe(1)), fmt17(row.normal(0)), fmt17(row.normal(1)),
                 fmt17(row.contrast), row.no_boundary ? "1" : "0"});
    const double angle = std::acos(std::min(1.0, std::abs(row.normal.dot(target)))) * 180.0 / kPi;
    if (!row.no_boundary && angle < 5.0) ++within;
    probes_json.push_back({{"probe", to_json(row.probe)},
                           {"tip", to_json(workspace_map(arm, row.probe))},
                           {"angle_to_band_normal_deg", number(angle)},
                           {"magnitude_ratio", number(row.magnitude_ratio)},
                           {"flag", row.no_boundary}});
    markers.push_back({row.probe, row.normal, row.no_boundary});
  }
  emit(out, "arm_pipeline.csv", csv.str(), r);

  constexpr int raster = 96;
  const SignalOnB mu = constraint_to_signal(band);
  std::vector<std::vector<double>> background(raster, std::vector<double>(raster));
  for (int i = 0; i < raster; ++i)
    for (int j = 0; j < raster; ++j)
      background[i][j] = mu({Eigen::Vector2d(2 * kPi * (j + 0.5) / raster, 2 * kPi * (i + 0.5) / raster)});
  emit(out, "arm_torus.svg", render_svg_torus(markers, background, "anti-diagonal band: probes and normals"), r);

  json j;
  j["command"] = "arm-demo";
  j["lengths"] = to_json(cfg.arm.lengths);
  j["band_width"] = cfg.arm.band_width;
  j["normalization"] = band.normalization;
  j["probe_count"] = rows.size();
  j["within_5_deg"] = within;
  j["probes"] = probes_json;
  emit(out, "arm_summary.json", j.dump(2) + "\n", r);
  return r;
}

RunResult run_command(Command command, const RunConfig& cfg, const fs::path& out) {
  switch (command) {
    case Command::detect: return run_detect(cfg, out);
    case Command::frame_check: return run_frame_check(cfg, out);
    case Command::bargmann_verify: return run_bargmann_verify(cfg, out);
    case Command::arm_demo: return run_arm_demo(cfg, out);
  }
  return {};
}

int run_cli(int argc, char** argv) {
  CLI::App app{"contact-gabor: Gabor analysis on contact-element bundles"};
  std::string command_arg, config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("command", command_arg, "detect | frame-check | bargmann-verify | arm-demo (default: config key)");
  app.add_option("--config", config_path, "TOML run configuration");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  app.add_option("--seed", seed, "seed for randomized suites (overrides the config)");
  app.add_option("--threads", threads, "worker threads (overrides the config and CONTACT_GABOR_THREADS)")
      ->check(CLI::Range(1, 1024));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  std::string command_label = command_arg.empty() ? "unknown" : command_arg;
  const fs::path out = out_dir;
  auto report_error = [&](const std::string& code, const std::string& message) {
    std::cerr << "error (" << code << "): " << message << "\n";
    try {
      fs::create_directories(out);
      write_text(out / "error.json", error_report(command_label, code, message).dump(2) + "\n");
    } catch (const std::exception&) {
      // The console message above already carries the error.
    }
  };

  RunConfig cfg;
  Command command;
  try {
    cfg = config_path.empty() ? parse_config("") : load_config(config_path);
    if (!command_arg.empty())
      command = parse_command(command_arg);
    else if (cfg.command)
      command = *cfg.command;
    else
      throw ConfigError("no command given on the command line or in the config");
    command_label = command_name(command);
    if (seed) {
      cfg.seed = *seed;
      cfg.bargmann.seed = *seed;
    }
    set_thread_count(resolve_threads(threads, cfg));
    fs::create_directories(out);
  } catch (const ConfigError& e) {
    report_error("config-error", e.what());
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    report_error("config-error", e.what());
    return kConfigError;
  }

  try {
    const RunResult r = run_command(command, cfg, out);
    for (const auto& p : r.artifacts) std::cout << p.string() << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    report_error("config-error", e.what());
    return kConfigError;
  } catch (const Error& e) {
    const std::string code(error_code_name(e.code()));
    std::string message = e.what();
    if (message.rfind(code + ": ", 0) == 0) message.erase(0, code.size() + 2);
    report_error(code, message);
    return kNumericalFailure;
  } catch (const std::exception& e) {
    report_error("runtime-error", e.what());
    return kNumericalFailure;
  }
}

}  // namespace cgabor::cli
