#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgabor/bargmann.hpp"
#include "cgabor/gabor.hpp"
#include "cgabor/robotics.hpp"

namespace cgabor::cli {

// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { detect, frame_check, bargmann_verify, arm_demo };
Command parse_command(const std::string& name);
std::string command_name(Command c);

struct ManifoldConfig {
  std::string kind = "flat_torus";  // flat_torus | round_sphere
  Vec radii;                        // flat torus; empty means ones(dim)
  int dim = 2;
  double radius = 1.0;              // round sphere
};

struct SignalConfig {
  std::string kind = "half_space";  // half_space | ball | band | constant | grid
  Vec normal;
  double offset = 0;
  Vec center;
  double radius = 1;
  double width = 0.3;
  double period = 0;
  double value = 1;
  std::string path;  // grid CSV, resolved against the config directory
};

struct ArmConfig {
  Vec lengths = Eigen::Vector2d(1, 1);
  double band_width = 0.3;
  int probe_count = 16;
};

struct RunConfig {
  std::optional<Command> command;
  ManifoldConfig manifold;
  Mat A;  // empty means pi * Id
  double eigen_floor = 1e-6;
  LatticeSpec lattice;
  std::string structure = "rotation";  // rotation | hypercomplex
  Vec base_point;                      // frame-check cosphere point; empty means chart lower corner
  Vec covector;                        // empty means e_1
  SignalConfig signal;
  std::vector<Vec> probes;
  std::vector<int> probe_grid;
  DetectionParams detect;
  FrameGridParams frame;
  BargmannSuiteParams bargmann;
  ArmConfig arm;
  double budget = kDefaultBudget;
  std::optional<int> threads;
  std::uint64_t seed = 20240601;
  std::filesystem::path base_dir = ".";

  int dim() const;
  RiemannianChart chart() const;
  WindowSpec window() const;
};

// An empty document yields the defaults. Unknown keys are rejected.
RunConfig parse_config(const std::string& toml_text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

// Threads: command-line flag, then config key, then CONTACT_GABOR_THREADS, then 1.
int resolve_threads(std::optional<int> flag, const RunConfig& cfg);

}  // namespace cgabor::cli
