#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lamharm::cli {

/// Exit-code contract shared by every command.
enum ExitCode : int {
  kOk = 0,
  kThreshold = 1,
  kConfig = 2,
  kSingular = 3,
  kDivergence = 4,
};

struct SolveOptions {
  std::string config;
  std::string grid = "20x64";
  std::string out = "field.csv";
};

struct CheckOptions {
  std::string config;
  double h = 1e-3;
  int laplacian_samples = 64;
  int angular_samples = 0;
  double condition_threshold = 1e-8;
  double laplacian_threshold = 1e-4;
  std::optional<std::string> out;
};

struct RobinOptions {
  std::string H = "2,1;1,2";
  std::string modes = "0-10";
  double tol = 1e-10;
  double threshold = 1e-8;
  std::string out = "robin.csv";
};

struct ReflectionOptions {
  std::string K = "2";
  double r = 0.5;
  int band = 8;
  double tol = 1e-12;
  std::string grid = "10x32";
  std::string out = "reflection.csv";
};

struct AxisOptions {
  std::string config;
  std::string function = "gaussian";
  double sigma = 0.5;
  double shift = 0.0;
  double half_width = 8.0;
  int samples = 801;
  std::string normalization = "spectral";
  double threshold = 1e-2;
  std::string out = "axis.csv";
};

struct KernelOptions {
  std::string config;
  int layer = 1;
  std::string source = "boundary";
  double r = 0.5;
  int band = 200;
  int samples = 181;
  std::string convention = "standard";
  std::string out = "kernel.csv";
};

/// `argv` is the full argument list (without the program name) recorded in
/// the run manifest.
int cmd_solve(const SolveOptions& o, const std::vector<std::string>& argv);
int cmd_check(const CheckOptions& o, const std::vector<std::string>& argv);
int cmd_demo_robin(const RobinOptions& o, const std::vector<std::string>& argv);
int cmd_demo_reflection(const ReflectionOptions& o, const std::vector<std::string>& argv);
int cmd_axis_roundtrip(const AxisOptions& o, const std::vector<std::string>& argv);
int cmd_kernel(const KernelOptions& o, const std::vector<std::string>& argv);

/// "RxA": R radii and A angles.
std::pair<int, int> parse_grid(const std::string& spec);
/// Rows separated by ';', entries by ','.
std::vector<std::vector<double>> parse_matrix(const std::string& spec);
/// Comma-separated integers or ranges "a-b".
std::vector<int> parse_modes(const std::string& spec);

}  // namespace lamharm::cli
