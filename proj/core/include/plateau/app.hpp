#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plateau/admm.hpp"
#include "plateau/mesh.hpp"
#include "plateau/regions.hpp"
#include "plateau/shape.hpp"

namespace plateau {

/// Invalid or inconsistent run configuration. The message starts with the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::sphere;
  double radius = 1.0;
  DonutGeometry donut;
  CroissantGeometry croissant;
  PeanutGeometry peanut;
  std::filesystem::path file;  // custom shapes

  Shape build() const;
};

struct RunConfig {
  ShapeSpec shape;
  std::vector<double> betas;
  std::vector<double> phis{0.0};
  std::vector<double> psis{0.0};
  AdmmParams admm;
  /// Internal mesh; used unless msh is set. Default 32 per axis.
  std::optional<std::array<int, 3>> subdivisions;
  /// Box half-width; default 2 x the shape's circumscribed radius.
  std::optional<double> box;
  std::optional<std::filesystem::path> msh;
  bool cutout = false;
  std::filesystem::path out_dir = "plateau_out";
  bool write_vtk = true;
  int log_every = 100;

  std::array<int, 3> mesh_subdivisions() const { return subdivisions.value_or(std::array{32, 32, 32}); }
  double box_halfwidth(const Shape& s) const { return box.value_or(2.0 * s.circumradius()); }
};

/// Applies one key=value setting. Keys match the long command-line flags
/// without dashes (beta, phi, psi, iters, gamma-m, gamma-c, alpha, subdiv,
/// box, msh, out, log-every, no-vtk) plus shape and solver parameters:
/// shape, radius, major-radius, minor-radius, length, lobe-radius,
/// lobe-offset, blend, shape-file, w-e, eps, d-gamma, tol, mass, solver,
/// cutout. Lists are comma separated, optionally in brackets.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Parses a flat key=value file; '#' starts a comment.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Command-line parsing. --config is read first and flags override it.
/// Returns nullopt after printing help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

/// Checks cross-field invariants (exactly one mesh source, ranges).
void validate(const RunConfig& config);

/// Emits "iter E r_p r_q" lines every n iterations to a stream and a log file.
class ProgressLog {
 public:
  /// every_n = 0 disables the periodic lines.
  ProgressLog(std::ostream* out, const std::filesystem::path& file, int every_n);
  explicit ProgressLog(std::ostream* out = nullptr, int every_n = 0);

  void operator()(const AdmmState& state);
  void message(const std::string& line);
  void final(const AdmmState& state);
  void divergence(int iteration);
  int lines_written() const { return lines_; }

 private:
  void emit(const std::string& line);

  std::ostream* out_;
  std::ofstream file_;
  int every_n_;
  int lines_ = 0;
};

struct SweepPoint {
  double beta = 0.0, phi = 0.0, psi = 0.0;
  double energy = 0.0;
  double c_m = 0.0;
  int iterations = 0;
  double r_p = 0.0, r_q = 0.0;
  double seconds = 0.0;
  Diagnostics diagnostics;
  std::string status = "ok";  // "diverged@<iteration>" on failure
};

struct SweepReport {
  std::vector<SweepPoint> points;
  int factorizations = 0;
  std::size_t num_cells = 0;
  double cell_size = 0.0;
};

/// Runs every (phi, psi, beta) point on one mesh and one factorization.
/// Writes results.csv, run.log and (optionally) one VTK file per point into
/// config.out_dir. Divergent points are recorded and the sweep continues.
SweepReport run_sweep(const RunConfig& config, std::ostream* console = nullptr);

/// CSV text of a report, header first.
std::string sweep_csv(const SweepReport& report);

/// Legacy ASCII VTK 3.0 unstructured grid with per-cell p_mag, q_mag,
/// region, p and q. An empty `region` writes zeros. Throws std::runtime_error
/// if the file cannot be written.
void write_vtk(const std::filesystem::path& path, const TetMesh& mesh,
               const std::vector<Region>& region, const Eigen::VectorXd& p,
               const Eigen::VectorXd& q);

}  // namespace plateau
