#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "plateau/app.hpp"

namespace plateau {

Shape ShapeSpec::build() const {
  switch (kind) {
    case ShapeKind::sphere: return Shape::sphere(radius);
    case ShapeKind::peanut: return Shape::peanut(peanut);
    case ShapeKind::donut: return Shape::donut(donut.major_radius, donut.minor_radius);
    case ShapeKind::croissant:
      return Shape::croissant(croissant.major_radius, croissant.minor_radius, croissant.arm_length);
    case ShapeKind::custom:
      if (file.empty()) throw ConfigError("shape-file", "required for a custom shape");
      return Shape::from_file(file);
  }
  throw ConfigError("shape", "unknown kind");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + t + "'");
  }
}

int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    long v = std::stol(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw std::out_of_range("int");
    }
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  }
}

bool to_bool(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t.empty() || t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']') return {t};
    t = t.substr(1, t.size() - 2);
  }
  std::vector<std::string> items;
  if (trim(t).empty()) return items;
  std::stringstream ss(t);
  for (std::string item; std::getline(ss, item, ',');) items.push_back(trim(item));
  return items;
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
  return out;
}

double positive(const std::string& key, double v) {
  if (!(v > 0)) throw ConfigError(key, "must be positive");
  return v;
}

double nonnegative(const std::string& key, double v) {
  if (!(v >= 0)) throw ConfigError(key, "must be nonnegative");
  return v;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"shape",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         try {
           c.shape.kind = shape_kind_from_string(trim(v));
         } catch (const std::exception&) {
           throw ConfigError(k, "unknown shape '" + trim(v) + "'");
         }
       }},
      {"radius",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.radius = positive(k, to_double(k, v));
       }},
      {"major-radius",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.donut.major_radius = c.shape.croissant.major_radius = positive(k, to_double(k, v));
       }},
      {"minor-radius",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.donut.minor_radius = c.shape.croissant.minor_radius = positive(k, to_double(k, v));
       }},
      {"length",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.croissant.arm_length = nonnegative(k, to_double(k, v));
       }},
      {"lobe-radius",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.peanut.lobe_radius = positive(k, to_double(k, v));
       }},
      {"lobe-offset",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.peanut.lobe_offset = nonnegative(k, to_double(k, v));
       }},
      {"blend",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.shape.peanut.blend = positive(k, to_double(k, v));
       }},
      {"shape-file",
       [](RunConfig& c, const std::string&, const std::string& v) { c.shape.file = trim(v); }},
      {"beta",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.betas = to_doubles(k, v);
         for (double b : c.betas) nonnegative(k, b);
       }},
      {"phi",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.phis = to_doubles(k, v);
         if (c.phis.empty()) throw ConfigError(k, "needs at least one angle");
       }},
      {"psi",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.psis = to_doubles(k, v);
         if (c.psis.empty()) throw ConfigError(k, "needs at least one angle");
       }},
      {"iters",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         int n = to_int(k, v);
         if (n < 0) throw ConfigError(k, "must be nonnegative");
         c.admm.iterations = n;
       }},
      {"gamma-m",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.gamma_m = positive(k, to_double(k, v));
       }},
      {"gamma-c",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.gamma_c = positive(k, to_double(k, v));
       }},
      {"alpha",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         double a = to_double(k, v);
         if (!(a >= 1 && a < 2)) throw ConfigError(k, "must lie in [1, 2)");
         c.admm.alpha = a;
       }},
      {"w-e",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.obstacle_weight = nonnegative(k, to_double(k, v));
       }},
      {"eps",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.density_floor = nonnegative(k, to_double(k, v));
       }},
      {"d-gamma",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.shift = to_double(k, v);
       }},
      {"tol",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.admm.tolerance = nonnegative(k, to_double(k, v));
       }},
      {"mass",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "full") {
           c.admm.mass = MassKind::full;
         } else if (t == "centroid") {
           c.admm.mass = MassKind::centroid;
         } else {
           throw ConfigError(k, "expected 'full' or 'centroid'");
         }
       }},
      {"solver",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const std::string t = trim(v);
         if (t == "cholesky") {
           c.admm.solver = SolverKind::cholesky;
         } else if (t == "cg") {
           c.admm.solver = SolverKind::conjugate_gradient;
         } else {
           throw ConfigError(k, "expected 'cholesky' or 'cg'");
         }
       }},
      {"subdiv",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         auto items = split_list(v);
         if (items.size() == 1) items.assign(3, items[0]);
         if (items.size() != 3) throw ConfigError(k, "expected NX,NY,NZ");
         std::array<int, 3> n{};
         for (int i = 0; i < 3; ++i) {
           n[i] = to_int(k, items[i]);
           if (n[i] < 1) throw ConfigError(k, "subdivisions must be at least 1");
         }
         c.subdivisions = n;
       }},
      {"box",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.box = positive(k, to_double(k, v));
       }},
      {"msh", [](RunConfig& c, const std::string&, const std::string& v) { c.msh = trim(v); }},
      {"cutout",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.cutout = to_bool(k, v); }},
      {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }},
      {"log-every",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         int n = to_int(k, v);
         if (n < 0) throw ConfigError(k, "must be nonnegative");
         c.log_every = n;
       }},
      {"no-vtk",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.write_vtk = !to_bool(k, v);
       }},
  };
  return table;
}

}  // namespace

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = setters();
  auto it = table.find(trim(key));
  if (it == table.end()) throw ConfigError(trim(key), "unknown key");
  it->second(config, it->first, value);
}

namespace {

void apply_text(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected key=value on line " + std::to_string(line_no));
    }
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  apply_text(base, text);
  validate(base);
  return base;
}

RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base) {
  return parse_config_text(read_text(path), std::move(base));
}

void validate(const RunConfig& config) {
  if (config.msh && config.subdivisions) {
    throw ConfigError("msh", "exactly one mesh source (msh or subdiv) may be given");
  }
  if (config.msh && config.box) {
    throw ConfigError("box", "box applies to the internal mesh only; exactly one mesh source");
  }
  for (double b : config.betas) {
    if (!(b >= 0) || !std::isfinite(b)) throw ConfigError("beta", "values must be nonnegative");
  }
  if (config.shape.kind == ShapeKind::custom && config.shape.file.empty()) {
    throw ConfigError("shape-file", "required for a custom shape");
  }
  try {
    config.admm.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(':');
    throw ConfigError(what.substr(0, colon), what.substr(colon + 2));
  }
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
  CLI::App app{"Line-and-surface energy minimization around a particle by ADMM"};
  std::optional<std::string> config_path;
  // Each flag maps to the config key of the same name.
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"shape", "Particle shape: sphere, peanut, donut, croissant or custom"},
      {"beta", "Comma-separated line-energy weights"},
      {"phi", "Rotation angle(s) about x1 in radians"},
      {"psi", "Rotation angle(s) about x2 in radians"},
      {"iters", "ADMM iterations per sweep point"},
      {"gamma-m", "Step size of the identity constraint"},
      {"gamma-c", "Step size of the curl constraint"},
      {"alpha", "Over-relaxation factor in [1, 2)"},
      {"subdiv", "Internal mesh subdivisions NX,NY,NZ"},
      {"box", "Half-width of the internal mesh box"},
      {"msh", "Gmsh ASCII mesh to use instead of the internal box"},
      {"out", "Output directory"},
      {"log-every", "Progress line every N iterations (0 disables)"},
  };
  std::map<std::string, std::string> values;
  app.add_option("--config", config_path, "key=value file; flags override it");
  for (const auto& [name, help] : flags) app.add_option("--" + name, values[name], help);
  bool no_vtk = false;
  app.add_flag("--no-vtk", no_vtk, "Skip VTK output");
  std::vector<std::string> extra;
  app.add_option("--set", extra, "Additional KEY=VALUE settings (repeatable)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("command line", e.what());
  }

  RunConfig config;
  if (config_path) apply_text(config, read_text(*config_path));
  for (const auto& [name, help] : flags) {
    if (app.count("--" + name)) apply_setting(config, name, values[name]);
  }
  if (no_vtk) config.write_vtk = false;
  for (const auto& kv : extra) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, "--set expects KEY=VALUE");
    apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate(config);
  return config;
}

}  // namespace plateau
