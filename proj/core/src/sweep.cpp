#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "plateau/app.hpp"

namespace plateau {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string progress_line(int iteration, double energy, double rp, double rq) {
  std::ostringstream ss;
  ss << "iter " << iteration << " E " << fmt("%.8g", energy) << " r_p " << fmt("%.3e", rp)
     << " r_q " << fmt("%.3e", rq);
  return ss.str();
}

}  // namespace

ProgressLog::ProgressLog(std::ostream* out, const std::filesystem::path& file, int every_n)
    : out_(out), file_(file, std::ios::app), every_n_(every_n) {
  if (!file_) throw std::runtime_error("cannot open log file " + file.string());
}

ProgressLog::ProgressLog(std::ostream* out, int every_n) : out_(out), every_n_(every_n) {}

void ProgressLog::emit(const std::string& line) {
  if (out_) *out_ << line << '\n' << std::flush;
  if (file_.is_open()) file_ << line << '\n' << std::flush;
  ++lines_;
}

void ProgressLog::message(const std::string& line) { emit(line); }

void ProgressLog::operator()(const AdmmState& s) {
  if (s.energy_history.empty()) return;
  const double e = s.energy_history.back();
  if (!std::isfinite(e)) {
    divergence(s.iteration);
    return;
  }
  if (every_n_ > 0 && s.iteration % every_n_ == 0) {
    emit(progress_line(s.iteration, e, s.rp_history.back(), s.rq_history.back()));
  }
}

void ProgressLog::final(const AdmmState& s) {
  if (every_n_ <= 0) return;
  if (s.energy_history.empty()) {
    emit("final iter 0 E 0");
    return;
  }
  emit("final " +
       progress_line(s.iteration, s.energy_history.back(), s.rp_history.back(), s.rq_history.back()));
}

void ProgressLog::divergence(int iteration) {
  emit("divergence detected at iteration " + std::to_string(iteration));
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream ss;
  ss << "beta,phi,psi,energy,c_m,energy_plus_cm,iters,r_p,r_q,seconds,status\n";
  for (const auto& p : report.points) {
    ss << fmt("%.10g", p.beta) << ',' << fmt("%.10g", p.phi) << ',' << fmt("%.10g", p.psi) << ','
       << fmt("%.10g", p.energy) << ',' << fmt("%.10g", p.c_m) << ','
       << fmt("%.10g", p.energy + p.c_m) << ',' << p.iterations << ',' << fmt("%.6e", p.r_p) << ','
       << fmt("%.6e", p.r_q) << ',' << fmt("%.3f", p.seconds) << ',' << p.status << '\n';
  }
  return ss.str();
}

SweepReport run_sweep(const RunConfig& config, std::ostream* console) {
  validate(config);
  std::filesystem::create_directories(config.out_dir);
  const auto log_path = config.out_dir / "run.log";
  std::filesystem::remove(log_path);
  ProgressLog log(console, log_path, config.log_every);

  const Shape base = config.shape.build();
  TetMesh mesh;
  if (config.msh) {
    mesh = read_msh(*config.msh);
  } else {
    const double hw = config.box_halfwidth(base);
    mesh = build_box_mesh(config.mesh_subdivisions(), Vec3(hw, hw, hw));
  }
  const RegionParams region_params = config.admm.region_params();
  RegionLabels labels = classify_cells(mesh, base, region_params);
  if (config.cutout) {
    mesh = mesh.subset(cutout_cells(mesh, labels));
    labels = classify_cells(mesh, base, region_params);
  }

  SweepReport report;
  report.num_cells = mesh.num_cells();
  report.cell_size = layer_cell_size(mesh, labels);
  log.message("mesh: " + std::to_string(mesh.num_nodes()) + " nodes, " +
              std::to_string(mesh.num_edges()) + " edges, " + std::to_string(mesh.num_cells()) +
              " cells (" + std::to_string(labels.count(Region::obstacle)) + " obstacle, " +
              std::to_string(labels.count(Region::layer)) + " layer), h = " +
              fmt("%.4g", report.cell_size));

  // Region labels do not depend on H or beta, so one factorization serves all points.
  std::optional<AdmmOperators> ops;
  const auto& a = config.admm;
  int index = 0;
  for (double phi : config.phis) {
    for (double psi : config.psis) {
      const Shape shape = base.oriented(phi, psi);
      for (double beta : config.betas) {
        if (!ops) {
          ops = build_operators(mesh, a.gamma_m, a.gamma_c, a.mass, a.solver);
          ++report.factorizations;
          log.message("factorized " + std::to_string(ops->system.rows()) + " unknowns with " +
                      ops->factorization.backend_name());
        }
        AdmmParams params = a;
        params.beta = beta;
        RegionParams rp = region_params;
        rp.beta = beta;
        update_weights(labels, mesh, shape, rp);

        SweepPoint point;
        point.beta = beta;
        point.phi = phi;
        point.psi = psi;
        log.message("point " + std::to_string(index) + ": beta " + fmt("%g", beta) + " phi " +
                    fmt("%g", phi) + " psi " + fmt("%g", psi));
        const auto start = std::chrono::steady_clock::now();
        try {
          RunResult r = admm_run(mesh, labels, shape, params, &*ops,
                                 [&](const AdmmState& s) { log(s); });
          log.final(r.state);
          point.energy = r.energy;
          point.c_m = r.c_m;
          point.iterations = r.iterations;
          point.r_p = r.r_p;
          point.r_q = r.r_q;
          point.diagnostics = diagnostics(mesh, labels, shape, r.state.p, r.state.q);
          if (config.write_vtk) {
            write_vtk(config.out_dir / ("point_" + std::to_string(index) + ".vtk"), mesh,
                      labels.region, r.state.p, r.state.q);
          }
        } catch (const DivergenceError& e) {
          point.energy = std::nan("");
          point.c_m = compute_c_m(mesh, labels, shape);
          point.iterations = e.iteration();
          point.status = "diverged@" + std::to_string(e.iteration());
          log.message(e.what());
        }
        point.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.points.push_back(point);
        ++index;
      }
    }
  }

  std::ofstream csv(config.out_dir / "results.csv");
  if (!csv) throw std::runtime_error("cannot write results.csv in " + config.out_dir.string());
  csv << sweep_csv(report);
  return report;
}

}  // namespace plateau
