#include "dpg2d/studies.hpp"

#include <cmath>
#include <sstream>

#include "dpg2d/system.hpp"

namespace dpg2d {

namespace {

ElementConfig element_config(const StudyConfig& cfg, Real omega) {
  ElementConfig ec;
  ec.p = cfg.p;
  ec.delta_p = cfg.delta_p;
  ec.uhat_order = cfg.uhat_order;
  ec.omega = omega;
  return ec;
}

// uniform mesh of size 1/n built by refinement from the patch-defining mesh,
// so the H-level is a recorded snapshot
AdaptiveMesh mesh_with_history(int n0, int n) {
  AdaptiveMesh mesh = AdaptiveMesh::uniform(n0);
  int cur = n0;
  while (cur < n) {
    mesh.refine(mesh.active_cells());
    cur *= 2;
  }
  return mesh;
}

PcgOptions pcg_options(const StudyConfig& cfg) {
  PcgOptions opt;
  if (cfg.tol_absolute) {
    opt.tol_rel = 0.0;
    opt.tol_abs = cfg.tol;
  } else {
    opt.tol_rel = cfg.tol;
    opt.tol_abs = 0.0;
  }
  opt.max_iter = cfg.max_iter;
  return opt;
}

}  // namespace

OneLevelCell one_level_cell(const StudyConfig& cfg, Real h, Real omega,
                            std::vector<Real>* residual_history) {
  OneLevelCell cell;
  cell.h = h;
  cell.omega = omega;
  const int n = static_cast<int>(std::lround(1.0 / h));
  const int n0 = static_cast<int>(std::lround(1.0 / cfg.H));
  AdaptiveMesh mesh = mesh_with_history(std::min(n0, n), n);
  PlaneWave wave{omega, cfg.dx, cfg.dy};
  ElementCache cache(element_config(cfg, omega));
  TraceDofMap dm(mesh, mesh.active_cells(), cfg.p, cache.config().flux_order());
  cell.n_dofs = dm.n_dofs();
  GlobalSystem gs = assemble_global(mesh, dm, cache, wave.impedance_data());
  auto patches = mesh.build_patches(0);
  SchwarzSmoother smoother(gs.S, patches, dm.dofs(), mesh.vertices(), cfg.theta, 1);
  PcgReport rep;
  Vec x = pcg([&](const Vec& v) { return Vec(gs.S * v); },
              [&](const Vec& r) { return smoother.apply(r); }, gs.rhs, Vec(), pcg_options(cfg),
              &rep);
  cell.iterations = rep.iterations;
  cell.converged = rep.converged;
  auto fields = recover_all_fields(mesh, dm, cache, gs, x);
  cell.rel_error = field_l2_error(mesh, dm, cache, fields, wave.exact());
  cell.resolved = cell.rel_error <= 0.9;
  if (residual_history) *residual_history = rep.residuals;
  return cell;
}

std::vector<OneLevelCell> one_level_study(const StudyConfig& cfg) {
  std::vector<OneLevelCell> out;
  for (int hd : cfg.h_denoms)
    for (Real w : cfg.omegas) {
      try {
        out.push_back(one_level_cell(cfg, 1.0 / hd, w));
      } catch (const std::exception& e) {
        OneLevelCell bad;
        bad.h = 1.0 / hd;
        bad.omega = w;
        bad.error = e.what();
        out.push_back(bad);
      }
    }
  return out;
}

MgCell mg_cell(const StudyConfig& cfg, Real omega, int h_denom, int H_denom) {
  MgCell cell;
  cell.h = 1.0 / h_denom;
  cell.H = 1.0 / H_denom;
  AdaptiveMesh mesh = mesh_with_history(H_denom, h_denom);
  PlaneWave wave{omega, cfg.dx, cfg.dy};
  ElementCache cache(element_config(cfg, omega));
  std::vector<int> levels;
  for (int s = 0; s < mesh.n_snapshots(); ++s) levels.push_back(s);
  MgOptions mg;
  mg.theta = cfg.mg_theta;
  mg.nu = cfg.nu;
  GridHierarchy hier(mesh, levels, cache, wave.impedance_data(), mg);
  cell.n_levels = hier.n_levels();
  const GlobalSystem& gs = hier.system(hier.n_levels() - 1);
  cell.n_dofs = hier.dofmap(hier.n_levels() - 1).n_dofs();
  PcgReport rep;
  pcg([&](const Vec& v) { return Vec(gs.S * v); }, [&](const Vec& r) { return hier.vcycle(r); },
      gs.rhs, Vec(), pcg_options(cfg), &rep);
  cell.iterations = rep.iterations;
  cell.converged = rep.converged;
  return cell;
}

std::vector<MgCell> mg_study(const StudyConfig& cfg, Real omega, const std::vector<int>& H_denoms) {
  std::vector<MgCell> out;
  for (int hd : cfg.h_denoms)
    for (int Hd : H_denoms) {
      if (Hd > hd) continue;
      try {
        out.push_back(mg_cell(cfg, omega, hd, Hd));
      } catch (const std::exception& e) {
        MgCell bad;
        bad.h = 1.0 / hd;
        bad.H = 1.0 / Hd;
        bad.error = e.what();
        out.push_back(bad);
      }
    }
  return out;
}

std::vector<InterpCell> interp_norm_table(const StudyConfig& cfg, int r_ext) {
  std::vector<InterpCell> out;
  for (int hd : cfg.h_denoms)
    for (Real w : cfg.omegas)
      out.push_back({1.0 / hd, w, interp_norm(cfg.p, 1.0 / hd, w, r_ext)});
  return out;
}

AdaptiveResult adaptive_study(const StudyConfig& cfg, Real omega, int n0) {
  AdaptiveMesh mesh = AdaptiveMesh::uniform(n0);
  PlaneWave wave{omega, cfg.dx, cfg.dy};
  ElementCache cache(element_config(cfg, omega));
  AdaptiveOptions opt;
  opt.theta_mark = cfg.theta_mark;
  opt.max_generations = cfg.max_generations;
  opt.tol_rel = cfg.tol;
  opt.max_iter = cfg.max_iter;
  opt.mg.theta = cfg.mg_theta;
  opt.mg.nu = cfg.nu;
  return adaptive_solve(mesh, cache, wave.impedance_data(), opt);
}

namespace {
std::string omega_label(Real w) {
  std::ostringstream os;
  const Real m = w / kPi;
  if (std::abs(m - std::lround(m)) < 1e-12)
    os << std::lround(m) << "pi";
  else
    os << w;
  return os.str();
}
}  // namespace

std::string one_level_csv(const StudyConfig& cfg, const std::vector<OneLevelCell>& cells) {
  std::ostringstream os;
  os << "h";
  for (Real w : cfg.omegas) os << ",iters_w=" << omega_label(w) << ",relerr_w=" << omega_label(w);
  os << "\n";
  size_t k = 0;
  for (int hd : cfg.h_denoms) {
    os << "1/" << hd;
    for (size_t j = 0; j < cfg.omegas.size(); ++j, ++k) {
      const auto& c = cells[k];
      if (!c.error.empty())
        os << ",FAILED,";
      else
        os << "," << c.iterations << "," << c.rel_error;
    }
    os << "\n";
  }
  return os.str();
}

std::string mg_csv(const std::vector<MgCell>& cells) {
  std::ostringstream os;
  os << "h\\H";
  std::vector<Real> Hs;
  std::vector<Real> hs;
  for (const auto& c : cells) {
    if (std::find(Hs.begin(), Hs.end(), c.H) == Hs.end()) Hs.push_back(c.H);
    if (std::find(hs.begin(), hs.end(), c.h) == hs.end()) hs.push_back(c.h);
  }
  for (Real H : Hs) os << ",1/" << std::lround(1.0 / H);
  os << "\n";
  for (Real h : hs) {
    os << "1/" << std::lround(1.0 / h);
    for (Real H : Hs) {
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const MgCell& c) { return c.h == h && c.H == H; });
      if (it == cells.end())
        os << ",";
      else if (!it->error.empty())
        os << ",FAILED";
      else
        os << "," << it->iterations;
    }
    os << "\n";
  }
  return os.str();
}

std::string interp_csv(const StudyConfig& cfg, const std::vector<InterpCell>& cells) {
  std::ostringstream os;
  os << "h";
  for (Real w : cfg.omegas) os << ",w=" << omega_label(w);
  os << "\n";
  os.precision(4);
  os << std::fixed;
  size_t k = 0;
  for (int hd : cfg.h_denoms) {
    os << "1/" << hd;
    for (size_t j = 0; j < cfg.omegas.size(); ++j, ++k) os << "," << cells[k].value;
    os << "\n";
  }
  return os.str();
}

std::string adaptive_csv(const AdaptiveResult& result) {
  std::ostringstream os;
  os << "generation,n_dofs,n_cells,eta,pcg_iterations,n_levels\n";
  for (const auto& g : result.generations)
    os << g.generation << "," << g.n_dofs << "," << g.n_cells << "," << g.eta << ","
       << g.iterations << "," << g.n_levels << "\n";
  return os.str();
}

std::string residual_history_csv(const PcgReport& rep) {
  std::ostringstream os;
  os << "iteration,residual,rel_residual\n";
  for (size_t i = 0; i < rep.residuals.size(); ++i)
    os << i + 1 << "," << rep.residuals[i] << "," << rep.residuals[i] / rep.rhs_norm << "\n";
  return os.str();
}

}  // namespace dpg2d
