#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dpg2d/config.hpp"
#include "dpg2d/studies.hpp"
#include "dpg2d/system.hpp"

namespace fs = std::filesystem;
using namespace dpg2d;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  out << text;
  std::cout << "wrote " << path.string() << "\n";
}

struct CommonOpts {
  std::string config_path;
  int p = -1;
  int delta_p = -1;
  std::string omega;
  std::string h_list;
  std::string output_dir;
  Real tol = -1;
  int max_iter = -1;

  StudyConfig resolve() const {
    Config cfg;
    if (!config_path.empty()) cfg = Config::from_file(config_path);
    if (p > 0) cfg.set("p", std::to_string(p));
    if (delta_p > 0) cfg.set("delta_p", std::to_string(delta_p));
    if (!omega.empty()) cfg.set("omega", omega);
    if (!h_list.empty()) cfg.set("h_list", h_list);
    if (!output_dir.empty()) cfg.set("output_dir", output_dir);
    if (tol > 0) cfg.set("tol", std::to_string(tol));
    if (max_iter > 0) cfg.set("max_iter", std::to_string(max_iter));
    return cfg.study();
  }
};

void add_common(CLI::App* app, CommonOpts& o) {
  app->add_option("-c,--config", o.config_path, "key=value config file");
  app->add_option("-p", o.p, "trial order");
  app->add_option("--delta-p", o.delta_p, "test enrichment");
  app->add_option("--omega", o.omega, "frequency (accepts e.g. 2pi)");
  app->add_option("--h-list", o.h_list, "mesh sizes, e.g. 1/2,1/4");
  app->add_option("-o,--output-dir", o.output_dir, "output directory");
  app->add_option("--tol", o.tol, "solver tolerance");
  app->add_option("--max-iter", o.max_iter, "solver iteration cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D ultraweak DPG acoustics solver"};
  app.require_subcommand(1);

  CommonOpts o1, o2, o3, o4, o5;
  auto* c1 = app.add_subcommand("one-level-study",
                                "Schwarz-preconditioned CG sweep over (h, omega)");
  add_common(c1, o1);
  auto* c2 = app.add_subcommand("mg-study", "V-cycle preconditioned CG over (h, H)");
  add_common(c2, o2);
  std::string H_list = "1/2,1/4,1/8,1/16";
  c2->add_option("--H-list", H_list, "coarse mesh sizes");
  auto* c3 = app.add_subcommand("adaptive", "residual-driven adaptive refinement run");
  add_common(c3, o3);
  int n0 = 4;
  c3->add_option("--n0", n0, "initial uniform mesh cells per side");
  auto* c4 = app.add_subcommand("interp-norm", "trace interpolation norm table");
  add_common(c4, o4);
  int r_ext = -1;
  c4->add_option("--r-ext", r_ext, "extension order (default min(p+6,9))");
  auto* c5 = app.add_subcommand("dump-system", "write the condensed system in coordinate format");
  add_common(c5, o5);
  std::string h_one = "1/4";
  c5->add_option("--h", h_one, "mesh size");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c1->parsed()) {
      StudyConfig cfg = o1.resolve();
      auto cells = one_level_study(cfg);
      write_file(fs::path(cfg.output_dir) / ("one_level_p" + std::to_string(cfg.p) + ".csv"),
                 one_level_csv(cfg, cells));
      int failures = 0;
      for (const auto& c : cells)
        if (!c.error.empty()) {
          std::cerr << "cell h=" << c.h << " omega=" << c.omega << " failed: " << c.error << "\n";
          ++failures;
        }
      return failures == 0 ? 0 : 1;
    }
    if (c2->parsed()) {
      StudyConfig cfg = o2.resolve();
      Config hl;
      hl.set("h_list", H_list);
      auto Hd = hl.get_denoms("h_list", {2, 4, 8, 16});
      const Real omega = cfg.omegas.size() == 1 ? cfg.omegas[0] : 2 * kPi;
      auto cells = mg_study(cfg, omega, Hd);
      write_file(fs::path(cfg.output_dir) / ("mg_p" + std::to_string(cfg.p) + ".csv"),
                 mg_csv(cells));
      int failures = 0;
      for (const auto& c : cells)
        if (!c.error.empty()) ++failures;
      return failures == 0 ? 0 : 1;
    }
    if (c3->parsed()) {
      StudyConfig cfg = o3.resolve();
      const Real omega = cfg.omegas.size() == 1 ? cfg.omegas[0] : 4 * kPi;
      AdaptiveResult res = adaptive_study(cfg, omega, n0);
      write_file(fs::path(cfg.output_dir) / "adaptive.csv", adaptive_csv(res));
      for (size_t i = 0; i < res.mesh_svgs.size(); ++i)
        write_file(fs::path(cfg.output_dir) / ("mesh_gen" + std::to_string(i) + ".svg"),
                   res.mesh_svgs[i]);
      return 0;
    }
    if (c4->parsed()) {
      StudyConfig cfg = o4.resolve();
      auto cells = interp_norm_table(cfg, r_ext);
      write_file(fs::path(cfg.output_dir) / ("interp_norm_p" + std::to_string(cfg.p) + ".csv"),
                 interp_csv(cfg, cells));
      return 0;
    }
    if (c5->parsed()) {
      StudyConfig cfg = o5.resolve();
      Config hl;
      hl.set("h_list", h_one);
      const int hd = hl.get_denoms("h_list", {4})[0];
      const Real omega = cfg.omegas.size() == 1 ? cfg.omegas[0] : 2 * kPi;
      AdaptiveMesh mesh = AdaptiveMesh::uniform(hd);
      PlaneWave wave{omega, cfg.dx, cfg.dy};
      ElementConfig ec;
      ec.p = cfg.p;
      ec.delta_p = cfg.delta_p;
      ec.uhat_order = cfg.uhat_order;
      ec.omega = omega;
      ElementCache cache(ec);
      TraceDofMap dm(mesh, mesh.active_cells(), cfg.p, ec.flux_order());
      GlobalSystem gs = assemble_global(mesh, dm, cache, wave.impedance_data());
      write_file(fs::path(cfg.output_dir) / "system.txt", dump_system(gs));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
