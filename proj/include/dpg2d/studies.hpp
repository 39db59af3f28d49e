#ifndef DPG2D_STUDIES_HPP
#define DPG2D_STUDIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "dpg2d/adapt.hpp"
#include "dpg2d/interp_norm.hpp"
#include "dpg2d/planewave.hpp"

namespace dpg2d {

// Plane-wave study configuration shared by the drivers. The reference tables
// were produced with trial orders (p, p, p-1), test enrichment delta_p = 1 and
// the absolute l2 stopping criterion |r| < 1e-6.
struct StudyConfig {
  int p = 2;
  int delta_p = 1;
  int uhat_order = -1;          // -1: p-1
  std::vector<int> h_denoms = {2, 4, 8, 16, 32};
  std::vector<Real> omegas = {kPi, 2 * kPi, 4 * kPi, 8 * kPi, 16 * kPi};
  Real H = 0.5;                 // patch-defining mesh size
  Real theta = 1.0;             // one-level smoother relaxation (CG-invariant)
  int nu = 10;                  // multigrid smoothing steps
  Real mg_theta = 0.25;
  Real tol = 1e-6;
  bool tol_absolute = true;
  int max_iter = 500;
  Real dx = 1.0, dy = 0.0;      // plane-wave direction
  Real theta_mark = 0.5;
  int max_generations = 10;
  std::string output_dir = ".";
};

struct OneLevelCell {
  Real h = 0.0, omega = 0.0;
  int iterations = 0;
  bool converged = false;
  Real rel_error = 1.0;
  bool resolved = false;  // rel_error <= 0.9
  int n_dofs = 0;
  std::string error;  // nonempty when the cell failed
};

// Single (h, omega) cell of the one-level study; exposed for tests and the
// python module.
OneLevelCell one_level_cell(const StudyConfig& cfg, Real h, Real omega,
                            std::vector<Real>* residual_history = nullptr);

std::vector<OneLevelCell> one_level_study(const StudyConfig& cfg);

struct MgCell {
  Real h = 0.0, H = 0.0;
  int iterations = 0;
  bool converged = false;
  int n_levels = 0;
  int n_dofs = 0;
  std::string error;
};

// V-cycle preconditioned CG iterations over the (fine h) x (coarse H) grid,
// hierarchies built by successive halving.
std::vector<MgCell> mg_study(const StudyConfig& cfg, Real omega,
                             const std::vector<int>& H_denoms);
MgCell mg_cell(const StudyConfig& cfg, Real omega, int h_denom, int H_denom);

struct InterpCell {
  Real h = 0.0, omega = 0.0;
  Real value = 0.0;
};
std::vector<InterpCell> interp_norm_table(const StudyConfig& cfg, int r_ext = -1);

// Full adaptive driver on a uniform starting mesh of size 1/n0.
AdaptiveResult adaptive_study(const StudyConfig& cfg, Real omega, int n0);

// CSV renderers in the tables' orientation (rows = h, columns = omega or H).
std::string one_level_csv(const StudyConfig& cfg, const std::vector<OneLevelCell>& cells);
std::string mg_csv(const std::vector<MgCell>& cells);
std::string interp_csv(const StudyConfig& cfg, const std::vector<InterpCell>& cells);
std::string adaptive_csv(const AdaptiveResult& result);
std::string residual_history_csv(const PcgReport& rep);

}  // namespace dpg2d

#endif
