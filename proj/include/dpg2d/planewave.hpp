#ifndef DPG2D_PLANEWAVE_HPP
#define DPG2D_PLANEWAVE_HPP

#include <cmath>

#include "dpg2d/element.hpp"
#include "dpg2d/system.hpp"

namespace dpg2d {

// Exact plane wave p = exp(-i omega d.x), u = d p with |d| = 1, so that
// i w p + div u = 0 and i w u + grad p = 0. Impedance data g = p - u.n.
struct PlaneWave {
  Real omega;
  Real dx = 1.0, dy = 0.0;

  Cplx pressure(Real x, Real y) const {
    return std::exp(Cplx(0.0, -omega * (dx * x + dy * y)));
  }
  std::array<Cplx, 3> field(Real x, Real y) const {
    const Cplx p = pressure(x, y);
    return {p, dx * p, dy * p};
  }
  BoundaryData impedance_data() const {
    return [*this](Real x, Real y, Real nx, Real ny) {
      return pressure(x, y) * (1.0 - (dx * nx + dy * ny));
    };
  }
  ExactField exact() const {
    return [*this](Real x, Real y) { return field(x, y); };
  }
};

}  // namespace dpg2d

#endif
