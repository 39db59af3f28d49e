#ifndef DPG2D_TYPES_HPP
#define DPG2D_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>

namespace dpg2d {

using Real = double;
using Cplx = std::complex<double>;

using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<Cplx>;
using Triplet = Eigen::Triplet<Cplx>;

constexpr Real kPi = 3.14159265358979323846;

}  // namespace dpg2d

#endif
