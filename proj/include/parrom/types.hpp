#ifndef PARROM_TYPES_HPP
#define PARROM_TYPES_HPP

#include <complex>

#include <Eigen/Core>

namespace parrom {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// A point in the parameter domain.
using Point = Eigen::VectorXd;

}  // namespace parrom

#endif  // PARROM_TYPES_HPP
