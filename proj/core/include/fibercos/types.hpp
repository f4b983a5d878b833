#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace fibercos {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Sorted, duplicate-free list of fiber indices.
using FiberIndexSet = std::vector<std::size_t>;

}  // namespace fibercos
