#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sketchpress {

using Index = Eigen::Index;

/// Column-major dense matrix used for factors and accumulators.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A contiguous run of snapshot rows, stored row-major as on disk.
using RowBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Zero-based index list (rows or columns).
using IndexList = std::vector<Index>;

}  // namespace sketchpress
