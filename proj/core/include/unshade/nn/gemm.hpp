#pragma once

#include <Eigen/Core>

namespace unshade::nn {

// All tensors are row-major contiguous; these aliases give Eigen views onto
// raw buffers for the conv/deconv matrix products.
template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
using MatMap = Eigen::Map<MatRM<T>>;

template <typename T>
using ConstMatMap = Eigen::Map<const MatRM<T>>;

}  // namespace unshade::nn
