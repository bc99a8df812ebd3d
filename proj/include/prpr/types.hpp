#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace prpr {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

}  // namespace prpr
