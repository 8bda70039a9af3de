#pragma once

#include <Eigen/Core>

namespace plgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace plgd
