#pragma once

#include <Eigen/Dense>

namespace aslsl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

} // namespace aslsl
