#pragma once

#include <Eigen/Core>

namespace gaussdist {

/// Pfaffian of a real antisymmetric matrix (Parlett-Reid elimination with
/// partial pivoting). Odd dimensions return 0.
double pfaffian(Eigen::MatrixXd a);

}  // namespace gaussdist
