#include "gaussdist/pfaffian.hpp"

#include <cmath>

namespace gaussdist {

double pfaffian(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (n % 2 != 0) {
    return 0.0;
  }
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) {
      return 0.0;
    }
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace gaussdist
