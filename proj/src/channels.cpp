#include "opolab/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace opolab::channels {

using fock::Complex;
using fock::DensityMatrix;
using fock::Matrix;

Eigen::MatrixXd sqrt_binomial_table(int n_max) {
  if (n_max < 0) throw std::invalid_argument("sqrt_binomial_table: n_max < 0");
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    c(n, 0) = 1.0;
    for (int k = 1; k <= n; ++k) {
      c(n, k) = c(n - 1, k - 1) + (k < n ? c(n - 1, k) : 0.0);
    }
  }
  return c.cwiseSqrt();
}

fock::DensityMatrix loss_apply(const fock::DensityMatrix& rho, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("loss_apply: eta must lie in [0, 1]");
  }
  const int dim = rho.dim();
  if (eta == 1.0) return rho;
  const Eigen::MatrixXd sqrt_binom = sqrt_binomial_table(dim - 1);

  // Precompute eta^{n/2} and (1-eta)^k.
  Eigen::VectorXd eta_half(dim), one_minus(dim);
  for (int n = 0; n < dim; ++n) {
    eta_half(n) = std::pow(eta, 0.5 * n);
    one_minus(n) = std::pow(1.0 - eta, n);
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      Complex acc = 0.0;
      const int k_max = dim - 1 - b;
      for (int k = 0; k <= k_max; ++k) {
        acc += sqrt_binom(a + k, k) * sqrt_binom(b + k, k) * one_minus(k) *
               rho(a + k, b + k);
      }
      acc *= eta_half(a) * eta_half(b);
      out(a, b) = acc;
      if (b != a) out(b, a) = std::conj(acc);
    }
  }
  return DensityMatrix(std::move(out));
}

LossInversionResult loss_invert(const fock::DensityMatrix& rho, double eta) {
  if (!(eta > 0.5 && eta <= 1.0)) {
    throw std::domain_error(
        "loss_invert: eta must lie in (0.5, 1]; below that the inversion "
        "amplifies truncation noise without bound");
  }
  const int dim = rho.dim();
  const Eigen::MatrixXd sqrt_binom = sqrt_binomial_table(dim - 1);
  Eigen::VectorXd one_minus(dim);
  for (int n = 0; n < dim; ++n) one_minus(n) = std::pow(1.0 - eta, n);

  // Solve loss_apply(x, eta) = rho diagonal-by-diagonal; within each
  // offset d = b - a the system is upper triangular in the anti-ordering,
  // so substitute from the top occupation downwards.
  Matrix x = Matrix::Zero(dim, dim);
  for (int d = 0; d < dim; ++d) {
    for (int a = dim - 1 - d; a >= 0; --a) {
      const int b = a + d;
      Complex acc = rho(a, b) / std::pow(eta, a + 0.5 * d);
      for (int k = 1; k <= dim - 1 - b; ++k) {
        acc -= sqrt_binom(a + k, k) * sqrt_binom(b + k, k) * one_minus(k) *
               x(a + k, b + k);
      }
      x(a, b) = acc;
      if (d != 0) x(b, a) = std::conj(acc);
    }
  }

  LossInversionResult result{DensityMatrix(std::move(x)), 0.0, {}};
  const auto report = result.state.normalize();
  result.clipped_mass = report.clipped_mass;
  if (result.clipped_mass > 0.05) {
    result.warnings.push_back(
        "loss inversion clipped " + std::to_string(result.clipped_mass) +
        " of unit trace to restore positivity; treat the result as "
        "noise-dominated");
  }
  return result;
}

fock::Matrix loss_adjoint(const fock::Matrix& povm_element, double eta) {
  if (povm_element.rows() != povm_element.cols() || povm_element.rows() == 0) {
    throw std::invalid_argument("loss_adjoint: POVM element must be square");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::domain_error("loss_adjoint: eta must lie in [0, 1]");
  }
  const int dim = static_cast<int>(povm_element.rows());
  if (eta == 1.0) return povm_element;
  const Eigen::MatrixXd sqrt_binom = sqrt_binomial_table(dim - 1);

  // b(n, k) = sqrt(C(n, k) eta^{n-k} (1-eta)^k)
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int k = 0; k <= n; ++k) {
      b(n, k) = sqrt_binom(n, k) * std::pow(eta, 0.5 * (n - k)) *
                std::pow(1.0 - eta, 0.5 * k);
    }
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = m; n < dim; ++n) {
      Complex acc = 0.0;
      for (int k = 0; k <= m; ++k) {
        acc += b(m, k) * b(n, k) * povm_element(m - k, n - k);
      }
      out(m, n) = acc;
      if (n != m) out(n, m) = std::conj(acc);
    }
  }
  return out;
}

}  // namespace opolab::channels
