#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "opolab/channels.hpp"
#include "opolab/fock.hpp"

using opolab::fock::Complex;
using opolab::fock::DensityMatrix;
using opolab::fock::Matrix;

namespace {

constexpr double kPi = 3.14159265358979323846;

DensityMatrix random_density(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  }
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(rho);
}

Matrix random_hermitian(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(normal(gen), normal(gen));
  }
  return Matrix(0.5 * (a + a.adjoint()));
}

}  // namespace

TEST_SUITE("channels") {

TEST_CASE("loss on number states gives binomial populations") {
  const auto one = opolab::channels::loss_apply(
      DensityMatrix::fock_state(1, 3), 0.85);
  CHECK(one(0, 0).real() == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(one(1, 1).real() == doctest::Approx(0.85).epsilon(1e-12));

  const auto two = opolab::channels::loss_apply(
      DensityMatrix::fock_state(2, 4), 0.85);
  CHECK(two(0, 0).real() == doctest::Approx(0.0225).epsilon(1e-12));
  CHECK(two(1, 1).real() == doctest::Approx(0.255).epsilon(1e-12));
  CHECK(two(2, 2).real() == doctest::Approx(0.7225).epsilon(1e-12));
}

TEST_CASE("loss endpoints, trace preservation and coherence scaling") {
  std::mt19937_64 gen(31);
  const DensityMatrix rho = random_density(6, gen);

  const auto same = opolab::channels::loss_apply(rho, 1.0);
  CHECK((same.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-14);

  const auto dark = opolab::channels::loss_apply(rho, 0.0);
  CHECK(dark(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

  for (const double eta : {0.3, 0.6, 0.85, 0.97}) {
    const auto out = opolab::channels::loss_apply(rho, eta);
    CHECK(std::abs(out.trace_real() - 1.0) <= 1e-12);
    CHECK(out.min_eigenvalue() >= -1e-12);
    // The topmost coherence has nothing above it to feed down from, so it
    // scales by exactly eta^((m+n)/2) = eta^(9/2) on six levels.
    CHECK(std::abs(out(4, 5) - std::pow(eta, 4.5) * rho(4, 5)) <= 1e-12);
  }
  // On two levels the 0-1 coherence scales by sqrt(eta) exactly.
  const DensityMatrix qubit = random_density(2, gen);
  const auto qubit_out = opolab::channels::loss_apply(qubit, 0.85);
  CHECK(std::abs(qubit_out(0, 1) - std::sqrt(0.85) * qubit(0, 1)) <= 1e-12);
  CHECK_THROWS_AS(opolab::channels::loss_apply(rho, 1.2), std::domain_error);
  CHECK_THROWS_AS(opolab::channels::loss_apply(rho, -0.1), std::domain_error);
}

TEST_CASE("loss channels compose as a semigroup") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho = random_density(2 + trial % 6, gen);
    const double a = 0.55 + 0.02 * trial;
    const double b = 0.97 - 0.015 * trial;
    const auto two_step = opolab::channels::loss_apply(
        opolab::channels::loss_apply(rho, a), b);
    const auto one_step = opolab::channels::loss_apply(rho, a * b);
    CHECK((two_step.matrix() - one_step.matrix()).cwiseAbs().maxCoeff() <=
          1e-10);
  }
}

TEST_CASE("loss smooths the one-photon Wigner dip monotonically") {
  // W(0,0) of a one-photon state through transmission eta is (2 eta - 1)
  // times the vacuum depth: (1 - 2 eta) / pi.
  double prev = -10.0;
  for (const double eta : {1.0, 0.9, 0.8, 0.7, 0.6, 0.5}) {
    const auto rho = opolab::channels::loss_apply(
        DensityMatrix::fock_state(1, 4), eta);
    const double w = opolab::fock::wigner_point(rho, 0.0, 0.0);
    CHECK(w == doctest::Approx((1.0 - 2.0 * eta) / kPi).epsilon(1e-10));
    CHECK(w > prev);  // shallower dip as eta drops
    prev = w;
  }
}

TEST_CASE("loss inversion round-trips random states") {
  std::mt19937_64 gen(13);
  for (const double eta : {0.85, 0.92, 0.99}) {
    const DensityMatrix rho = random_density(5, gen);
    const auto lossy = opolab::channels::loss_apply(rho, eta);
    const auto inverted = opolab::channels::loss_invert(lossy, eta);
    CHECK((inverted.state.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <=
          1e-9);
    CHECK(inverted.clipped_mass <= 1e-9);
  }
}

TEST_CASE("loss inversion matches the frozen back-substitution oracle") {
  // invert(diag(0.19, 0.78, 0.03), 0.85): top-down substitution gives
  // x2 = 0.03/0.85^2, x1 = (0.78 - 2*0.85*0.15*x2)/0.85, x0 = remainder.
  const auto result = opolab::channels::loss_invert(
      DensityMatrix::from_populations({0.19, 0.78, 0.03}), 0.85);
  CHECK(result.state(2, 2).real() == doctest::Approx(0.04152249).epsilon(1e-7));
  CHECK(result.state(1, 1).real() == doctest::Approx(0.90519031).epsilon(1e-7));
  CHECK(result.state(0, 0).real() == doctest::Approx(0.05328720).epsilon(1e-6));
  CHECK(result.state.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.clipped_mass <= 1e-12);
  CHECK(result.warnings.empty());
}

TEST_CASE("loss inversion refuses eta at or below one half") {
  const DensityMatrix rho = DensityMatrix::from_populations({0.5, 0.5});
  CHECK_THROWS_AS(opolab::channels::loss_invert(rho, 0.5), std::domain_error);
  CHECK_THROWS_AS(opolab::channels::loss_invert(rho, 0.2), std::domain_error);
}

TEST_CASE("loss inversion clips and warns on unphysical inputs") {
  // diag(0.05, 0.95) cannot come from transmission 0.6 of any state on
  // two levels: substitution gives x1 = 0.95/0.6 > 1 and x0 < 0.
  const auto result = opolab::channels::loss_invert(
      DensityMatrix::from_populations({0.05, 0.95}), 0.6);
  CHECK(result.clipped_mass > 0.05);
  CHECK(!result.warnings.empty());
  CHECK(result.state.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.state.min_eigenvalue() >= -1e-12);
}

TEST_CASE("adjoint loss is unital and dual to the channel") {
  std::mt19937_64 gen(41);
  const int dim = 6;
  for (const double eta : {0.55, 0.7, 0.85, 1.0}) {
    const Matrix identity = Matrix::Identity(dim, dim);
    const Matrix adj_id = opolab::channels::loss_adjoint(identity, eta);
    CHECK((adj_id - identity).cwiseAbs().maxCoeff() <= 1e-12);

    for (int trial = 0; trial < 10; ++trial) {
      const Matrix povm = random_hermitian(dim, gen);
      const DensityMatrix rho = random_density(dim, gen);
      const Complex lhs =
          (opolab::channels::loss_adjoint(povm, eta) * rho.matrix()).trace();
      const Complex rhs =
          (povm * opolab::channels::loss_apply(rho, eta).matrix()).trace();
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("adjoint loss commutes with phase modulation") {
  // The adjoint acts on each diagonal offset separately, so the phase
  // pattern exp(i (n - m) theta) can be applied before or after it. This
  // is what lets the tomography POVM smear its x-bins once per efficiency
  // and rotate them afterwards.
  std::mt19937_64 gen(59);
  const int dim = 7;
  const double theta = 0.83;
  Matrix phase(dim, dim);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      phase(m, n) = std::exp(Complex(0.0, (n - m) * theta));
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix povm = random_hermitian(dim, gen);
    const Matrix lhs = opolab::channels::loss_adjoint(
        povm.cwiseProduct(phase), 0.8);
    const Matrix rhs =
        opolab::channels::loss_adjoint(povm, 0.8).cwiseProduct(phase);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("square-root binomial table matches factorial ratios") {
  const Eigen::MatrixXd table = opolab::channels::sqrt_binomial_table(8);
  const auto binom = [](int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
  };
  for (int n = 0; n <= 8; ++n) {
    for (int k = 0; k <= n; ++k) {
      CHECK(table(n, k) ==
            doctest::Approx(std::sqrt(binom(n, k))).epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
