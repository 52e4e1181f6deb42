#include "opolab/fock.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "opolab/errors.hpp"

namespace opolab::fock {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) +
                                ": matrix must be square and non-empty");
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix elements) : elements_(std::move(elements)) {
  require_square(elements_, "DensityMatrix");
}

DensityMatrix DensityMatrix::vacuum(int dim) { return fock_state(0, dim); }

DensityMatrix DensityMatrix::fock_state(int n, int dim) {
  if (dim < 1 || n < 0 || n >= dim) {
    throw std::invalid_argument("fock_state: need 0 <= n < dim");
  }
  DensityMatrix rho(dim);
  rho.matrix()(n, n) = 1.0;
  return rho;
}

DensityMatrix DensityMatrix::from_ket(const Vector& ket) {
  if (ket.size() == 0) throw std::invalid_argument("from_ket: empty ket");
  const double norm = ket.norm();
  if (norm <= 0.0) throw std::invalid_argument("from_ket: zero ket");
  Vector unit = ket / norm;
  return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::from_populations(
    const std::vector<double>& populations) {
  if (populations.empty()) {
    throw std::invalid_argument("from_populations: empty");
  }
  DensityMatrix rho(static_cast<int>(populations.size()));
  for (int n = 0; n < rho.dim(); ++n) {
    const double p = populations[static_cast<std::size_t>(n)];
    if (!(p >= 0.0)) {
      throw std::invalid_argument("from_populations: negative population");
    }
    rho.matrix()(n, n) = p;
  }
  return rho;
}

double DensityMatrix::hermiticity_defect() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Matrix sym = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  return solver.eigenvalues().minCoeff();
}

NormalizeReport DensityMatrix::normalize() {
  NormalizeReport report;
  report.trace_before = trace_real();
  if (!(report.trace_before > 0.0) || !std::isfinite(report.trace_before)) {
    throw std::invalid_argument("normalize: non-positive trace");
  }
  Matrix sym = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  Eigen::VectorXd evals = solver.eigenvalues();
  double clipped = 0.0;
  for (int i = 0; i < evals.size(); ++i) {
    if (evals(i) < 0.0) {
      clipped -= evals(i);
      evals(i) = 0.0;
    }
  }
  report.clipped_mass = clipped / report.trace_before;
  Matrix rebuilt = solver.eigenvectors() * evals.asDiagonal() *
                   solver.eigenvectors().adjoint();
  const double trace = rebuilt.trace().real();
  if (!(trace > 0.0)) {
    throw std::invalid_argument("normalize: state vanished after clipping");
  }
  elements_ = rebuilt / trace;
  return report;
}

void DensityMatrix::require_normalized(double tol) const {
  if (std::abs(trace_real() - 1.0) > tol) {
    throw std::invalid_argument("density matrix trace " +
                                format_double(trace_real()) +
                                " is not within " + format_double(tol) +
                                " of 1; call normalize() first");
  }
  if (hermiticity_defect() > 1e-8) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
}

DensityMatrix DensityMatrix::padded(int dim) const {
  if (dim < this->dim()) {
    throw std::invalid_argument("padded: target cutoff smaller than current");
  }
  Matrix out = Matrix::Zero(dim, dim);
  out.topLeftCorner(this->dim(), this->dim()) = elements_;
  return DensityMatrix(std::move(out));
}

std::string DensityMatrix::to_json() const {
  nlohmann::json j;
  j["dim"] = dim();
  std::vector<std::vector<double>> re(static_cast<std::size_t>(dim())),
      im(static_cast<std::size_t>(dim()));
  for (int r = 0; r < dim(); ++r) {
    auto& re_row = re[static_cast<std::size_t>(r)];
    auto& im_row = im[static_cast<std::size_t>(r)];
    re_row.resize(static_cast<std::size_t>(dim()));
    im_row.resize(static_cast<std::size_t>(dim()));
    for (int c = 0; c < dim(); ++c) {
      re_row[static_cast<std::size_t>(c)] = elements_(r, c).real();
      im_row[static_cast<std::size_t>(c)] = elements_(r, c).imag();
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump(2) + "\n";
}

DensityMatrix DensityMatrix::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ConfigError(std::string("density matrix JSON parse error: ") +
                      err.what());
  }
  if (!j.contains("dim") || !j.contains("re") || !j.contains("im")) {
    throw ConfigError("density matrix JSON needs keys dim, re, im");
  }
  const int dim = j["dim"].get<int>();
  if (dim < 1) throw ConfigError("density matrix JSON: dim must be >= 1");
  const auto& re = j["re"];
  const auto& im = j["im"];
  if (static_cast<int>(re.size()) != dim || static_cast<int>(im.size()) != dim) {
    throw ConfigError("density matrix JSON: re/im row count mismatch");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& re_row = re[static_cast<std::size_t>(r)];
    const auto& im_row = im[static_cast<std::size_t>(r)];
    if (static_cast<int>(re_row.size()) != dim ||
        static_cast<int>(im_row.size()) != dim) {
      throw ConfigError("density matrix JSON: re/im column count mismatch");
    }
    for (int c = 0; c < dim; ++c) {
      m(r, c) = Complex(re_row[static_cast<std::size_t>(c)].get<double>(),
                        im_row[static_cast<std::size_t>(c)].get<double>());
    }
  }
  return DensityMatrix(std::move(m));
}

TwoModeState::TwoModeState(Matrix coefficients)
    : coefficients_(std::move(coefficients)) {
  require_square(coefficients_, "TwoModeState");
}

DensityMatrix TwoModeState::reduce_signal() const {
  return DensityMatrix(coefficients_ * coefficients_.adjoint());
}

double hermite_wavefunction(int n, double x, int n_max) {
  if (n_max < 0) {
    throw std::invalid_argument("hermite_wavefunction: n_max < 0");
  }
  if (n < 0 || n > n_max) {
    throw std::invalid_argument("hermite_wavefunction: n outside [0, n_max]");
  }
  if (!std::isfinite(x) || std::abs(x) > 40.0) {
    throw std::domain_error("hermite_wavefunction: x outside [-40, 40]");
  }
  double prev = 0.0;
  double cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 1; k <= n; ++k) {
    const double next =
        x * std::sqrt(2.0 / k) * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::VectorXd wavefunction_column(int n, double x) {
  if (n < 0) throw std::domain_error("wavefunction_column: n < 0");
  if (!std::isfinite(x) || std::abs(x) > 40.0) {
    throw std::domain_error("wavefunction_column: x outside [-40, 40]");
  }
  Eigen::VectorXd psi(n + 1);
  psi(0) = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 1; k <= n; ++k) {
    psi(k) = x * std::sqrt(2.0 / k) * psi(k - 1);
    if (k >= 2) psi(k) -= std::sqrt((k - 1.0) / k) * psi(k - 2);
  }
  return psi;
}

double quadrature_pdf(const DensityMatrix& rho, double theta, double x) {
  rho.require_normalized(1e-6);
  const int dim = rho.dim();
  const Eigen::VectorXd psi = wavefunction_column(dim - 1, x);
  Vector v(dim);
  for (int n = 0; n < dim; ++n) {
    v(n) = psi(n) * std::exp(Complex(0.0, n * theta));
  }
  const Complex value = v.dot(rho.matrix() * v);
  return value.real();
}

double wigner_point(const DensityMatrix& rho, double x, double p) {
  const int dim = rho.dim();
  const double s = x * x + p * p;
  const double z = 2.0 * s;
  const double gauss = std::exp(-s);
  const Complex beta = std::sqrt(2.0) * Complex(x, p);

  double total = 0.0;
  Complex beta_pow = 1.0;  // beta^d
  for (int d = 0; d < dim; ++d) {
    // Generalized Laguerre L_n^{(d)}(z) by upward recurrence in n.
    double lag_prev = 0.0;
    double lag = 1.0;
    double sign = 1.0;  // (-1)^n
    double acc = 0.0;
    for (int n = 0; n + d < dim; ++n) {
      if (n >= 1) {
        const double next =
            ((2.0 * n - 1.0 + d - z) * lag - (n - 1.0 + d) * lag_prev) / n;
        lag_prev = lag;
        lag = next;
        sign = -sign;
      }
      const int m = n + d;
      const double ratio =
          std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
      const Complex rho_nm = rho(n, m);
      const double weight =
          (d == 0) ? rho_nm.real() : 2.0 * (rho_nm * beta_pow).real();
      acc += weight * sign * ratio * lag;
    }
    total += acc;
    beta_pow *= beta;
  }
  return gauss * total / M_PI;
}

double WignerGrid::integral() const {
  // Trapezoid rule in both axes; assumes uniformly spaced xs and ps.
  if (xs.size() < 2 || ps.size() < 2) return 0.0;
  const double dx = xs[1] - xs[0];
  const double dp = ps[1] - ps[0];
  double total = 0.0;
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    const double wx = (i == 0 || i + 1 == static_cast<int>(xs.size())) ? 0.5 : 1.0;
    for (int j = 0; j < static_cast<int>(ps.size()); ++j) {
      const double wp =
          (j == 0 || j + 1 == static_cast<int>(ps.size())) ? 0.5 : 1.0;
      total += wx * wp * values(i, j);
    }
  }
  return total * dx * dp;
}

std::string WignerGrid::to_csv() const {
  std::string out = "x,p,w\n";
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    for (int j = 0; j < static_cast<int>(ps.size()); ++j) {
      out += format_double(xs[static_cast<std::size_t>(i)]);
      out += ',';
      out += format_double(ps[static_cast<std::size_t>(j)]);
      out += ',';
      out += format_double(values(i, j));
      out += '\n';
    }
  }
  return out;
}

WignerGrid wigner(const DensityMatrix& rho, const std::vector<double>& xs,
                  const std::vector<double>& ps) {
  rho.require_normalized(1e-6);
  WignerGrid grid;
  grid.xs = xs;
  grid.ps = ps;
  grid.values.resize(static_cast<Eigen::Index>(xs.size()),
                     static_cast<Eigen::Index>(ps.size()));
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    for (int j = 0; j < static_cast<int>(ps.size()); ++j) {
      grid.values(i, j) = wigner_point(rho, xs[static_cast<std::size_t>(i)],
                                       ps[static_cast<std::size_t>(j)]);
    }
  }
  return grid;
}

WignerGrid wigner_square_grid(const DensityMatrix& rho, double half_extent,
                              int points_per_axis) {
  if (points_per_axis < 2 || half_extent <= 0.0) {
    throw std::invalid_argument("wigner_square_grid: bad grid request");
  }
  std::vector<double> axis(static_cast<std::size_t>(points_per_axis));
  const double dx = 2.0 * half_extent / (points_per_axis - 1);
  for (int i = 0; i < points_per_axis; ++i) {
    axis[static_cast<std::size_t>(i)] = -half_extent + i * dx;
  }
  return wigner(rho, axis, axis);
}

double fidelity(const DensityMatrix& rho, const Vector& target_ket) {
  if (target_ket.size() == 0) {
    throw std::invalid_argument("fidelity: empty target ket");
  }
  if (std::abs(target_ket.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("fidelity: target ket is not normalized");
  }
  const int dim = std::max<int>(rho.dim(), static_cast<int>(target_ket.size()));
  Vector t = Vector::Zero(dim);
  t.head(target_ket.size()) = target_ket;
  const DensityMatrix padded = rho.dim() < dim ? rho.padded(dim) : rho;
  return t.dot(padded.matrix() * t).real();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& target) {
  const int dim = std::max(rho.dim(), target.dim());
  const DensityMatrix a = rho.dim() < dim ? rho.padded(dim) : rho;
  const DensityMatrix b = target.dim() < dim ? target.padded(dim) : target;
  const double purity_a = (a.matrix() * a.matrix()).trace().real();
  const double purity_b = (b.matrix() * b.matrix()).trace().real();
  if (purity_a < 1.0 - 1e-6 && purity_b < 1.0 - 1e-6) {
    throw std::invalid_argument(
        "fidelity: overlap Tr[rho sigma] equals fidelity only when one "
        "operand is pure; got two mixed states");
  }
  return (a.matrix() * b.matrix()).trace().real();
}

PhotonStatistics photon_statistics(const DensityMatrix& rho) {
  PhotonStatistics stats;
  stats.populations.resize(static_cast<std::size_t>(rho.dim()));
  double sign = 1.0;
  for (int n = 0; n < rho.dim(); ++n) {
    const double pn = rho(n, n).real();
    stats.populations[static_cast<std::size_t>(n)] = pn;
    stats.mean_photon += n * pn;
    stats.parity += sign * pn;
    sign = -sign;
  }
  return stats;
}

}  // namespace opolab::fock
