#include "ehd/transport.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ehd/error.hpp"

namespace ehd {

double bernoulli(double x) {
  if (std::abs(x) < 1e-10) return 1.0 - 0.5 * x + x * x / 12.0;
  return x / std::expm1(x);
}

double sg_face_flux(double c_left, double c_right, double dpsi, double h, int sign) {
  const double s = sign * dpsi;
  return (bernoulli(s) * c_left - bernoulli(-s) * c_right) / h;
}

ScalarField upwind_advection(const ScalarField& c, const MacVectorField& u) {
  const Grid2D& g = c.grid();
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  ScalarField out(g);
  for (int j = 0; j < ny; ++j)
    for (int i = 1; i < nx; ++i) {
      const double vel = u.ux(i, j);
      const double f = vel * (vel > 0.0 ? c(i - 1, j) : c(i, j)) / hx;
      out(i - 1, j) += f;
      out(i, j) -= f;
    }
  for (int j = 1; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double vel = u.uy(i, j);
      const double f = vel * (vel > 0.0 ? c(i, j - 1) : c(i, j)) / hy;
      out(i, j - 1) += f;
      out(i, j) -= f;
    }
  return out;
}

double advective_dt_limit(const MacVectorField& u) {
  const Grid2D& g = u.grid();
  const double hx = g.hx(), hy = g.hy();
  double worst = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double out = std::max(u.ux(i + 1, j), 0.0) / hx + std::max(-u.ux(i, j), 0.0) / hx +
                         std::max(u.uy(i, j + 1), 0.0) / hy + std::max(-u.uy(i, j), 0.0) / hy;
      worst = std::max(worst, out);
    }
  return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

struct ChargeStepper::Impl {
  explicit Impl(const Grid2D& g) : grid(g) {
    const int nx = g.nx(), ny = g.ny();
    const int n = static_cast<int>(g.cell_count());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n) * 5);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int k = j * nx + i;
        t.emplace_back(k, k, 1.0);
        if (i > 0) t.emplace_back(k, k - 1, -1.0);
        if (i + 1 < nx) t.emplace_back(k, k + 1, -1.0);
        if (j > 0) t.emplace_back(k, k - nx, -1.0);
        if (j + 1 < ny) t.emplace_back(k, k + nx, -1.0);
      }
    matrix.resize(n, n);
    matrix.setFromTriplets(t.begin(), t.end());
    matrix.makeCompressed();
    ldlt.analyzePattern(matrix);
  }

  // Writes a coefficient into the compressed matrix (entry must exist).
  void set(int row, int col, double value) { matrix.coeffRef(row, col) = value; }

  Grid2D grid;
  Eigen::SparseMatrix<double> matrix;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
};

ChargeStepper::ChargeStepper(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {}
ChargeStepper::~ChargeStepper() = default;
ChargeStepper::ChargeStepper(ChargeStepper&&) noexcept = default;
ChargeStepper& ChargeStepper::operator=(ChargeStepper&&) noexcept = default;

ScalarField ChargeStepper::step_species(const ScalarField& c, const ScalarField& phi, int sign,
                                        const MacVectorField& u, double dt) {
  const Grid2D& g = impl_->grid;
  if (!(c.grid() == g) || !(phi.grid() == g) || !(u.grid() == g))
    throw InvalidArgument("charge step fields live on different grids");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (sign != kCationSign && sign != kAnionSign) throw InvalidArgument("species sign must be +-1");
  const double limit = advective_dt_limit(u);
  if (dt > limit) throw CflViolation(dt, limit);

  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();

  // Equilibrium potential theta (c_eq ~ e^theta), shifted so max theta = 0.
  ScalarField theta = -static_cast<double>(sign) * phi;
  const double tmax = *std::max_element(theta.values().begin(), theta.values().end());
  for (double& x : theta.values()) x -= tmax;

  // Face conductance in the Slotboom variable: B(dtheta) e^{theta_R}, symmetric in L, R.
  auto kappa = [](double tl, double tr) { return bernoulli(tr - tl) * std::exp(tr); };

  auto& m = impl_->matrix;
  std::vector<double> diag(g.cell_count());
  for (std::size_t k = 0; k < diag.size(); ++k) diag[k] = std::exp(theta[k]);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int k = j * nx + i;
      if (i + 1 < nx) {
        const double a = dt * kappa(theta[k], theta[k + 1]) / (hx * hx);
        diag[k] += a;
        diag[k + 1] += a;
        impl_->set(k, k + 1, -a);
        impl_->set(k + 1, k, -a);
      }
      if (j + 1 < ny) {
        const double a = dt * kappa(theta[k], theta[k + nx]) / (hy * hy);
        diag[k] += a;
        diag[k + nx] += a;
        impl_->set(k, k + nx, -a);
        impl_->set(k + nx, k, -a);
      }
    }
  for (int k = 0; k < static_cast<int>(diag.size()); ++k) impl_->set(k, k, diag[k]);

  impl_->ldlt.factorize(m);
  if (impl_->ldlt.info() != Eigen::Success)
    throw NonConvergence("Nernst-Planck factorization failed", 0, 0.0);

  ScalarField rhs = c;
  if (u.max_abs() > 0.0) {
    const ScalarField adv = upwind_advection(c, u);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= dt * adv[k];
  }
  const auto n = static_cast<Eigen::Index>(g.cell_count());
  Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(), n);
  const Eigen::VectorXd slot = impl_->ldlt.solve(b);
  if (impl_->ldlt.info() != Eigen::Success || !slot.allFinite())
    throw NonConvergence("Nernst-Planck solve failed", 1, 0.0);

  ScalarField out(g);
  for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = std::exp(theta[k]) * slot[k];
  return out;
}

ChargePair ChargeStepper::step(const ChargePair& c, const ScalarField& phi,
                               const MacVectorField& u, double dt) {
  return {step_species(c.v, phi, kCationSign, u, dt), step_species(c.w, phi, kAnionSign, u, dt)};
}

ChargePair step_charges(const ChargePair& c, const ScalarField& phi, const MacVectorField& u,
                        double dt) {
  ChargeStepper stepper(c.v.grid());
  return stepper.step(c, phi, u, dt);
}

}  // namespace ehd
