#include "ehd/poisson.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <numeric>

#include "ehd/error.hpp"

namespace ehd {

namespace {

double box_norm(const ShiftedLaplacian& a, std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s * a.hx * a.hy);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void remove_mean(std::span<double> v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

// Contribution of one closed side to the diagonal of -Lap_h, per unit 1/h^2.
double closure_weight(Closure c) {
  switch (c) {
    case Closure::kNoFlux: return 0.0;
    case Closure::kGhostDirichlet: return 2.0;
    case Closure::kNodeDirichlet: return 1.0;
  }
  return 0.0;
}

}  // namespace

ShiftedLaplacian ShiftedLaplacian::cells(const Grid2D& g, Closure all, double shift) {
  ShiftedLaplacian a;
  a.mx = g.nx();
  a.my = g.ny();
  a.hx = g.hx();
  a.hy = g.hy();
  a.shift = shift;
  a.west = a.east = a.south = a.north = all;
  return a;
}

bool ShiftedLaplacian::singular() const {
  return shift == 0.0 && cell_shift.empty() && west == Closure::kNoFlux && east == Closure::kNoFlux &&
         south == Closure::kNoFlux && north == Closure::kNoFlux;
}

void ShiftedLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);
  const double ww = closure_weight(west) * cx, we = closure_weight(east) * cx;
  const double ws = closure_weight(south) * cy, wn = closure_weight(north) * cy;
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * mx + i;
      const double xc = x[k];
      double r = (shift + (cell_shift.empty() ? 0.0 : cell_shift[k])) * xc;
      r += (i > 0) ? cx * (xc - x[k - 1]) : ww * xc;
      r += (i + 1 < mx) ? cx * (xc - x[k + 1]) : we * xc;
      r += (j > 0) ? cy * (xc - x[k - mx]) : ws * xc;
      r += (j + 1 < my) ? cy * (xc - x[k + mx]) : wn * xc;
      y[k] = r;
    }
  }
}

std::vector<double> ShiftedLaplacian::diagonal() const {
  const double cx = 1.0 / (hx * hx), cy = 1.0 / (hy * hy);
  std::vector<double> d(size());
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      double r = shift + (cell_shift.empty() ? 0.0 : cell_shift[static_cast<std::size_t>(j) * mx + i]);
      r += (i > 0) ? cx : closure_weight(west) * cx;
      r += (i + 1 < mx) ? cx : closure_weight(east) * cx;
      r += (j > 0) ? cy : closure_weight(south) * cy;
      r += (j + 1 < my) ? cy : closure_weight(north) * cy;
      d[static_cast<std::size_t>(j) * mx + i] = r;
    }
  return d;
}

double relative_residual(const ShiftedLaplacian& a, std::span<const double> b,
                         std::span<const double> x) {
  std::vector<double> r(a.size());
  a.apply(x, r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= b[k];
  return box_norm(a, r) / (1.0 + box_norm(a, b));
}

SolveStats pcg(const ShiftedLaplacian& a, std::span<const double> b, std::span<double> x,
               const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  const std::size_t n = a.size();
  const bool singular = a.singular();
  const std::vector<double> diag = a.diagonal();
  std::vector<double> r(n), z(n), p(n), q(n);

  if (singular) remove_mean(x);
  a.apply(x, q);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - q[k];
  if (singular) remove_mean(r);

  const double scale = 1.0 + box_norm(a, b);
  double res = box_norm(a, r) / scale;
  if (res <= opts.tol) return {0, res};

  for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
  if (singular) remove_mean(z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= opts.max_iter; ++it) {
    a.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw NonConvergence("conjugate gradients broke down", it, res);
    const double alpha = rz / pq;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * q[k];
    }
    if (singular) remove_mean(r);
    res = box_norm(a, r) / scale;
    if (res <= opts.tol) {
      if (singular) remove_mean(x);
      return {it, res};
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = r[k] / diag[k];
    if (singular) remove_mean(z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = z[k] + beta * p[k];
  }
  throw NonConvergence("conjugate gradients did not converge", opts.max_iter, res);
}

struct FactoredLaplacian::Impl {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      ldlt;
};

FactoredLaplacian::FactoredLaplacian(const ShiftedLaplacian& a)
    : op_(a), impl_(std::make_unique<Impl>()) {
  const int n = static_cast<int>(a.size());
  const double cx = 1.0 / (a.hx * a.hx), cy = 1.0 / (a.hy * a.hy);
  const std::vector<double> diag = a.diagonal();
  const bool pin = a.singular();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * 5);
  for (int j = 0; j < a.my; ++j)
    for (int i = 0; i < a.mx; ++i) {
      const int k = j * a.mx + i;
      if (pin && k == 0) {
        t.emplace_back(0, 0, 1.0);
        continue;
      }
      t.emplace_back(k, k, diag[k]);
      auto couple = [&](int m, double c) {
        if (pin && m == 0) return;  // column of the pinned unknown is dropped
        t.emplace_back(k, m, -c);
      };
      if (i > 0) couple(k - 1, cx);
      if (i + 1 < a.mx) couple(k + 1, cx);
      if (j > 0) couple(k - a.mx, cy);
      if (j + 1 < a.my) couple(k + a.mx, cy);
    }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  impl_->ldlt.compute(m);
  if (impl_->ldlt.info() != Eigen::Success)
    throw NonConvergence("sparse factorization failed", 0, 0.0);
}

FactoredLaplacian::~FactoredLaplacian() = default;
FactoredLaplacian::FactoredLaplacian(FactoredLaplacian&&) noexcept = default;
FactoredLaplacian& FactoredLaplacian::operator=(FactoredLaplacian&&) noexcept = default;

void FactoredLaplacian::solve(std::span<const double> b, std::span<double> x) const {
  const auto n = static_cast<Eigen::Index>(op_.size());
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::Map<Eigen::VectorXd> out(x.data(), n);
  if (op_.singular()) {
    Eigen::VectorXd pinned = rhs;
    pinned[0] = 0.0;
    out = impl_->ldlt.solve(pinned);
    remove_mean(x);
  } else {
    out = impl_->ldlt.solve(rhs);
  }
}

ScalarField dirichlet_laplacian(const ScalarField& f) {
  const auto a = ShiftedLaplacian::cells(f.grid(), Closure::kGhostDirichlet);
  ScalarField out(f.grid());
  a.apply(f.values(), out.values());
  out *= -1.0;
  return out;
}

ScalarField neumann_laplacian(const ScalarField& f) {
  const auto a = ShiftedLaplacian::cells(f.grid(), Closure::kNoFlux);
  ScalarField out(f.grid());
  a.apply(f.values(), out.values());
  out *= -1.0;
  return out;
}

namespace {

void check_compatible(const ScalarField& rhs) {
  const double mass = integrate(rhs);
  if (std::abs(mass) > 1e-10 * std::max(1.0, lp_norm(rhs, 1.0))) throw Incompatible(mass);
}

}  // namespace

ScalarField solve_dirichlet(const ScalarField& rhs, const SolveOptions& opts, SolveStats* stats) {
  const auto a = ShiftedLaplacian::cells(rhs.grid(), Closure::kGhostDirichlet);
  ScalarField b = -1.0 * rhs;
  ScalarField x(rhs.grid());
  const SolveStats s = pcg(a, b.values(), x.values(), opts);
  if (stats) *stats = s;
  return x;
}

ScalarField solve_neumann(const ScalarField& rhs, const SolveOptions& opts, SolveStats* stats) {
  check_compatible(rhs);
  const auto a = ShiftedLaplacian::cells(rhs.grid(), Closure::kNoFlux);
  ScalarField b = -1.0 * rhs;
  remove_mean(b.values());
  ScalarField x(rhs.grid());
  const SolveStats s = pcg(a, b.values(), x.values(), opts);
  if (stats) *stats = s;
  return x;
}

PoissonSolver::PoissonSolver(const Grid2D& grid, SolverKind kind, SolveOptions opts)
    : grid_(grid), kind_(kind), opts_(opts) {
  if (kind_ == SolverKind::kCholesky) {
    dirichlet_ = std::make_unique<FactoredLaplacian>(
        ShiftedLaplacian::cells(grid, Closure::kGhostDirichlet));
    neumann_ =
        std::make_unique<FactoredLaplacian>(ShiftedLaplacian::cells(grid, Closure::kNoFlux));
  }
}

ScalarField PoissonSolver::dirichlet(const ScalarField& rhs) const {
  if (kind_ == SolverKind::kConjugateGradient) return solve_dirichlet(rhs, opts_);
  ScalarField b = -1.0 * rhs;
  ScalarField x(grid_);
  dirichlet_->solve(b.values(), x.values());
  const double res = relative_residual(dirichlet_->op(), b.values(), x.values());
  if (!(res <= opts_.tol)) throw NonConvergence("direct Dirichlet solve", 1, res);
  return x;
}

ScalarField PoissonSolver::neumann(const ScalarField& rhs) const {
  if (kind_ == SolverKind::kConjugateGradient) return solve_neumann(rhs, opts_);
  check_compatible(rhs);
  ScalarField b = -1.0 * rhs;
  remove_mean(b.values());
  ScalarField x(grid_);
  neumann_->solve(b.values(), x.values());
  const double res = relative_residual(neumann_->op(), b.values(), x.values());
  if (!(res <= opts_.tol)) throw NonConvergence("direct Neumann solve", 1, res);
  return x;
}

}  // namespace ehd
