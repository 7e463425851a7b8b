#include "susyqm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyqm/errors.hpp"

namespace susyqm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::GridMismatch: return "grid-mismatch";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::ZeroNorm: return "zero-norm";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::NoBoundState: return "no-bound-state";
    case ErrorKind::NodePresent: return "node-present";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::ConstructionFailure: return "construction-failure";
    case ErrorKind::UnknownName: return "unknown-name";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

Grid1D make_grid(double x_min, double x_max, int n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw Error(ErrorKind::InvalidArgument, "grid bounds must be finite");
  }
  if (!(x_min < x_max)) {
    std::ostringstream msg;
    msg << "domain-order violation: x_min (" << x_min << ") must be below x_max ("
        << x_max << ")";
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  if (n_points < 3) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least 3 points");
  }
  return Grid1D(x_min, x_max, n_points);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(static_cast<std::size_t>(n_points_));
  for (int i = 0; i < n_points_; ++i) xs[i] = x(i);
  return xs;
}

int Grid1D::boundary_band() const noexcept {
  const int band = static_cast<int>(std::lround(kBoundaryBandFraction * (n_points_ - 1)));
  return std::max(band, 1);
}

GridFunction::GridFunction(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(grid_.n_points())) {
    throw Error(ErrorKind::InvalidArgument,
                "grid function has " + std::to_string(values_.size()) +
                    " values for a grid of " + std::to_string(grid_.n_points()) +
                    " points");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorKind::NonFinite,
                  "non-finite value at node " + std::to_string(i));
    }
  }
}

GridFunction::GridFunction(Grid1D grid)
    : grid_(grid), values_(static_cast<std::size_t>(grid.n_points()), 0.0) {}

GridFunction GridFunction::tabulate(const Grid1D& grid,
                                    const std::function<double(double)>& f) {
  std::vector<double> v(static_cast<std::size_t>(grid.n_points()));
  for (int i = 0; i < grid.n_points(); ++i) v[i] = f(grid.x(i));
  return GridFunction(grid, std::move(v));
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return GridFunction(grid_, std::move(v));
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid() == g.grid())) {
    throw Error(ErrorKind::GridMismatch, "grid functions live on different grids");
  }
}

GridFunction derivative(const GridFunction& f, int order) {
  if (order != 2 && order != 4) {
    throw Error(ErrorKind::InvalidArgument, "derivative order must be 2 or 4");
  }
  const auto y = f.values();
  const std::size_t n = y.size();
  const double h = f.grid().h();
  std::vector<double> d(n);
  if (order == 2 || n < 5) {
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
    return GridFunction(f.grid(), std::move(d));
  }
  const double s = 12.0 * h;
  d[0] = (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / s;
  d[1] = (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / s;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / s;
  }
  d[n - 2] = (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) / s;
  d[n - 1] = (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) / s;
  return GridFunction(f.grid(), std::move(d));
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  const auto a = f.values();
  const auto b = g.values();
  const std::size_t n = a.size();
  double sum = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += a[i] * b[i];
  return sum * f.grid().h();
}

double norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

GridFunction normalize(const GridFunction& f, double floor) {
  const double nn = inner_product(f, f);
  if (!(nn > floor)) {
    throw Error(ErrorKind::ZeroNorm, "cannot normalize a function with (near-)zero norm");
  }
  return f.scaled(1.0 / std::sqrt(nn));
}

int count_nodes(const GridFunction& f, double rel_threshold) {
  const double peak = f.max_abs();
  if (peak == 0.0) {
    throw Error(ErrorKind::ZeroNorm, "node count of the zero function is undefined");
  }
  const double cut = rel_threshold * peak;
  int nodes = 0;
  int last_sign = 0;
  for (double v : f.values()) {
    if (std::abs(v) <= cut) continue;
    const int s = v > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

std::vector<double> cumulative_integral(const GridFunction& f) {
  const auto y = f.values();
  const double h = f.grid().h();
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = 1; i < y.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
  }
  return out;
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g);
  std::vector<double> d(f.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = f[i] - g[i];
  return norm(GridFunction(f.grid(), std::move(d)));
}

double aligned_l2_distance(const GridFunction& f, const GridFunction& g) {
  return std::min(l2_distance(f, g), l2_distance(f, g.scaled(-1.0)));
}

double boundary_ratio(const Grid1D& grid, std::span<const double> values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 1.0;
  const std::size_t n = values.size();
  const std::size_t band = static_cast<std::size_t>(grid.boundary_band());
  double edge = 0.0;
  for (std::size_t i = 0; i <= band && i < n; ++i) {
    if (!grid.wall_at_min()) edge = std::max(edge, std::abs(values[i]));
    edge = std::max(edge, std::abs(values[n - 1 - i]));
  }
  return edge / peak;
}

double boundary_ratio(const GridFunction& f) {
  return boundary_ratio(f.grid(), f.values());
}

GridFunction fix_sign(const GridFunction& f, double rel_threshold) {
  const double cut = rel_threshold * f.max_abs();
  for (double v : f.values()) {
    if (std::abs(v) > cut) return v < 0 ? f.scaled(-1.0) : f;
  }
  return f;
}

}  // namespace susyqm
