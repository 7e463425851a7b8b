#pragma once

// Uniform 1D grids and real functions tabulated on them.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace susyqm {

/// Default box for problems posed on the whole real line.
inline constexpr double kDefaultXMin = -10.0;
inline constexpr double kDefaultXMax = 10.0;
inline constexpr int kDefaultPoints = 2001;

/// Amplitudes below this fraction of the peak are treated as tail noise
/// when counting nodes.
inline constexpr double kNodeThreshold = 1e-6;

/// A state "decays" on the box when its amplitude in the boundary band
/// stays below this fraction of its peak.
inline constexpr double kDecayThreshold = 1e-6;

/// Fraction of the nodes at each end of the grid forming the boundary band.
inline constexpr double kBoundaryBandFraction = 0.01;

class Grid1D {
 public:
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  int n_points() const noexcept { return n_points_; }
  double h() const noexcept { return h_; }

  double x(int i) const noexcept { return x_min_ + i * h_; }
  std::vector<double> nodes() const;

  /// Number of nodes in the boundary band at each end (at least one
  /// interior node).
  int boundary_band() const noexcept;

  /// True when x_min is a physical wall (e.g. r = 0 of a radial problem)
  /// rather than a truncation of an open domain. Decay tests then look at
  /// the x_max end only.
  bool wall_at_min() const noexcept { return wall_at_min_; }
  Grid1D with_wall_at_min() const noexcept {
    Grid1D g = *this;
    g.wall_at_min_ = true;
    return g;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  friend Grid1D make_grid(double x_min, double x_max, int n_points);
  Grid1D(double x_min, double x_max, int n_points)
      : x_min_(x_min),
        x_max_(x_max),
        n_points_(n_points),
        h_((x_max - x_min) / (n_points - 1)) {}

  double x_min_;
  double x_max_;
  int n_points_;
  double h_;
  bool wall_at_min_ = false;
};

/// Throws Error(InvalidArgument) unless x_min < x_max and n_points >= 3.
Grid1D make_grid(double x_min, double x_max, int n_points);

inline Grid1D default_grid() {
  return make_grid(kDefaultXMin, kDefaultXMax, kDefaultPoints);
}

/// Real values at every node of a grid. All values are finite.
class GridFunction {
 public:
  GridFunction(Grid1D grid, std::vector<double> values);

  /// Zero function on `grid`.
  explicit GridFunction(Grid1D grid);

  static GridFunction tabulate(const Grid1D& grid,
                               const std::function<double(double)>& f);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double x(std::size_t i) const noexcept { return grid_.x(static_cast<int>(i)); }

  double max_abs() const noexcept;

  GridFunction scaled(double factor) const;

 private:
  Grid1D grid_;
  std::vector<double> values_;
};

/// Central differences inside and one-sided stencils at the two ends, all
/// of the given order (2 or 4). Grids with fewer than 5 points use order 2.
GridFunction derivative(const GridFunction& f, int order = 2);

/// Trapezoidal rule for the integral of f*g over the grid.
double inner_product(const GridFunction& f, const GridFunction& g);

double norm(const GridFunction& f);

/// Returns f / ||f||. Throws Error(ZeroNorm) when ||f||^2 is below
/// `floor`.
GridFunction normalize(const GridFunction& f, double floor = 1e-200);

/// Sign changes between consecutive significant values, where a value is
/// significant if |f| > rel_threshold * max|f|.
int count_nodes(const GridFunction& f, double rel_threshold = kNodeThreshold);

/// Running trapezoidal integral from x_min: F(x_i) = int_{x_min}^{x_i} f.
std::vector<double> cumulative_integral(const GridFunction& f);

/// L2 distance between f and g.
double l2_distance(const GridFunction& f, const GridFunction& g);

/// min(||f - g||, ||f + g||); compares states that are only defined up to
/// sign.
double aligned_l2_distance(const GridFunction& f, const GridFunction& g);

/// max|f| over the boundary bands divided by max|f| over the grid. The
/// band at x_min is skipped when it is a physical wall.
double boundary_ratio(const GridFunction& f);
double boundary_ratio(const Grid1D& grid, std::span<const double> values);

/// Flips the sign so that the first value exceeding `rel_threshold` of the
/// peak is positive.
GridFunction fix_sign(const GridFunction& f, double rel_threshold = 1e-8);

void require_same_grid(const GridFunction& f, const GridFunction& g);

}  // namespace susyqm
