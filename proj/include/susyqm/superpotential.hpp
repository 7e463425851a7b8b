#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "susyqm/expression.hpp"
#include "susyqm/numerics.hpp"
#include "susyqm/params.hpp"

namespace susyqm {

/// Recommended box for a family.
struct DomainHint {
  double x_min = kDefaultXMin;
  double x_max = kDefaultXMax;
  int n_points = kDefaultPoints;
  bool wall_at_min = false;  // x_min is a physical wall (radial problems)

  Grid1D grid() const { return grid(x_min, x_max, n_points); }
  Grid1D grid(double lo, double hi, int n) const {
    const Grid1D g = make_grid(lo, hi, n);
    return wall_at_min ? g.with_wall_at_min() : g;
  }
};

/// w(x; a) with an optional exact derivative in x. Families built from an
/// expression always carry the symbolic derivative; callable families
/// without one fall back to finite differences.
class SuperpotentialFamily {
 public:
  using Evaluator =
      std::function<std::vector<double>(std::span<const double> xs, const ParamMap& params)>;

  static SuperpotentialFamily from_expression(std::string_view text, DomainHint domain = {});

  static SuperpotentialFamily from_callable(std::string name, Evaluator w,
                                            std::optional<Evaluator> w_prime,
                                            std::vector<std::string> parameter_names,
                                            DomainHint domain = {});

  const std::string& name() const noexcept { return name_; }
  /// Source text for expression families, empty otherwise.
  const std::string& expression() const noexcept { return expression_; }
  const std::vector<std::string>& parameter_names() const noexcept { return parameter_names_; }
  const DomainHint& domain() const noexcept { return domain_; }
  bool has_analytic_derivative() const noexcept { return w_prime_.has_value(); }

  /// Grids may not start below this point (e.g. r = 0 for radial problems).
  std::optional<double> lower_limit() const noexcept { return lower_limit_; }
  SuperpotentialFamily& with_lower_limit(double limit);
  SuperpotentialFamily& with_name(std::string name);

  /// w tabulated on `grid`. Throws Error(Singularity) when the grid
  /// crosses the lower limit or w is not finite at some node.
  GridFunction w(const Grid1D& grid, const ParamMap& params) const;

  /// w' tabulated on `grid`, analytic when available.
  GridFunction w_prime(const Grid1D& grid, const ParamMap& params) const;

  /// Raw evaluation at arbitrary points (no finiteness check).
  std::vector<double> w_at(std::span<const double> xs, const ParamMap& params) const;

 private:
  SuperpotentialFamily() = default;
  void check_grid(const Grid1D& grid) const;
  GridFunction checked(const Grid1D& grid, std::vector<double> values, const char* what,
                       const ParamMap& params) const;

  std::string name_;
  std::string expression_;
  Evaluator w_;
  std::optional<Evaluator> w_prime_;
  std::vector<std::string> parameter_names_;
  DomainHint domain_;
  std::optional<double> lower_limit_;
};

}  // namespace susyqm
