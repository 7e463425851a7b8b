#include "susyqm/superpotential.hpp"

#include <cmath>

#include "susyqm/errors.hpp"

namespace susyqm {

SuperpotentialFamily SuperpotentialFamily::from_expression(std::string_view text,
                                                           DomainHint domain) {
  const Expression w = Expression::parse(text);
  const Expression dw = w.derivative();
  SuperpotentialFamily f;
  f.name_ = std::string(text);
  f.expression_ = std::string(text);
  f.w_ = [w](std::span<const double> xs, const ParamMap& p) { return w.evaluate(xs, p); };
  f.w_prime_ = [dw](std::span<const double> xs, const ParamMap& p) { return dw.evaluate(xs, p); };
  f.parameter_names_ = w.parameters();
  f.domain_ = domain;
  return f;
}

SuperpotentialFamily SuperpotentialFamily::from_callable(std::string name, Evaluator w,
                                                         std::optional<Evaluator> w_prime,
                                                         std::vector<std::string> parameter_names,
                                                         DomainHint domain) {
  SuperpotentialFamily f;
  f.name_ = std::move(name);
  f.w_ = std::move(w);
  f.w_prime_ = std::move(w_prime);
  f.parameter_names_ = std::move(parameter_names);
  f.domain_ = domain;
  return f;
}

SuperpotentialFamily& SuperpotentialFamily::with_lower_limit(double limit) {
  lower_limit_ = limit;
  return *this;
}

SuperpotentialFamily& SuperpotentialFamily::with_name(std::string name) {
  name_ = std::move(name);
  return *this;
}

void SuperpotentialFamily::check_grid(const Grid1D& grid) const {
  if (lower_limit_ && grid.x_min() < *lower_limit_) {
    throw Error(ErrorKind::Singularity,
                "singular point: grid for " + name_ + " starts at " +
                    std::to_string(grid.x_min()) + ", below the allowed minimum " +
                    std::to_string(*lower_limit_));
  }
}

GridFunction SuperpotentialFamily::checked(const Grid1D& grid, std::vector<double> values,
                                           const char* what, const ParamMap& params) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::Singularity,
                  std::string(what) + " of " + name_ + " is not finite at x = " +
                      std::to_string(grid.x(static_cast<int>(i))) + " (" + describe(params) + ")");
    }
  }
  return GridFunction(grid, std::move(values));
}

std::vector<double> SuperpotentialFamily::w_at(std::span<const double> xs,
                                               const ParamMap& params) const {
  return w_(xs, params);
}

GridFunction SuperpotentialFamily::w(const Grid1D& grid, const ParamMap& params) const {
  check_grid(grid);
  const auto xs = grid.nodes();
  return checked(grid, w_(xs, params), "w", params);
}

GridFunction SuperpotentialFamily::w_prime(const Grid1D& grid, const ParamMap& params) const {
  check_grid(grid);
  if (w_prime_) {
    const auto xs = grid.nodes();
    return checked(grid, (*w_prime_)(xs, params), "w'", params);
  }
  return derivative(w(grid, params));
}

}  // namespace susyqm
