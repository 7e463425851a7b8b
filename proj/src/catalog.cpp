#include "susyqm/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "susyqm/errors.hpp"
#include "susyqm/expression.hpp"

namespace susyqm {

namespace {

double param(const ParamMap& a, const std::string& name) {
  const auto it = a.find(name);
  if (it == a.end()) {
    throw Error(ErrorKind::InvalidArgument, "missing parameter '" + name + "'");
  }
  return it->second;
}

constexpr double kCoulombLowerLimit = 1e-3;

std::vector<SIPRecord> build_registry() {
  std::vector<SIPRecord> out;

  out.push_back(SIPRecord{
      "shifted-harmonic",
      SuperpotentialFamily::from_expression("omega*x", {-10.0, 10.0, 2001})
          .with_name("shifted-harmonic"),
      Translation{0.0, "omega"},
      "2*omega",
      {{"omega", 1.0}},
      [](const ParamMap& a) { return param(a, "omega") > 0.0; },
      "omega > 0; every level is bound",
      {-10.0, 10.0, 2001},
      "V- = omega^2 x^2 - omega, E_n = 2 n omega",
      true});

  out.push_back(SIPRecord{
      "morse",
      SuperpotentialFamily::from_expression("A-exp(-x)", {-4.0, 18.0, 4401}).with_name("morse"),
      Translation{-1.0, "A"},
      "2*A+1",
      {{"A", 2.0}},
      [](const ParamMap& a) { return param(a, "A") > 0.0; },
      "level n is bound iff A - n > 0",
      {-4.0, 18.0, 4401},
      "E_n = A^2 - (A - n)^2",
      true});

  out.push_back(SIPRecord{
      "poschl-teller",
      SuperpotentialFamily::from_expression("A*tanh(x)", {-16.0, 16.0, 3201})
          .with_name("poschl-teller"),
      Translation{-1.0, "A"},
      "2*A+1",
      {{"A", 2.0}},
      [](const ParamMap& a) { return param(a, "A") > 0.0; },
      "level n is bound iff A - n > 0",
      {-16.0, 16.0, 3201},
      "V- = A^2 - A(A+1) sech^2 x, E_n = A^2 - (A - n)^2",
      true});

  out.push_back(SIPRecord{
      "coulomb-radial",
      SuperpotentialFamily::from_expression("e2/(2*(l+1))-(l+1)/x", {kCoulombLowerLimit, 300.0, 15001, true})
          .with_lower_limit(kCoulombLowerLimit)
          .with_name("coulomb-radial"),
      Translation{1.0, "l"},
      "e2^2/4*(1/l^2-1/(l+1)^2)",
      {{"e2", 1.0}, {"l", 0.0}},
      [](const ParamMap& a) { return param(a, "e2") > 0.0 && param(a, "l") > -1.0; },
      "e2 > 0 and l > -1; every level is bound",
      {kCoulombLowerLimit, 300.0, 15001, true},
      "r > 0 with a Dirichlet wall at r = 1e-3; E_n = e2^2/4 (1/(l+1)^2 - 1/(n+l+1)^2)",
      true});

  out.push_back(SIPRecord{
      "scaling-demo",
      std::nullopt,
      Scaling{0.5, "a"},
      "a",
      {{"a", 1.0}},
      [](const ParamMap& a) { return param(a, "a") > 0.0; },
      "a > 0",
      {},
      "defined by (f, R) only: a_1 = a_0 / 2, R(a) = a",
      true});

  out.push_back(SIPRecord{
      "cyclic-demo",
      std::nullopt,
      Cyclic{{{{"s", 0.0}}, {{"s", 1.0}}}},
      "2-s",
      {{"s", 0.0}},
      [](const ParamMap&) { return true; },
      "all levels valid",
      {},
      "defined by (f, R) only: period-2 cycle with R alternating 1, 2",
      true});

  return out;
}

const std::vector<SIPRecord>& registry() {
  static const std::vector<SIPRecord> records = build_registry();
  return records;
}

}  // namespace

double SIPRecord::r(const ParamMap& a) const {
  static thread_local std::map<std::string, Expression> cache;
  auto it = cache.find(r_closed_form);
  if (it == cache.end()) it = cache.emplace(r_closed_form, Expression::parse(r_closed_form)).first;
  return it->second.evaluate(0.0, a);
}

ParamMap SIPRecord::resolve(const ParamMap& params) const {
  ParamMap out = default_params;
  for (const auto& [k, v] : params) {
    if (!out.count(k)) {
      throw Error(ErrorKind::InvalidArgument,
                  "record '" + name + "' has no parameter '" + k + "'");
    }
    out[k] = v;
  }
  return out;
}

std::vector<std::string> list_catalog() {
  std::vector<std::string> names;
  for (const auto& r : registry()) names.push_back(r.name);
  return names;
}

const SIPRecord& get_record(const std::string& name) {
  const auto& recs = registry();
  const auto it =
      std::find_if(recs.begin(), recs.end(), [&](const SIPRecord& r) { return r.name == name; });
  if (it == recs.end()) throw Error(ErrorKind::UnknownName, "unknown catalog record '" + name + "'");
  return *it;
}

Spectrum closed_form_spectrum(const std::string& name, const ParamMap& params, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be non-negative");
  const SIPRecord& rec = get_record(name);
  const ParamMap a0 = rec.resolve(params);
  if (!rec.validity(a0)) {
    throw Error(ErrorKind::InvalidArgument,
                "parameters {" + describe(a0) + "} are invalid for '" + name + "' (" +
                    rec.validity_note + ")");
  }

  Spectrum s;
  s.r_provenance = "closed-form";
  auto push = [&](int n, double e, bool valid) { s.entries.push_back({n, e, valid}); };

  if (name == "shifted-harmonic") {
    const double w = param(a0, "omega");
    for (int n = 0; n <= n_max; ++n) push(n, 2.0 * n * w, true);
  } else if (name == "morse" || name == "poschl-teller") {
    const double a = param(a0, "A");
    for (int n = 0; n <= n_max; ++n) {
      const double d = a - n;
      push(n, a * a - d * d, d > 0.0);
    }
  } else if (name == "coulomb-radial") {
    const double e2 = param(a0, "e2");
    const double l1 = param(a0, "l") + 1.0;
    for (int n = 0; n <= n_max; ++n) {
      push(n, e2 * e2 / 4.0 * (1.0 / (l1 * l1) - 1.0 / ((n + l1) * (n + l1))), true);
    }
  } else if (name == "scaling-demo") {
    const double a = param(a0, "a");
    const double q = std::get<Scaling>(rec.transform.variant()).q;
    for (int n = 0; n <= n_max; ++n) push(n, a * q * (1.0 - std::pow(q, n)) / (1.0 - q), true);
  } else if (name == "cyclic-demo") {
    // Sum over whole periods plus the leftover steps of the cycle.
    const auto& values = std::get<Cyclic>(rec.transform.variant()).values;
    const int period = static_cast<int>(values.size());
    std::vector<double> step(static_cast<std::size_t>(period));
    double per_period = 0.0;
    for (int k = 0; k < period; ++k) {
      step[static_cast<std::size_t>(k)] = rec.r(values[static_cast<std::size_t>((k + 1) % period)]);
      per_period += step[static_cast<std::size_t>(k)];
    }
    for (int n = 0; n <= n_max; ++n) {
      double partial = 0.0;
      for (int k = 0; k < n % period; ++k) partial += step[static_cast<std::size_t>(k)];
      push(n, (n / period) * per_period + partial, true);
    }
  } else {
    throw Error(ErrorKind::UnknownName, "no closed form for '" + name + "'");
  }

  for (const auto& e : s.entries) {
    if (!e.valid) {
      s.first_invalid = e.n;
      break;
    }
  }
  return s;
}

Spectrum record_spectrum(const SIPRecord& record, const ParamMap& params, int n_max) {
  const ParamMap a0 = record.resolve(params);
  return algebraic_spectrum([&record](const ParamMap& a) { return record.r(a); },
                            record.transform, a0, n_max, record.validity, "closed-form");
}

Instance instantiate(const std::string& name, const ParamMap& params, const Grid1D& grid) {
  const SIPRecord& rec = get_record(name);
  if (!rec.family) {
    throw Error(ErrorKind::InvalidArgument,
                "record '" + name + "' is defined by (f, R) only and has no potential");
  }
  const ParamMap a = rec.resolve(params);
  auto pair = partner_potentials(*rec.family, a, grid);
  GridFunction w = pair.w_used;
  return Instance{std::move(pair), std::move(w)};
}

}  // namespace susyqm
