#include <cmath>

#include "doctest.h"
#include "susyqm/catalog.hpp"
#include "susyqm/errors.hpp"
#include "susyqm/oracle.hpp"
#include "susyqm/susy.hpp"

using namespace susyqm;

namespace {

double max_diff(const GridFunction& f, const std::function<double(double)>& g, double lo = -1e300,
                double hi = 1e300) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.x(i);
    if (x < lo || x > hi) continue;
    worst = std::max(worst, std::abs(f[i] - g(x)));
  }
  return worst;
}

double sech2(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

const auto kX = SuperpotentialFamily::from_expression("x");

}  // namespace

TEST_CASE("partner potentials") {
  const auto g = default_grid();
  const auto h = partner_potentials(kX, {}, g);
  CHECK(max_diff(h.v_minus, [](double x) { return x * x - 1.0; }) < 1e-12);
  CHECK(max_diff(h.v_plus, [](double x) { return x * x + 1.0; }) < 1e-12);

  const auto morse = SuperpotentialFamily::from_expression("A-exp(-x)");
  const auto m = partner_potentials(morse, {{"A", 2.0}}, make_grid(-3.0, 10.0, 1301));
  CHECK(max_diff(m.v_minus, [](double x) { return 4 - 5 * std::exp(-x) + std::exp(-2 * x); }) < 1e-10);
  CHECK(max_diff(m.v_plus, [](double x) { return 4 - 3 * std::exp(-x) + std::exp(-2 * x); }) < 1e-10);

  const auto pt = SuperpotentialFamily::from_expression("A*tanh(x)");
  const auto p = partner_potentials(pt, {{"A", 2.0}}, g);
  CHECK(max_diff(p.v_minus, [](double x) { return 4 - 6 * sech2(x); }) < 1e-12);
  CHECK(max_diff(p.v_plus, [](double x) { return 4 - 2 * sech2(x); }) < 1e-12);
}

TEST_CASE("zero modes and phases") {
  const auto g = default_grid();
  const auto minus = zero_mode(kX, {}, g, ZeroModeSign::Minus);
  CHECK(minus.decays());
  CHECK(count_nodes(minus.amplitude) == 0);
  const auto gauss = normalize(GridFunction::tabulate(g, [](double x) { return std::exp(-x * x / 2); }));
  CHECK(aligned_l2_distance(normalize(minus.amplitude), gauss) < 1e-6);
  CHECK_FALSE(zero_mode(kX, {}, g, ZeroModeSign::Plus).decays());
  const auto one = SuperpotentialFamily::from_expression("1");
  CHECK_FALSE(zero_mode(one, {}, g, ZeroModeSign::Minus).decays());

  CHECK(susy_phase(kX, {}, g) == SusyPhase::UnbrokenMinus);
  CHECK(susy_phase(SuperpotentialFamily::from_expression("-x"), {}, g) == SusyPhase::UnbrokenPlus);
  CHECK(susy_phase(one, {}, g) == SusyPhase::Broken);
}

TEST_CASE("huge exponents are stored log-scaled") {
  const auto g = default_grid();
  // -int w from x_min reaches 10^4/4 at the centre.
  const auto z = zero_mode(SuperpotentialFamily::from_expression("x^3"), {}, g, ZeroModeSign::Minus);
  CHECK(z.log_scaled);
  CHECK(std::isfinite(z.amplitude.max_abs()));
  CHECK(z.decays());
}

TEST_CASE("phase exclusivity on a family sweep") {
  const auto g = default_grid();
  for (const char* w : {"x", "-x", "1", "x^3", "x^2", "tanh(x)", "-2*tanh(x)", "x-3", "sin(x)"}) {
    CAPTURE(w);
    const auto r = analyze_phase(SuperpotentialFamily::from_expression(w), {}, g);
    CHECK_FALSE((r.minus_boundary_ratio < r.decay_threshold && r.plus_boundary_ratio < r.decay_threshold));
  }
}

TEST_CASE("A and A-dagger on oscillator states") {
  const auto g = default_grid();
  const auto g0 = GridFunction::tabulate(g, [](double x) { return std::exp(-x * x / 2); });
  const auto g1 = GridFunction::tabulate(g, [](double x) { return x * std::exp(-x * x / 2); });

  const auto lowered = apply_A(kX, {}, g1);
  CHECK(aligned_l2_distance(normalize(lowered), normalize(g0)) < 1e-6);
  CHECK(count_nodes(lowered) == 0);

  CHECK(norm(apply_A(kX, {}, g0)) / norm(g0) < 1e-6);

  const auto raised = apply_Adag(kX, {}, g0);
  CHECK(l2_distance(normalize(raised), normalize(g1)) < 1e-6);
  CHECK(count_nodes(raised) == 1);
}

TEST_CASE("A annihilates the analytic zero modes of catalog families") {
  struct Case {
    std::string name;
    std::function<double(double)> psi0;
  };
  const std::vector<Case> cases{
      {"shifted-harmonic", [](double x) { return std::exp(-x * x / 2); }},
      {"morse", [](double x) { return std::exp(-2 * x - std::exp(-x)); }},
      {"poschl-teller", [](double x) { return std::pow(std::cosh(x), -2.0); }},
      {"coulomb-radial", [](double r) { return r * std::exp(-r / 2); }},
  };
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto& rec = get_record(c.name);
    const auto psi = normalize(GridFunction::tabulate(rec.domain.grid(), c.psi0));
    const auto a = apply_A(*rec.family, rec.default_params, psi);
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += a[i] * a[i];
    CHECK(std::sqrt(ss * a.grid().h()) < 1e-6);
  }
}

TEST_CASE("charge algebra identities") {
  for (const char* w : {"x", "2-exp(-x)", "2*tanh(x)", "x^3-x", "sin(x)"}) {
    CAPTURE(w);
    const auto fam = SuperpotentialFamily::from_expression(w);
    const auto cm = charge_matrices(fam, {}, make_grid(-5.0, 5.0, 501));
    CHECK(cm.a.rows() == 500);
    CHECK(cm.a.cols() == 499);
    const auto r = verify_algebra(cm);
    CHECK(r.q_squared == 0.0);
    CHECK(r.q_dagger_squared == 0.0);
    CHECK(r.anticommutator <= 1e-12 * r.scale);
    CHECK(r.q_commutator < 1e-12 * r.scale);
    CHECK(r.q_dagger_commutator < 1e-12 * r.scale);
    CHECK(r.pass);
    const auto s = charge_sector_spectra(cm, 3);
    CHECK(s.minus.front() >= -1e-10);
    CHECK(s.plus.front() >= -1e-10);
  }
}

TEST_CASE("A^T A reproduces the oracle Hamiltonian of V-") {
  const auto g = make_grid(-6.0, 6.0, 601);
  const auto cm = charge_matrices(kX, {}, g);
  const auto sectors = charge_sector_spectra(cm, 3);
  // Staggered midpoint w: V- is sampled as w_mid^2 averages, O(h^2) from x^2 - 1.
  const auto oracle = solve_lowest(assemble_hamiltonian(partner_potentials(kX, {}, g).v_minus), 3);
  for (std::size_t n = 0; n < 3; ++n) CHECK(std::abs(sectors.minus[n] - oracle[n].energy) < 1e-3);
  // H+ lacks the zero mode: its levels are 2, 4, 6.
  CHECK(std::abs(sectors.plus[0] - 2.0) < 1e-3);
  CHECK(std::abs(sectors.plus[1] - 4.0) < 1e-3);

  // w = -x: the zero mode now belongs to H+ and is kept.
  const auto flipped = charge_sector_spectra(
      charge_matrices(SuperpotentialFamily::from_expression("-x"), {}, g), 2);
  CHECK(std::abs(flipped.plus[0]) < 1e-3);
  CHECK(std::abs(flipped.minus[0] - 2.0) < 1e-3);
}

TEST_CASE("charge matrices report singular points") {
  const auto coulomb = SuperpotentialFamily::from_expression("1/x");
  CHECK_THROWS_AS(charge_matrices(coulomb, {}, make_grid(-1.0, 1.0, 101)), Error);
}

TEST_CASE("superpotential from a ground state") {
  const auto g = default_grid();
  const auto gauss = GridFunction::tabulate(g, [](double x) { return std::exp(-x * x / 2); });
  const auto e = superpotential_from_ground_state(gauss);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < e.w.size(); ++i) {
    if (e.reliable[i]) worst = std::max(worst, std::abs(e.w[i] - e.w.x(i)));
  }
  CHECK(worst < 1e-6);

  const auto fine = make_grid(-10.0, 10.0, 4001);
  const auto sech = GridFunction::tabulate(fine, [](double x) { return 1.0 / std::cosh(x); });
  const auto t = superpotential_from_ground_state(sech);
  worst = 0.0;
  for (std::size_t i = 1; i + 1 < t.w.size(); ++i) {
    if (t.reliable[i]) worst = std::max(worst, std::abs(t.w[i] - std::tanh(t.w.x(i))));
  }
  CHECK(worst < 1e-5);

  const auto odd = GridFunction::tabulate(g, [](double x) { return x * std::exp(-x * x / 2); });
  try {
    superpotential_from_ground_state(odd);
    FAIL("accepted a state with a node");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NodePresent);
  }
}

TEST_CASE("masked tails are filled and flagged") {
  const auto g = make_grid(-40.0, 40.0, 801);
  const auto gauss = GridFunction::tabulate(g, [](double x) { return std::exp(-x * x / 2); });
  const auto e = superpotential_from_ground_state(gauss);
  CHECK_FALSE(e.reliable.front());
  CHECK_FALSE(e.reliable.back());
  CHECK(e.reliable[400]);
  for (double v : e.w.values()) CHECK(std::isfinite(v));
}

TEST_CASE("reconstruction round trip on catalog potentials") {
  for (const std::string name : {"shifted-harmonic", "morse", "poschl-teller"}) {
    CAPTURE(name);
    const auto& rec = get_record(name);
    const auto grid = rec.domain.grid();
    const auto v = partner_potentials(*rec.family, rec.default_params, grid).v_minus;
    const auto gs = ground_state(v);
    const auto est = superpotential_from_ground_state(gs.state);
    const auto rebuilt = partner_potentials(est.w, derivative(est.w));
    const int band = grid.boundary_band();
    double worst = 0.0;
    // Where psi0 is significant; far tails carry O(h^2 V^2) error in ln psi0.
    const double cut = kDecayThreshold * gs.state.max_abs();
    for (std::size_t i = static_cast<std::size_t>(band); i + static_cast<std::size_t>(band) < v.size(); ++i) {
      if (!est.reliable[i] || std::abs(gs.state[i]) < cut) continue;
      const double target = v[i] - gs.energy;
      worst = std::max(worst, std::abs(rebuilt.v_minus[i] - target) / (1.0 + std::abs(target)));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("isospectrality and intertwining on catalog records") {
  for (const auto& name : list_catalog()) {
    const auto& rec = get_record(name);
    if (!rec.family) continue;
    CAPTURE(name);
    // The r = 1e-3 wall cuts the 1/r term of w; A near the wall is O(1) off.
    const double tol = rec.domain.wall_at_min ? 0.1 : 1e-3;
    const auto grid = rec.domain.grid();
    const auto pair = partner_potentials(*rec.family, rec.default_params, grid);
    const auto minus = bound_states(pair.v_minus, 5);
    const auto plus = bound_states(pair.v_plus, 4);
    REQUIRE(minus.size() >= 2);
    for (std::size_t n = 0; n + 1 < minus.size() && n < plus.size(); ++n) {
      CAPTURE(n);
      const double e0 = minus.front().energy;
      CHECK(std::abs((minus[n + 1].energy - e0) - (plus[n].energy - e0)) < 5e-3);
      const auto raised = apply_Adag(*rec.family, rec.default_params, plus[n].state);
      CHECK(count_nodes(raised) == static_cast<int>(n) + 1);
      CHECK(aligned_l2_distance(normalize(raised), minus[n + 1].state) < tol);
      const auto lowered = apply_A(*rec.family, rec.default_params, minus[n + 1].state);
      CHECK(aligned_l2_distance(normalize(lowered), plus[n].state) < tol);
    }
  }
}

TEST_CASE("hierarchy on the oscillator") {
  const auto g = make_grid(-8.0, 8.0, 1601);
  const auto v = GridFunction::tabulate(g, [](double x) { return x * x - 1.0; });
  const auto h = build_hierarchy(v, 3);
  REQUIRE(h.levels.size() == 3);
  CHECK_FALSE(h.truncated);
  for (int k = 0; k < 3; ++k) {
    CAPTURE(k);
    const auto& level = h.levels[static_cast<std::size_t>(k)];
    CHECK(level.depth == k);
    CHECK(std::abs(level.ground_energy - 2.0 * k) < 5e-3);
    const double shift = 2.0 * k - 1.0;
    CHECK(max_diff(level.potential, [shift](double x) { return x * x + shift; }, -4.0, 4.0) < 1e-3);
  }
}

TEST_CASE("hierarchy on the Poschl-Teller well") {
  const auto g = make_grid(-16.0, 16.0, 3201);
  const auto v = GridFunction::tabulate(g, [](double x) { return 4.0 - 6.0 * sech2(x); });
  const auto h = build_hierarchy(v, 2);
  REQUIRE(h.levels.size() == 2);
  CHECK(max_diff(h.levels[1].potential, [](double x) { return 4.0 - 2.0 * sech2(x); }, -6.0, 6.0) < 1e-3);
  CHECK(std::abs(h.levels[1].ground_energy - 3.0) < 5e-3);
}

TEST_CASE("hierarchy stops when no bound state remains") {
  // Exactly one level, at E = -1; the partner 0 - 2 sech^2 removed is flat.
  const auto g = make_grid(-20.0, 20.0, 4001);
  const auto v = GridFunction::tabulate(g, [](double x) { return -2.0 * sech2(x); });
  REQUIRE(bound_states(v, 3).size() == 1);
  const auto h = build_hierarchy(v, 2);
  CHECK(h.levels.size() == 1);
  CHECK(h.truncated);
  CHECK(h.stop_reason.find("no bound state") != std::string::npos);
  CHECK(h.terminal_potential.has_value());
  CHECK_THROWS_AS(build_hierarchy(GridFunction(g), 2), Error);
}
