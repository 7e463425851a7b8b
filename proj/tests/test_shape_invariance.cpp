#include <cmath>

#include "doctest.h"
#include "susyqm/catalog.hpp"
#include "susyqm/errors.hpp"
#include "susyqm/oracle.hpp"
#include "susyqm/shape_invariance.hpp"
#include "susyqm/susy.hpp"

using namespace susyqm;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

const auto kMorse = SuperpotentialFamily::from_expression("A-exp(-x)");
const auto kPT = SuperpotentialFamily::from_expression("A*tanh(x)");

}  // namespace

TEST_CASE("transforms act on one named parameter") {
  const ParamMap a{{"A", 2.0}, {"B", 7.0}};
  CHECK(ParameterTransform(Translation{-1.0, "A"}).apply(a) == ParamMap{{"A", 1.0}, {"B", 7.0}});
  CHECK(ParameterTransform(Scaling{0.5, "A"}).apply(a).at("A") == 1.0);
  CHECK(ParameterTransform(PowerScaling{0.5, 2, "A"}).apply(a).at("A") == 2.0);
  CHECK(ParameterTransform(Projective{1.0, 0.5, "A"}).apply(a).at("A") == 1.0);
  CHECK(ParameterTransform(Translation{3.0, ""}).apply(a) == a);
  CHECK(kind_of([&] { ParameterTransform(Translation{1.0, "C"}).apply(a); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("transform constraints") {
  for (const auto& t : {ParameterTransform(Scaling{1.0, "a"}), ParameterTransform(Scaling{0.0, "a"}),
                        ParameterTransform(PowerScaling{1.5, 2, "a"}),
                        ParameterTransform(Projective{0.0, 0.5, "a"}),
                        ParameterTransform(Projective{1.0, 1.0, "a"}),
                        ParameterTransform(Translation{NAN, "a"}), ParameterTransform(Cyclic{{}})}) {
    CAPTURE(t.describe());
    CHECK(kind_of([&] { t.validate(); }) == ErrorKind::InvalidArgument);
  }
  CHECK(kind_of([] { ParameterTransform(Projective{1.0, -1.0, "a"}).apply({{"a", 1.0}}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("describe and kind") {
  CHECK(ParameterTransform(Translation{-1.0, "A"}).describe() == "Translation(-1, A)");
  CHECK(ParameterTransform(Scaling{0.5, "a"}).describe() == "Scaling(0.5, a)");
  CHECK(ParameterTransform(PowerScaling{0.5, 3, "a"}).kind() == TransformKind::PowerScaling);
  CHECK(std::string(to_string(TransformKind::Projective)) == "projective");
}

TEST_CASE("parameter orbits") {
  const auto orbit = iterate_params(Translation{-1.0, "A"}, {{"A", 3.0}}, 3);
  REQUIRE(orbit.sequence.size() == 4);
  CHECK(orbit.sequence[3].at("A") == 0.0);

  const auto geo = iterate_params(Scaling{0.5, "a"}, {{"a", 1.0}}, 4);
  CHECK(geo.sequence[4].at("a") == 0.0625);

  const ParameterTransform cyc = Cyclic{{{{"s", 0.0}}, {{"s", 1.0}}, {{"s", 2.0}}}};
  const auto c = iterate_params(cyc, {{"s", 0.0}}, 4);
  CHECK(c.sequence[3] == c.sequence[0]);
  CHECK(c.sequence[4].at("s") == 1.0);
  CHECK(kind_of([&] { iterate_params(cyc, {{"s", 1.0}}, 2); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { iterate_params(Translation{1.0, "A"}, {{"A", 0.0}}, -1); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("residual for shape-invariant partners") {
  const auto morse = si_residual(kMorse, {{"A", 2.0}}, Translation{-1.0, "A"},
                                 make_grid(-4.0, 18.0, 4401));
  CHECK(morse.pass);
  CHECK(morse.analytic_derivative);
  CHECK(morse.residual_mean == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(morse.a1.at("A") == 1.0);

  const auto pt = si_residual(kPT, {{"A", 3.0}}, Translation{-1.0, "A"}, default_grid());
  CHECK(pt.pass);
  CHECK(pt.residual_mean == doctest::Approx(5.0).epsilon(1e-10));

  const auto osc = si_residual(SuperpotentialFamily::from_expression("x"), {},
                               Translation{0.0, ""}, default_grid());
  CHECK(osc.pass);
  CHECK(osc.residual_mean == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("residual rejects the wrong step") {
  const auto r = si_residual(kMorse, {{"A", 2.0}}, Translation{-0.5, "A"},
                             make_grid(-4.0, 18.0, 4401));
  CHECK_FALSE(r.pass);
  const auto cubic = si_residual(SuperpotentialFamily::from_expression("x^3"), {},
                                 Translation{0.0, ""}, default_grid());
  CHECK_FALSE(cubic.pass);
}

TEST_CASE("every orbit step leaves the remainder at the lower parameter") {
  // V+(x, a_k) - V-(x, a_{k+1}) = R(a_{k+1}) for k = 0, 1, 2.
  const std::pair<const char*, ParamMap> starts[] = {{"shifted-harmonic", {}},
                                                     {"morse", {{"A", 4.0}}},
                                                     {"poschl-teller", {{"A", 4.0}}},
                                                     {"coulomb-radial", {}}};
  for (const auto& [name, overrides] : starts) {
    CAPTURE(name);
    const auto& rec = get_record(name);
    const auto orbit = iterate_params(rec.transform, rec.resolve(overrides), 3);
    for (int k = 0; k < 3; ++k) {
      const auto r = si_residual(*rec.family, orbit.sequence[static_cast<std::size_t>(k)],
                                 rec.transform, rec.domain.grid());
      CHECK(r.pass);
      CHECK(r.residual_mean == doctest::Approx(rec.r(r.a1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("the hierarchy of V-(a0) is V-(a_k) raised by E_k") {
  const auto g = make_grid(-16.0, 16.0, 3201);
  const auto h = build_hierarchy(partner_potentials(kPT, {{"A", 3.0}}, g).v_minus, 3);
  REQUIRE(h.levels.size() == 3);
  const double e[] = {0.0, 5.0, 8.0};
  for (int k = 0; k < 3; ++k) {
    CAPTURE(k);
    const auto target = partner_potentials(kPT, {{"A", 3.0 - k}}, g).v_minus;
    double worst = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (std::abs(target.x(i)) > 5.0) continue;
      worst = std::max(worst, std::abs(h.levels[static_cast<std::size_t>(k)].potential[i] -
                                       (target[i] + e[k])));
    }
    CHECK(worst < 2e-3);
    CHECK(h.levels[static_cast<std::size_t>(k)].ground_energy == doctest::Approx(e[k]).epsilon(1e-3));
  }
}

TEST_CASE("algebraic spectra") {
  const auto osc = algebraic_spectrum([](const ParamMap& a) { return 2.0 * a.at("omega"); },
                                      Translation{0.0, "omega"}, {{"omega", 1.5}}, 4);
  for (const auto& e : osc.entries) CHECK(e.energy == doctest::Approx(3.0 * e.n));
  CHECK_FALSE(osc.first_invalid);

  const auto morse = algebraic_spectrum([](const ParamMap& a) { return 2.0 * a.at("A") + 1.0; },
                                        Translation{-1.0, "A"}, {{"A", 2.0}}, 3,
                                        [](const ParamMap& a) { return a.at("A") > 0.0; });
  CHECK(morse.entries[1].energy == 3.0);
  CHECK(morse.entries[2].energy == 4.0);
  CHECK(morse.entries[1].valid);
  CHECK_FALSE(morse.entries[2].valid);
  CHECK_FALSE(morse.entries[3].valid);
  REQUIRE(morse.first_invalid);
  CHECK(*morse.first_invalid == 2);

  const auto cyc = algebraic_spectrum([](const ParamMap& a) { return 2.0 - a.at("s"); },
                                      Cyclic{{{{"s", 0.0}}, {{"s", 1.0}}}}, {{"s", 0.0}}, 4);
  CHECK(cyc.entries[1].energy == 1.0);
  CHECK(cyc.entries[2].energy == 3.0);
  CHECK(cyc.entries[4].energy == 6.0);

  CHECK(kind_of([] {
          algebraic_spectrum([](const ParamMap&) { return 1.0; }, Translation{0.0, ""}, {}, -1);
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("wavefunction chain against the oracle") {
  struct Case {
    std::string name;
    ParamMap a0;
    int levels;
  };
  for (const auto& c : {Case{"shifted-harmonic", {{"omega", 1.0}}, 4}, Case{"morse", {{"A", 3.0}}, 3},
                        Case{"poschl-teller", {{"A", 3.0}}, 3}}) {
    CAPTURE(c.name);
    const auto& rec = get_record(c.name);
    const auto grid = rec.domain.grid();
    const auto oracle =
        bound_states(partner_potentials(*rec.family, c.a0, grid).v_minus, c.levels);
    REQUIRE(static_cast<int>(oracle.size()) == c.levels);
    for (int n = 0; n < c.levels; ++n) {
      CAPTURE(n);
      const auto psi = wavefunction_chain(*rec.family, c.a0, rec.transform, n, grid);
      CHECK(count_nodes(psi) == n);
      CHECK(l2_distance(psi, oracle[static_cast<std::size_t>(n)].state) < 1e-3);
    }
  }
}

TEST_CASE("first excited Morse state at A = 2") {
  const auto& rec = get_record("morse");
  const auto grid = rec.domain.grid();
  const auto oracle = bound_states(partner_potentials(kMorse, {{"A", 2.0}}, grid).v_minus, 2);
  REQUIRE(oracle.size() == 2);
  CHECK(oracle[1].energy == doctest::Approx(3.0).epsilon(5e-3));
  const auto psi = wavefunction_chain(kMorse, {{"A", 2.0}}, rec.transform, 1, grid);
  CHECK(l2_distance(psi, oracle[1].state) < 1e-3);
}

TEST_CASE("wavefunction chain failures") {
  const auto g = make_grid(-16.0, 16.0, 3201);
  CHECK(kind_of([&] { wavefunction_chain(kMorse, {{"A", 2.0}}, Translation{-0.5, "A"}, 1, g); }) ==
        ErrorKind::ConstructionFailure);
  // a_2 = 0 has no normalizable ground state.
  CHECK(kind_of([&] { wavefunction_chain(kPT, {{"A", 2.0}}, Translation{-1.0, "A"}, 2, g); }) ==
        ErrorKind::ConstructionFailure);
}

TEST_CASE("default candidates") {
  const auto none = default_candidates(SuperpotentialFamily::from_expression("x"));
  REQUIRE(none.size() == 1);
  CHECK(none[0].kind == TransformKind::Translation);
  const auto two = default_candidates(SuperpotentialFamily::from_expression("A*x+B"));
  REQUIRE(two.size() == 8);
  CHECK(two[0].kind == TransformKind::Translation);
  CHECK(two[0].parameter == "A");
  CHECK(two[1].parameter == "B");
  CHECK(two[2].kind == TransformKind::Scaling);
  CHECK(two[7].kind == TransformKind::Projective);
}

TEST_CASE("search finds catalog transforms") {
  const auto morse = search_transform(kMorse, {{"A", 2.0}}, make_grid(-4.0, 18.0, 2201),
                                      default_candidates(kMorse));
  REQUIRE(morse);
  CHECK(morse->transform.kind() == TransformKind::Translation);
  CHECK(std::get<Translation>(morse->transform.variant()).alpha == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(morse->report.residual_mean == doctest::Approx(3.0).epsilon(1e-6));

  const auto pt = search_transform(kPT, {{"A", 3.0}}, make_grid(-16.0, 16.0, 1601),
                                   default_candidates(kPT));
  REQUIRE(pt);
  CHECK(std::get<Translation>(pt->transform.variant()).alpha == doctest::Approx(-1.0).epsilon(1e-6));

  const auto osc = SuperpotentialFamily::from_expression("x");
  const auto o = search_transform(osc, {}, default_grid(), default_candidates(osc));
  REQUIRE(o);
  CHECK(o->report.residual_mean == doctest::Approx(2.0));

  const auto cubic = SuperpotentialFamily::from_expression("x^3");
  CHECK_FALSE(search_transform(cubic, {}, default_grid(), default_candidates(cubic)));
}

TEST_CASE("raising the budget never loses a transform") {
  const char* families[] = {"A-exp(-x)", "A*tanh(x)", "A*x", "x^3+A*x", "A*x^2"};
  const auto g = make_grid(-6.0, 12.0, 901);
  for (const char* w : families) {
    CAPTURE(w);
    const auto fam = SuperpotentialFamily::from_expression(w);
    bool found_before = false;
    for (int level = 0; level <= 3; ++level) {
      SearchBudget budget;
      budget.refinement_level = level;
      const bool found = search_transform(fam, {{"A", 2.0}}, g, default_candidates(fam), budget)
                             .has_value();
      CHECK((!found_before || found));
      found_before = found_before || found;
    }
  }
}
