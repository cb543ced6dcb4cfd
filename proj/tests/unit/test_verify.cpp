#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "rdexact/catalog.hpp"
#include "rdexact/error.hpp"
#include "rdexact/registry.hpp"
#include "rdexact/verify.hpp"

using namespace rdexact;
using namespace rdexact::verify;

TEST_SUITE("verify") {

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid2D{}.validate());
  CHECK_THROWS_AS((Grid2D{0, 1, 7, 0, 1, 8}.validate()), UsageError);
  CHECK_THROWS_AS((Grid2D{1, 1, 8, 0, 1, 8}.validate()), UsageError);
  CHECK(Grid2D{0, 1, 11, 0, 2, 5}.hx() == doctest::Approx(0.1));
}

TEST_CASE("constant solution has zero residual") {
  const Sampler one = constant_sampler(1.0, Fisher{});
  const auto r = pde_residual(one, Fisher{}, Grid2D{-5, 5, 41, 0, 1, 21});
  CHECK(r.max_abs == 0.0);
  CHECK(r.l2 == 0.0);
  CHECK(r.defined_fraction == 1.0);
}

TEST_CASE("Fisher front converges at fourth order") {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  const auto r = pde_residual(u1, Fisher{}, Grid2D{-20, 20, 2001, 0, 5, 251});
  CHECK(r.max_abs <= 1e-7);
  REQUIRE(r.order_estimate.has_value());
  CHECK(*r.order_estimate >= 3.5);
  CHECK(r.levels.size() == 3);
  CHECK(r.worst.size() <= 10);
}

TEST_CASE("observed order follows the stencil order") {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  const Grid2D g{-20, 20, 401, 0, 5, 201};
  const auto r2 = pde_residual(u1, Fisher{}, g, 2);
  const auto r4 = pde_residual(u1, Fisher{}, g, 4);
  REQUIRE(r2.order_estimate.has_value());
  REQUIRE(r4.order_estimate.has_value());
  CHECK(*r2.order_estimate == doctest::Approx(2.0).epsilon(0.05));
  CHECK(*r4.order_estimate == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(pde_residual(u1, Fisher{}, g, 3), UsageError);
}

TEST_CASE("mismatched pairs do not converge") {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  const Grid2D g{-20, 20, 401, 0, 5, 201};
  const auto r = pde_residual(u1, PowerLaw{3.0}, g);
  CHECK(r.max_abs > 1e-2);
  for (const auto& l : r.levels) CHECK(l.max_abs > 1e-2);
  if (r.order_estimate) CHECK(*r.order_estimate < 0.5);

  const Sampler seed = catalog::elliptic_solution(chain::ChainKind::plain, 0);
  const auto wrong = pde_residual(seed, Fisher{}, registry::find_family("elliptic/u").verify_grid({{"index", 0}}));
  CHECK(wrong.max_abs > 1e-2);
}

TEST_CASE("perturbed solution leaves a residual floor") {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  const auto r = pde_residual(perturbed(u1, 1e-3), Fisher{}, Grid2D{-20, 20, 401, 0, 5, 201});
  CHECK(r.max_abs > 1e-4);
}

TEST_CASE("masked samples are excluded from the statistics") {
  const Sampler u1 = catalog::fisher_family(catalog::FisherVariant::u1, {}, false);
  Sampler holed = u1;
  holed.domain_note = "masked for |y| < 1";
  holed.eval = [u1](double y, double tau) -> std::optional<double> {
    if (std::abs(y) < 1.0) return std::nullopt;
    return u1(y, tau);
  };
  const Grid2D g{-20, 20, 401, 0, 5, 201};
  const auto r = pde_residual(holed, Fisher{}, g);
  const auto full = pde_residual(u1, Fisher{}, g);
  CHECK(r.defined_fraction < 0.95);
  CHECK(r.defined_fraction > 0.5);
  CHECK(r.max_abs <= full.max_abs);
  CHECK(r.mask_note == "masked for |y| < 1");
  for (const auto& w : r.worst) CHECK(std::abs(w.x) >= 1.0);
}

TEST_CASE("fully masked grid is impossible to verify") {
  Sampler none;
  none.family_id = "none";
  none.equation = Fisher{};
  none.eval = [](double, double) -> std::optional<double> { return std::nullopt; };
  CHECK_THROWS_AS(pde_residual(none, Fisher{}, Grid2D{}), VerificationImpossible);
}

TEST_CASE("potential residual") {
  const double n = 2.0, c1 = -1.0, l2 = 0.0;
  const double k = derived_constants(n).k;
  PotentialParams p;
  p.k = k;
  p.lambda2 = l2;
  const auto pw = build_plane_wave_equation(n, c1, l2);
  p.lambda1 = pw.spec.lambda1;
  p.lambda3 = pw.spec.lambda3;
  p.lambda4 = pw.spec.lambda4;
  const auto z = catalog::plane_wave_potential(n, c1, 1.0, l2);
  // The residual is quartic in z, so its size follows z^4; the order is the check.
  const auto r = potential_residual(z, p, Grid2D{-3, 3, 241, 0, 0.5, 121});
  REQUIRE(r.order_estimate.has_value());
  CHECK(*r.order_estimate >= 3.5);
  p.lambda1 += 1.0;
  const auto bad = potential_residual(z, p, Grid2D{-3, 3, 241, 0, 0.5, 121});
  CHECK(bad.max_abs > 1.0);
  REQUIRE(bad.order_estimate.has_value());
  CHECK(*bad.order_estimate < 0.5);
}

TEST_CASE("Fisher reduced system vanishes") {
  for (double y : {-3.0, 0.0, 2.0}) {
    for (double tau : {0.0, 0.7}) {
      const auto s = fisher_reduced_system(y, tau, 0.3);
      CHECK(std::abs(s.heat) < 1e-12);
      CHECK(std::abs(s.quadratic) < 1e-12);
    }
  }
}

TEST_CASE("chain ODE constants") {
  const auto p0 = chain::phi_chain(0);
  const auto r0 = ode_residual(p0, chain_samples(p0, 200));
  CHECK(r0.C_estimate == doctest::Approx(-0.25).epsilon(1e-9));
  const auto p3 = chain::phi_chain(3);
  const auto r3 = ode_residual(p3, chain_samples(p3, 200));
  CHECK(std::abs(r3.C_estimate - 16.0) <= 1e-7);
  CHECK(r3.first_integral_std < 1e-7);
  CHECK(r3.second_order_max < 1e-7);
  const auto h2 = chain::PhiState(chain::ChainKind::hat, 2);
  const auto rh = ode_residual(h2, chain_samples(h2, 200));
  CHECK(rh.first_integral_max_dev < 1e-7);
}

TEST_CASE("ODE residual needs defined samples") {
  const auto p1 = chain::phi_chain(1);
  CHECK_THROWS_AS(ode_residual(p1, {0.0}), VerificationImpossible);
}

TEST_CASE("proposition suite") {
  const auto t = proposition_suite(6, 200, 1e-7);
  CHECK(t.rows.size() == 7);
  CHECK(t.all_pass());
  for (const auto& row : t.rows) {
    CHECK(row.p2_second_order.has_value() == (row.index % 2 == 1));
    CHECK(row.p3_second_order.has_value() == (row.index % 2 == 0));
    if (row.p3_squared_constant_dev && row.index > 0) CHECK(*row.p3_squared_constant_dev > 1.0);
  }
  nlohmann::json j = t;
  CHECK(j.contains("rows"));
}

TEST_CASE("report serialization") {
  const Sampler one = constant_sampler(1.0, Fisher{});
  nlohmann::json j = pde_residual(one, Fisher{}, Grid2D{});
  CHECK(j.at("max_abs") == 0.0);
  CHECK(j.contains("levels"));
}

}
