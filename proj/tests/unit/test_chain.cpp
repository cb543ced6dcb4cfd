#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles/oracles.hpp"
#include "rdexact/chain.hpp"
#include "rdexact/elliptic.hpp"
#include "rdexact/error.hpp"
#include "rdexact/verify.hpp"

using namespace rdexact;
using namespace rdexact::chain;

TEST_SUITE("chain") {

TEST_CASE("chain constants") {
  CHECK(chain_constant(0) == -0.25);
  for (int n = 0; n < 8; ++n) CHECK(chain_constant(n + 1) == -4.0 * chain_constant(n));
  CHECK(chain_constant(3) == 16.0);
}

TEST_CASE("seed element and its derivative") {
  const auto v = phi_chain(0)(1.0);
  REQUIRE(v.has_value());
  CHECK(v->phi == doctest::Approx(1.0251047707625972308).epsilon(1e-14));
  CHECK(v->dphi == doctest::Approx(-0.92426417567354031953).epsilon(1e-12));
  const elliptic::Modulus m(kModulus);
  const double fd = oracle::derivative(
      [&](double y) { return *elliptic::jacobi_quotient(elliptic::Quotient::ds, y, m); }, 1.0);
  CHECK(v->dphi == doctest::Approx(fd).epsilon(1e-9));
}

TEST_CASE("first element is minus cs/dn") {
  const elliptic::Modulus m(kModulus);
  for (double y : {0.4, 1.0, 1.2, 2.5, 5.0}) {
    const auto v = phi_chain(1)(y);
    REQUIRE(v.has_value());
    const auto j = elliptic::jacobi(y, m);
    CHECK(v->phi == doctest::Approx(-j.cn / (j.sn * j.dn)).epsilon(1e-13));
  }
  CHECK(phi_chain(1).chain_C() == 1.0);
}

TEST_CASE("first integrals hold along the chain") {
  for (int n = 0; n <= 6; ++n) {
    const PhiState p = phi_chain(n);
    const auto ys = verify::chain_samples(p, 200);
    REQUIRE(ys.size() == 200);
    for (double y : ys) {
      const auto v = p(y);
      REQUIRE(v.has_value());
      const double I = v->dphi * v->dphi - std::pow(v->phi, 4);
      CHECK(std::abs(I - p.chain_C()) <= 1e-8 * std::max({1.0, v->dphi * v->dphi, std::pow(v->phi, 4)}));
    }
  }
}

TEST_CASE("reciprocal transforms") {
  const PhiState t(ChainKind::tilde, 1);
  CHECK(t.c_sign() == 2);
  CHECK(t.first_integral() == 1.0);
  const PhiState h(ChainKind::hat, 0);
  CHECK(h.c_sign() == -2);
  CHECK(h.first_integral() == 0.25);
  const auto v = h(0.8);
  REQUIRE(v.has_value());
  CHECK(v->dphi * v->dphi + std::pow(v->phi, 4) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(PhiState(ChainKind::tilde, 2), UsageError);
  CHECK_THROWS_AS(PhiState(ChainKind::hat, 1), UsageError);
  CHECK_THROWS_AS(PhiState(ChainKind::plain, -1), UsageError);
}

TEST_CASE("poles") {
  CHECK_FALSE(phi_chain(0)(0.0).has_value());
  const double K = elliptic::complete_elliptic_k(elliptic::Modulus(kModulus));
  const auto inv0 = pole_inventory(0);
  CHECK(inv0.period == doctest::Approx(4.0 * K));
  REQUIRE(inv0.poles.size() == 2);
  CHECK(inv0.poles[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(inv0.poles[1] == doctest::Approx(2.0 * K).epsilon(1e-10));
  const auto inv4 = pole_inventory(4);
  CHECK(inv4.poles.size() >= inv0.poles.size());
  for (double y : inv4.poles) {
    const auto near = phi_chain(4)(y + 1e-6);
    CHECK((!near || std::abs(near->phi) > 1e3));
  }
}

}
