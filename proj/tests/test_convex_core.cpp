#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "junction_hj/errors.hpp"
#include "junction_hj/junction.hpp"
#include "junction_hj/lagrangian.hpp"
#include "junction_hj/point.hpp"

namespace {

using namespace junction_hj;
using fixtures::grid_max;

const Lagrangian kRef = Lagrangian::quadratic(0.25, -1.0, 0.0);

// sup over q <= 0 of pq - L(q), sampled with step 1e-4 on [-10, 0].
double h_minus_grid(double p) {
  return grid_max([&](double q) { return p * q - kRef(q); }, -10.0, 0.0, 100000);
}

TEST(Point, JunctionCanonicalization) {
  EXPECT_TRUE(Point::on(2, 0.0).is_junction());
  EXPECT_EQ(Point::on(1, 0.0), Point::on(2, 0.0));
  EXPECT_EQ(Point::on(1, 0.0), Point::junction());
  EXPECT_NE(Point::on(1, 0.5), Point::on(2, 0.5));
  EXPECT_THROW(Point::on(1, -0.1), DomainError);
  EXPECT_THROW(Point::on(kJunction, 0.3), DomainError);
}

TEST(Point, ParseAndDistance) {
  EXPECT_EQ(parse_point("2:0.75"), Point::on(2, 0.75));
  EXPECT_TRUE(parse_point("3:0").is_junction());
  EXPECT_THROW(parse_point("2-0.5"), DomainError);
  EXPECT_THROW(parse_point("x:1"), DomainError);
  EXPECT_THROW(parse_point("1:1abc"), DomainError);
  EXPECT_DOUBLE_EQ(distance(Point::on(1, 0.5), Point::on(2, 0.25)), 0.75);
  EXPECT_DOUBLE_EQ(distance(Point::on(1, 0.5), Point::on(1, 2.0)), 1.5);
  EXPECT_DOUBLE_EQ(distance(Point::junction(), Point::on(2, 0.3)), 0.3);
}

TEST(Conjugate, ReferenceLagrangianExamples) {
  auto c = conjugate(kRef, 0.0);
  EXPECT_NEAR(c.q_star, -1.0, 1e-14);
  EXPECT_NEAR(c.value, 0.0, 1e-14);
  c = conjugate(kRef, 1.0);
  EXPECT_NEAR(c.q_star, 1.0, 1e-14);
  EXPECT_NEAR(c.value, 0.0, 1e-14);
  c = conjugate(kRef, 0.5);
  EXPECT_NEAR(c.q_star, 0.0, 1e-14);
  EXPECT_NEAR(c.value, -0.25, 1e-14);
}

TEST(Conjugate, MatchesTrafficClosedForm) {
  // H(p) = p^2 - p for the incoming LWR road with gamma = 1.
  for (double p = -3.0; p <= 3.0; p += 0.125) {
    EXPECT_NEAR(hamiltonian(kRef, p), p * p - p, 1e-12) << "p=" << p;
  }
}

TEST(Conjugate, GenericLagrangianAgreesWithQuadratic) {
  const Lagrangian generic = Lagrangian::from_functions(
      [](double q) { return (1.0 + q) * (1.0 + q) / 4.0; },
      [](double q) { return (1.0 + q) / 2.0; }, 0.5);
  for (double p = -2.0; p <= 2.0; p += 0.25) {
    const auto a = conjugate(generic, p);
    const auto b = conjugate(kRef, p);
    EXPECT_NEAR(a.q_star, b.q_star, 1e-10);
    EXPECT_NEAR(a.value, b.value, 1e-10);
  }
}

TEST(Conjugate, NonQuadraticLagrangian) {
  // L(q) = cosh(q) + q^2/2 has L'' >= 2; H is checked against a grid sup.
  const Lagrangian L = Lagrangian::from_functions(
      [](double q) { return std::cosh(q) + 0.5 * q * q; },
      [](double q) { return std::sinh(q) + q; }, 2.0,
      [](double q) { return std::cosh(q) + 1.0; });
  for (double p : {-3.0, -0.5, 0.0, 1.0, 4.0}) {
    const double ref =
        grid_max([&](double q) { return p * q - L(q); }, -4.0, 4.0, 800000);
    EXPECT_NEAR(hamiltonian(L, p), ref, 1e-9) << "p=" << p;
  }
}

TEST(HMinus, GridOracleExamples) {
  EXPECT_NEAR(h_minus(kRef, 0.0), h_minus_grid(0.0), 1e-9);
  EXPECT_NEAR(h_minus(kRef, 1.0), h_minus_grid(1.0), 1e-9);
  EXPECT_NEAR(h_minus(kRef, -1.0), h_minus_grid(-1.0), 1e-9);
  EXPECT_NEAR(h_minus(kRef, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(h_minus(kRef, 1.0), -0.25, 1e-12);
  EXPECT_NEAR(h_minus(kRef, -1.0), 2.0, 1e-12);
}

TEST(HMinus, EnvelopeProperties) {
  double prev = h_minus(kRef, -4.0);
  for (double p = -4.0; p <= 4.0; p += 0.01) {
    const double hm = h_minus(kRef, p);
    EXPECT_LE(hm, prev + 1e-15);
    EXPECT_LE(hm, hamiltonian(kRef, p) + 1e-15);
    if (p <= kRef.slope(0.0)) {
      EXPECT_EQ(hm, hamiltonian(kRef, p));
    } else {
      EXPECT_EQ(hm, -kRef(0.0));
    }
    prev = hm;
  }
}

TEST(LagrangianValidation, RejectsBadInput) {
  EXPECT_THROW(Lagrangian::quadratic(0.0, 0.0, 0.0), ValidationError);
  EXPECT_THROW(Lagrangian::quadratic(-1.0, 0.0, 0.0), ValidationError);
  EXPECT_THROW(Lagrangian::quadratic(0.25, 0.0, 0.0, 0.6), ValidationError);
  EXPECT_THROW(Lagrangian::quadratic(NAN, 0.0, 0.0), ValidationError);
  EXPECT_THROW(Lagrangian::from_functions({}, {}, 1.0), ValidationError);
  // Concave in the middle: fails the probe even though gamma is declared.
  const Lagrangian bad = Lagrangian::from_functions(
      [](double q) { return q * q * q * q / 4.0 - q * q; },
      [](double q) { return q * q * q - 2.0 * q; }, 0.1);
  EXPECT_THROW(check_convexity(bad), ValidationError);
  EXPECT_THROW(Junction({bad}), ValidationError);
  EXPECT_THROW(Junction(std::vector<Lagrangian>{}), ValidationError);
}

TEST(Junction, SymmetricConstants) {
  const Junction J = fixtures::t2_sym();
  EXPECT_EQ(J.size(), 2);
  EXPECT_EQ(J.i0(), (std::vector<int>{1, 2}));
  EXPECT_DOUBLE_EQ(J.idle_cost(), 0.25);
  for (int l = 1; l <= 2; ++l) {
    EXPECT_EQ(J.xi_minus(l), 0.0);
    EXPECT_EQ(J.xi_plus(l), 0.0);
  }
  EXPECT_DOUBLE_EQ(J.gamma(), 0.5);
  EXPECT_DOUBLE_EQ(J.gamma0(), 0.5);
  EXPECT_DOUBLE_EQ(J.c0(), 0.25);  // max(0, -0.25 + 0.25 / 0.5)
}

TEST(Junction, AsymmetricConstants) {
  const Junction J = fixtures::t2_asym();
  EXPECT_EQ(J.i0(), std::vector<int>{1});
  EXPECT_DOUBLE_EQ(J.idle_cost(), 0.25);
  EXPECT_NEAR(J.xi_plus(2), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(J.xi_minus(2), -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(J.k(2, J.xi_plus(2)), 0.0, 1e-12);
  EXPECT_NEAR(J.k(2, J.xi_minus(2)), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(J.gamma(), 0.5);
  EXPECT_DOUBLE_EQ(J.gamma0(), 1.0);
  EXPECT_DOUBLE_EQ(J.c0(), 1.75);  // -0.25 + 1 / 0.5
  EXPECT_DOUBLE_EQ(J.max_idle_cost(), 0.5);
}

TEST(Junction, SingleBranch) {
  const Junction J({Lagrangian::quadratic(0.5, 0.0, 0.0)});
  EXPECT_EQ(J.i0(), std::vector<int>{1});
  EXPECT_EQ(J.idle_cost(), 0.0);
  EXPECT_EQ(J.c0(), 0.0);
}

TEST(Junction, IdleToleranceIsExplicit) {
  const Junction near({Lagrangian::quadratic(0.5, 0.0, 0.0),
                       Lagrangian::quadratic(0.5, 0.0, 5e-13)});
  EXPECT_EQ(near.i0(), (std::vector<int>{1, 2}));
  const Junction apart({Lagrangian::quadratic(0.5, 0.0, 0.0),
                        Lagrangian::quadratic(0.5, 0.0, 1e-9)});
  EXPECT_EQ(apart.i0(), std::vector<int>{1});
  EXPECT_GT(apart.xi_plus(2), 0.0);
  EXPECT_LT(apart.xi_minus(2), 0.0);
}

TEST(KFunction, Examples) {
  const Junction S = fixtures::t2_sym();
  const Junction A = fixtures::t2_asym();
  // Direct expansion of L(xi) - xi L'(xi) - L0 from the fixture formulas.
  auto k_sym1 = [](double xi) {
    return fixtures::lref(xi) - xi * (1.0 + xi) / 2.0 - 0.25;
  };
  auto k_asym2 = [](double xi) {
    return fixtures::l2_asym(xi) - xi * (xi - 1.0) - 0.25;
  };
  EXPECT_NEAR(S.k(1, 2.0), k_sym1(2.0), 1e-14);
  EXPECT_NEAR(S.k(1, 2.0), -1.0, 1e-14);
  EXPECT_EQ(S.k(1, 0.0), 0.0);
  EXPECT_NEAR(A.k(2, 1.0), k_asym2(1.0), 1e-14);
  EXPECT_NEAR(A.k(2, 1.0), -0.25, 1e-14);
  EXPECT_DOUBLE_EQ(A.k_at_zero(2), 0.25);
  EXPECT_EQ(A.k_at_zero(1), 0.0);
}

TEST(KFunction, InverseExamplesAndErrors) {
  const Junction S = fixtures::t2_sym();
  const Junction A = fixtures::t2_asym();
  EXPECT_NEAR(A.k_inverse(2, 0.0, Side::Plus), 0.7071068, 1e-7);
  EXPECT_NEAR(A.k_inverse(2, 0.0, Side::Minus), -0.7071068, 1e-7);
  EXPECT_EQ(S.k_inverse(1, 0.0, Side::Plus), 0.0);
  EXPECT_THROW(A.k_inverse(2, 0.3, Side::Plus), DomainError);
  EXPECT_THROW(S.k_inverse(1, 1e-3, Side::Minus), DomainError);
  EXPECT_THROW(A.k(3, 0.0), DomainError);
  EXPECT_THROW(A.branch(0), DomainError);
}

TEST(KFunction, IdentityAndRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xi_dist(-5.0, 5.0);
  for (const Junction& J : {fixtures::t2_sym(), fixtures::t2_asym()}) {
    for (int l = 1; l <= J.size(); ++l) {
      for (int s = 0; s < 100; ++s) {
        const double xi = xi_dist(rng);
        const auto& L = J.branch(l);
        EXPECT_NEAR(J.k(l, xi) + hamiltonian(L, L.slope(xi)) + J.idle_cost(),
                    0.0, 1e-10);
        const Side side = xi < 0.0 ? Side::Minus : Side::Plus;
        EXPECT_NEAR(J.k_inverse(l, J.k(l, xi), side), xi, 1e-10);
      }
    }
  }
}

TEST(KFunction, GenericBranchUsesRootFinding) {
  // Same T2-asym branch 2, but through callables.
  const Junction J({Lagrangian::quadratic(0.25, -1.0, 0.0),
                    Lagrangian::from_functions(
                        [](double q) { return (1.0 - q) * (1.0 - q) / 2.0; },
                        [](double q) { return q - 1.0; }, 1.0)});
  EXPECT_NEAR(J.xi_plus(2), 1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(J.xi_minus(2), -1.0 / std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(J.k_inverse(2, -1.0, Side::Plus), std::sqrt(2.5), 1e-10);
}

TEST(HamiltonianAt, Examples) {
  const Junction J = fixtures::t2_sym();
  const double zero[] = {0.0};
  EXPECT_NEAR(hamiltonian_at(J, Point::on(1, 0.5), zero), 0.0, 1e-14);
  const double p00[] = {0.0, 0.0};
  EXPECT_NEAR(hamiltonian_at(J, Point::junction(), p00), 0.0, 1e-14);
  // Both envelopes clamp to q = 0 at p = 1 (p exceeds L_l'(0) on each
  // branch), so the junction Hamiltonian is -L(0). The value 2 is reached
  // at p = (-1, -1) instead.
  const double p11[] = {1.0, 1.0};
  const double h2 = grid_max(
      [](double q) { return q - (1.0 - q) * (1.0 - q) / 4.0; }, -10.0, 0.0, 100000);
  EXPECT_NEAR(hamiltonian_at(J, Point::junction(), p11),
              std::max(h_minus_grid(1.0), h2), 1e-8);
  EXPECT_NEAR(hamiltonian_at(J, Point::junction(), p11), -0.25, 1e-12);
  const double pm[] = {-1.0, -1.0};
  EXPECT_NEAR(hamiltonian_at(J, Point::junction(), pm), h_minus_grid(-1.0), 1e-8);
  EXPECT_NEAR(hamiltonian_at(J, Point::junction(), pm), 2.0, 1e-12);
  EXPECT_THROW(hamiltonian_at(J, Point::junction(), zero), DomainError);
  EXPECT_THROW(hamiltonian_at(J, Point::on(1, 1.0), p00), DomainError);
}

}  // namespace
