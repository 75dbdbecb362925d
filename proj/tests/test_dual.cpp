#include <doctest.h>

#include <cmath>

#include "cmg/dual.hpp"
#include "cmg/pose.hpp"
#include "test_helpers.hpp"

using namespace cmg;

TEST_CASE("dual arithmetic obeys the chain rule against finite differences") {
  test::Rng rng(5);
  auto composite = [](auto x) {
    using std::exp;
    using std::log1p;
    using std::sqrt;
    using std::tanh;
    const auto a = tanh(x * x - 0.5);
    const auto b = log1p(exp(-x)) + sqrt(x * x + 1.0);
    return a / b + exp(x * 0.3) - x * 2.0 + 1.0 / (x + 4.0);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const double x = test::uniform(rng, -2.0, 2.0);
    const double fwd = test::forward_derivative(composite, x);
    const double fd = test::fd_central(composite, x);
    CHECK(test::rel_close(fwd, fd, 1e-4));
  }
}

TEST_CASE("dual primal bit-matches the plain double computation") {
  test::Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = test::uniform(rng, -2.0, 2.0);
    auto f = [](auto v) {
      using std::exp;
      using std::tanh;
      return tanh(v / 0.37) * exp(-v * v) + v * 3.25 - v / 7.1;
    };
    const double direct = f(x);
    const Dual<3> dual_out = f(Dual<3>::seeded(x, 1));
    CHECK(primal(dual_out) == direct);  // identical operation sequence
  }
}

TEST_CASE("nested duals give second-direction derivatives (spatial in pose)") {
  // f(x, y) = x^2 * y; outer tracks x, inner tracks y.
  using Inner = Dual<1>;
  using Outer = Dual<1, Inner>;
  Outer x = Outer::seeded(Inner(3.0), 0);
  Inner y = Inner::seeded(2.0, 0);
  const Outer f = x * x * Outer(y);
  CHECK(primal(f) == doctest::Approx(18.0));
  CHECK(primal(f.d[0]) == doctest::Approx(12.0));  // d/dx = 2xy
  CHECK(f.v.d[0] == doctest::Approx(9.0));         // d/dy = x^2
}

TEST_CASE("seed_pose_tangents: identity seeding layout") {
  const Pose6d zero{0, 0, 0, 0, 0, 0};
  const Pose6d other{1, 2, 3, 0.1, 0.2, 0.3};
  const auto [a, b] = seed_pose_tangents(zero, other);
  for (int i = 0; i < 6; ++i) {
    CHECK(primal(a[i]) == 0.0);
    CHECK(primal(b[i]) == other[i]);
    for (int j = 0; j < 12; ++j) {
      CHECK(a[i].d[j] == (j == i ? 1.0 : 0.0));
      CHECK(b[i].d[j] == (j == 6 + i ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("extract_jacobian: constant, passthrough, polynomial rows") {
  const auto [a, b] = seed_pose_tangents({0, 0, 0, 2.0, 0, 0}, {0, 0, 0, 0, 0, 0});
  std::vector<Dual12> outputs;
  outputs.push_back(Dual12(7.5));         // constant -> zero row
  outputs.push_back(a[3]);                // passthrough -> unit row e_3
  outputs.push_back(a[3] * a[3]);         // s^2 at s=2 -> derivative 4
  const auto jac = extract_jacobian(outputs);
  for (int j = 0; j < 12; ++j) CHECK(jac[0][j] == 0.0);
  for (int j = 0; j < 12; ++j) CHECK(jac[1][j] == (j == 3 ? 1.0 : 0.0));
  CHECK(jac[2][3] == doctest::Approx(4.0));
}

TEST_CASE("fabs subgradient: sign of the primal, zero at zero") {
  CHECK(fabs(Dual<1>::seeded(-2.0, 0)).d[0] == -1.0);
  CHECK(fabs(Dual<1>::seeded(3.0, 0)).d[0] == 1.0);
  CHECK(fabs(Dual<1>::seeded(0.0, 0)).d[0] == 0.0);
}
