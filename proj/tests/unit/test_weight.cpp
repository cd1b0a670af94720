#include "doctest.h"

#include "core/weight.hpp"
#include "support/oracles.hpp"

using namespace g2k;

TEST_CASE("laplace transform closed forms") {
  const Weight exp1 = Weight::expo(1.0, 1.0);
  CHECK(std::abs(exp1.laplace(1.0) - 0.5) < 1e-15);

  const Weight box = Weight::indicator(1.0, 0.0, 1.0);
  CHECK(std::abs(box.laplace(1.0) - (1.0 - std::exp(-1.0))) < 1e-15);

  const Weight conv = convolve(exp1, exp1);
  CHECK(std::abs(conv.laplace(2.0) - 1.0 / 9.0) < 1e-14);

  // boundary Re z = 0 is fine for decaying weights
  CHECK(std::abs(exp1.laplace(Complex(0, 1)) - 1.0 / Complex(1, 1)) < 1e-15);
  CHECK_THROWS_AS((void)exp1.laplace(Complex(-0.1, 0)), Error);
}

TEST_CASE("convolution closed forms") {
  const Weight exp1 = Weight::expo(1.0, 1.0);
  const Weight exp2 = Weight::expo(1.0, 2.0);

  SUBCASE("equal decays give t e^{-t}") {
    const Weight c = convolve(exp1, exp1);
    for (double t : {0.1, 0.7, 2.5, 6.0})
      CHECK(std::abs(c.eval(t) - t * std::exp(-t)) < 1e-14);
  }
  SUBCASE("partial fractions") {
    const Weight c = convolve(exp1, exp2);
    for (double t : {0.2, 1.0, 3.0})
      CHECK(std::abs(c.eval(t) - (std::exp(-t) - std::exp(-2 * t))) < 1e-14);
  }
  SUBCASE("unit box autoconvolution is the tent") {
    const Weight box = Weight::indicator(1.0, 0.0, 1.0);
    const Weight tent = convolve(box, box);
    CHECK(std::abs(tent.eval(1.0) - 1.0) < 1e-13);
    CHECK(std::abs(tent.eval(0.5) - 0.5) < 1e-13);
    CHECK(std::abs(tent.eval(1.5) - 0.5) < 1e-13);
    CHECK(std::abs(tent.eval(2.2)) < 1e-13);
    CHECK(tent.support_end() == doctest::Approx(2.0));
  }
  SUBCASE("nearly-equal distinct decays are rejected") {
    const Weight bad = Weight::expo(1.0, 1.0 + 1e-9);
    CHECK_THROWS_AS((void)convolve(exp1, bad), Error);
  }
}

TEST_CASE("exact norms") {
  CHECK(Weight::expo(1.0, 1.0).l1_norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(Weight::expo(1.0, 1.0, 1).l1_norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(Weight::indicator(1.0, 0.0, 1.0).l1_norm() == doctest::Approx(1.0));
  const Weight tent =
      convolve(Weight::indicator(1.0, 0.0, 1.0), Weight::indicator(1.0, 0.0, 1.0));
  CHECK(tent.l1_norm() == doctest::Approx(1.0).epsilon(1e-12));

  // sign-changing combination: |e^{-t} - e^{-2t}| integrates to 1/2 exactly
  const Weight diff =
      Weight::expo(1.0, 1.0).plus(Weight::expo(-1.0, 2.0));
  CHECK(diff.l1_norm() == doctest::Approx(0.5).epsilon(1e-12));

  // oscillatory real weight vs quadrature oracle
  const Weight dc = Weight::expo(Complex(0.5, 0), Complex(1, -2))
                        .plus(Weight::expo(Complex(0.5, 0), Complex(1, 2)));
  const Complex oracle = testing::simpson_integral(
      [&](double t) { return Complex(std::abs(dc.eval(t)), 0.0); }, 0.0, 40.0,
      40000);
  CHECK(dc.l1_norm() == doctest::Approx(oracle.real()).epsilon(1e-9));

  CHECK(Weight::expo(1.0, 1.0).l2_norm_sq() == doctest::Approx(0.5));
  CHECK(Weight::expo(1.0, 1.0, 1).l2_norm_sq() == doctest::Approx(0.25));
  CHECK(Weight::indicator(1.0, 0.0, 1.0).l2_norm_sq() == doctest::Approx(1.0));
}

TEST_CASE("norm submultiplicativity under convolution") {
  const std::vector<Weight> cat = {
      Weight::expo(1.0, 1.0), Weight::expo(1.0, 2.0),
      Weight::expo(1.0, 1.0, 1), Weight::indicator(1.0, 0.0, 1.0),
      Weight::expo(Complex(0.5, 0), Complex(1, -2))
          .plus(Weight::expo(Complex(0.5, 0), Complex(1, 2)))};
  for (std::size_t i = 0; i < cat.size(); ++i) {
    for (std::size_t j = 0; j < cat.size(); ++j) {
      if (i == 1 && j == 1) continue;  // exp2*exp2 fine, keep all actually
      const Weight conv = convolve(cat[i], cat[j]);
      CHECK(conv.l1_norm() <=
            cat[i].l1_norm() * cat[j].l1_norm() + 1e-10);
    }
  }
}

TEST_CASE("laplace multiplicativity across catalog pairs") {
  const std::vector<Weight> cat = {Weight::expo(1.0, 1.0),
                                   Weight::expo(1.0, 2.0),
                                   Weight::indicator(1.0, 0.0, 1.0),
                                   Weight::expo(1.0, 1.0, 1)};
  const std::vector<Complex> zs = {1.0, 2.0, Complex(0.5, 1.5), Complex(3, -2)};
  for (const auto& c : cat) {
    for (const auto& d : cat) {
      if (&c == &d && c.terms()[0].power == 0 && false) continue;
      Weight conv;
      try {
        conv = convolve(c, d);
      } catch (const Error&) {
        continue;
      }
      for (const auto& z : zs)
        CHECK(std::abs(conv.laplace(z) - c.laplace(z) * d.laplace(z)) <= 1e-12);
    }
  }
}

TEST_CASE("damping and tails") {
  const Weight exp1 = Weight::expo(1.0, 1.0);
  const Weight damped = exp1.damped(0.5);
  for (const Complex z : {Complex(1, 0), Complex(2, 1)})
    CHECK(std::abs(damped.laplace(z) - exp1.laplace(z + 0.5)) < 1e-14);

  // tail bound dominates the true tail e^{-T}
  for (double t : {1.0, 5.0, 20.0}) {
    CHECK(exp1.l1_tail_bound(t) >= std::exp(-t) - 1e-15);
    CHECK(exp1.l1_tail_bound(t) <= std::exp(-t) + 1e-12);
  }
  const Weight box = Weight::indicator(1.0, 0.0, 1.0);
  CHECK(box.l1_tail_bound(2.0) == 0.0);
  CHECK(box.l1_tail_bound(0.75) == doctest::Approx(0.25));
}

TEST_CASE("jump data at breakpoints") {
  const Weight box = Weight::indicator(1.0, 0.0, 1.0);
  CHECK(std::abs(box.eval_limit(0.0, true) - 1.0) < 1e-14);
  CHECK(std::abs(box.eval_limit(0.0, false)) < 1e-14);
  CHECK(std::abs(box.eval_limit(1.0, true)) < 1e-14);
  const auto bps = box.breakpoints();
  REQUIRE(bps.size() == 2);
  CHECK(bps[0] == doctest::Approx(0.0));
  CHECK(bps[1] == doctest::Approx(1.0));

  const Weight texp = Weight::expo(1.0, 1.0, 1);
  CHECK(std::abs(texp.eval_limit(0.0, true)) < 1e-14);
  CHECK(std::abs(texp.deriv_limit(0.0, true) - 1.0) < 1e-14);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((void)Weight::indicator(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS((void)Weight::indicator(1.0, -0.5, 1.0), Error);
  CHECK_THROWS_AS((void)Weight::expo(1.0, Complex(0.0, 1.0)), Error);
  CHECK_THROWS_AS((void)Weight::expo(1.0, -1.0), Error);
}

TEST_CASE("tensor weights") {
  const Weight exp1 = Weight::expo(1.0, 1.0);
  const TensorWeight psi({{exp1, exp1}});
  const Weight b = psi.to_weight();
  for (double t : {0.3, 1.2})
    CHECK(std::abs(b.eval(t) - t * std::exp(-t)) < 1e-13);
  CHECK(std::abs(psi.eval(0.5, 1.0) - std::exp(-1.5)) < 1e-15);
  CHECK_THROWS_AS(TensorWeight({}), Error);

  // JSON round trip keeps evaluations
  const auto j = psi.to_json();
  const TensorWeight back = TensorWeight::from_json(j);
  CHECK(std::abs(back.eval(0.7, 0.4) - psi.eval(0.7, 0.4)) < 1e-15);
}
