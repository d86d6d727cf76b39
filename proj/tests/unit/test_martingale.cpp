#include <cmath>
#include <string>

#include "bmo/error.hpp"
#include "bmo/jn_bellman.hpp"
#include "bmo/martingale.hpp"
#include "bmo/random.hpp"
#include "doctest.h"

using namespace bmo;

namespace {

MartingaleSpec leaf(double m, double x1, double x2) { return {m, {x1, x2}, {}}; }

MartingaleSpec merge(MartingaleSpec a, MartingaleSpec b) {
  const double m = a.measure + b.measure;
  const OmegaPoint x{(a.measure * a.point.x1 + b.measure * b.point.x1) / m,
                     (a.measure * a.point.x2 + b.measure * b.point.x2) / m};
  return {m, x, {std::move(a), std::move(b)}};
}

}  // namespace

TEST_SUITE("martingales") {
  TEST_CASE("structure errors name the node path") {
    // averages are consistent, but the first grandchild has gap 0.3 > 1/4
    const MartingaleSpec bad = merge(leaf(1, 0.5, 0.25), merge(leaf(1, 0.4, 0.46), leaf(1, 0.6, 0.36)));
    try {
      BinaryMartingale::from_spec(bad, 0.5);
      FAIL("expected a structure error");
    } catch (const StructureError& e) {
      CHECK(std::string(e.what()).find("root.+.-") != std::string::npos);
    }

    MartingaleSpec unbalanced = merge(leaf(1, -0.5, 0.25), leaf(1, 0.5, 0.25));
    unbalanced.point.x1 = 0.1;
    CHECK_THROWS_AS(BinaryMartingale::from_spec(unbalanced, 0.5), StructureError);

    MartingaleSpec measures = merge(leaf(1, 0, 0), leaf(1, 0, 0));
    measures.measure = 3;
    CHECK_THROWS_AS(BinaryMartingale::from_spec(measures, 0.5), StructureError);

    MartingaleSpec three = leaf(3, 0, 0);
    three.children = {leaf(1, 0, 0), leaf(1, 0, 0), leaf(1, 0, 0)};
    CHECK_THROWS_AS(BinaryMartingale::from_spec(three, 0.5), StructureError);

    CHECK_THROWS_AS(BinaryMartingale::from_spec(leaf(1, 0, 0), 0.0), DomainError);
  }

  TEST_CASE("paths") {
    const BinaryMartingale m =
        BinaryMartingale::from_spec(merge(leaf(1, 0, 0), merge(leaf(1, -0.5, 0.25), leaf(1, 0.5, 0.25))), 0.5);
    CHECK(m.path(0) == "root");
    CHECK(m.depth() == 2);
    const auto [lo, hi] = *m.node(0).children;
    CHECK(m.path(lo) == "root.-");
    CHECK(m.path(hi) == "root.+");
    const auto [lo2, hi2] = *m.node(hi).children;
    CHECK(m.path(lo2) == "root.+.-");
    CHECK(m.path(hi2) == "root.+.+");
  }

  TEST_CASE("goodness") {
    const BinaryMartingale constant = BinaryMartingale::from_spec(merge(leaf(1, 0.3, 0.2), leaf(2, 0.3, 0.2)), 0.5);
    CHECK(martingale_goodness(constant).overall == 1.0);

    // along (t, 1.25 t) the gap exceeds 1/4 for t in (1/4, 1)
    const OmegaPoint lo{0, 0}, hi{1, 1.25};
    const BinaryMartingale chord = BinaryMartingale::from_spec(merge(leaf(4, lo.x1, lo.x2), leaf(1, hi.x1, hi.x2)), 0.5);
    const GoodnessReport g = martingale_goodness(chord);
    CHECK(g.overall == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.alpha_max[0] == segment_goodness(lo, hi, 0.5).alpha_max);
    CHECK(g.alpha_max[1] == 1.0);

    const SquareExample halves = square_example(SquareStrategy::kHalves);
    CHECK(halves.overall_alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(halves.martingale.eps() == 1.0);
    CHECK(halves.martingale.node(0).point.x1 == 0.0);
    CHECK(halves.martingale.node(0).point.x2 == doctest::Approx(1.0));

    // the first chord, from (sqrt 2, 2) to the rest of the square, leaves
    // the strip on 3/8 of its length
    const SquareExample quarters = square_example(SquareStrategy::kQuarters);
    CHECK(quarters.overall_alpha == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(quarters.martingale.path(martingale_goodness(quarters.martingale).worst_node) == "root");
  }

  TEST_CASE("level sums") {
    const PlaneFunction affine = [](const OmegaPoint& x) { return 2 * x.x1 - x.x2 + 1; };
    const SquareExample h = square_example(SquareStrategy::kHalves);
    const JensenTrace flat = jensen_fold(h.martingale, affine, Shape::kConcave, 1.0);
    CHECK(flat.holds());
    for (double s : flat.level_sums) CHECK(s == doctest::Approx(flat.level_sums[0]).epsilon(1e-14));

    const PlaneFunction root_gap = [](const OmegaPoint& x) { return std::sqrt(std::max(0.0, x.x2 - x.x1 * x.x1)); };
    const JensenTrace t = jensen_fold(h.martingale, root_gap, Shape::kConcave, 0.5);
    CHECK(t.holds());
    CHECK(t.level_sums.front() == doctest::Approx(1.0));
    CHECK(t.level_sums.back() == doctest::Approx(0.0).scale(1));
    CHECK_FALSE(jensen_fold(h.martingale, root_gap, Shape::kConvex, 0.5).holds());

    const SquareExample q = square_example(SquareStrategy::kQuarters);
    CHECK_THROWS_AS(jensen_fold(q.martingale, root_gap, Shape::kConcave, 0.7), DomainError);
    CHECK_NOTHROW(jensen_fold(q.martingale, root_gap, Shape::kConcave, 0.6));
  }

  TEST_CASE("generated martingales") {
    Rng rng(11);
    for (int n = 1; n <= 3; ++n) {
      const double alpha = std::ldexp(1.0, -n);
      const double eps = 0.5 * jn_threshold(alpha);
      const JnParams p = solve_delta(alpha, eps);
      const PlaneFunction B = [&](const OmegaPoint& x) { return jn_bellman(x, p); };
      for (int trial = 0; trial < 10; ++trial) {
        const TreePtr t = build_dyadic_tree(n, 3);
        const SimpleFunction phi = random_function(rng, t, 3, eps);
        const BinaryMartingale m = generate_martingale(phi, eps);
        CHECK(martingale_goodness(m).overall >= alpha * (1 - 1e-9));
        const JensenTrace j = jensen_fold(m, B, Shape::kConcave, alpha * (1 - 1e-9));
        CHECK(j.holds());
        // the leaves carry the values of phi
        CHECK(j.level_sums.back() == doctest::Approx(node_averages(phi, [](double v) { return std::exp(v); })[0]));
        CHECK(m.node(0).point.x1 == doctest::Approx(node_point(phi, 0).x1).scale(1));
      }
    }
  }

  TEST_CASE("guaranteed bounds") {
    CHECK(alpha0_bound(1).alpha0_lower == 1.0);
    CHECK(alpha0_bound(1).eps0_lower == 1.0);
    CHECK(alpha0_bound(2).alpha0_lower == 0.25);
    CHECK(alpha0_bound(2).eps0_lower == doctest::Approx(4.0 / 3.0 * std::log(2.0)).epsilon(1e-15));
    for (int n = 2; n < 20; ++n) {
      CHECK(alpha0_bound(n + 1).alpha0_lower < alpha0_bound(n).alpha0_lower);
      CHECK(alpha0_bound(n + 1).eps0_lower < alpha0_bound(n).eps0_lower);
    }
    CHECK_THROWS_AS(alpha0_bound(0), DomainError);
  }
}
