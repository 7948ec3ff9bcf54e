#include <doctest.h>

#include <cmath>

#include "mgids/compression.hpp"
#include "mgids/errors.hpp"
#include "support/oracles.hpp"

using namespace mgids;
namespace oracle = mgids::testing;

namespace {

double tv_distance(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

}  // namespace

TEST_SUITE("compression") {

TEST_CASE("simplex cover: reference example") {
  SimplexCover cover = simplex_cover(2, 0.25);
  CHECK(cover.resolution == 4);
  CHECK(cover.num_centers() == doctest::Approx(5.0));
  std::vector<double> p = {0.3, 0.7};
  std::vector<int> comp = cover.assign(p);
  CHECK(comp[0] == 1);
  CHECK(comp[1] == 3);
  std::vector<double> center = cover.center_from_composition(comp);
  CHECK(tv_distance(p, center) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("simplex cover: delta one still assigns") {
  SimplexCover cover = simplex_cover(3, 1.0);
  CHECK(cover.resolution == 2);  // ceil(3/2)
  std::vector<double> p = {0.2, 0.5, 0.3};
  std::vector<int> comp = cover.assign(p);
  int total = 0;
  for (int c : comp) total += c;
  CHECK(total == cover.resolution);
}

TEST_CASE("simplex cover: invalid radius rejected") {
  CHECK_THROWS_AS(simplex_cover(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(simplex_cover(3, -0.1), std::invalid_argument);
}

TEST_CASE("simplex cover: random vectors stay within delta of their center") {
  Rng rng(101);
  for (double delta : {0.5, 0.21, 0.07}) {
    for (int S : {2, 3, 5}) {
      SimplexCover cover = simplex_cover(S, delta);
      std::vector<double> ones(S, 1.0), p(S);
      for (int trial = 0; trial < 3000; ++trial) {
        rng.next_dirichlet(ones, p);
        std::vector<int> comp = cover.assign(p);
        int total = 0;
        for (int c : comp) {
          CHECK(c >= 0);
          total += c;
        }
        CHECK(total == cover.resolution);
        std::vector<double> center = cover.center_from_composition(comp);
        CHECK(tv_distance(p, center) <= delta + 1e-12);
      }
    }
  }
}

TEST_CASE("composition ranks are a bijection") {
  SimplexCover cover = simplex_cover(3, 0.25);  // resolution 6
  std::vector<std::uint64_t> seen;
  std::vector<int> comp(3, 0);
  for (int a = 0; a <= cover.resolution; ++a)
    for (int b = 0; b + a <= cover.resolution; ++b) {
      comp = {a, b, cover.resolution - a - b};
      seen.push_back(cover.composition_rank(comp));
    }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == i);
  CHECK(static_cast<double>(seen.size()) == doctest::Approx(cover.num_centers()));
}

TEST_CASE("distortion basics") {
  Rng rng(103);
  ZeroSumGame e = oracle::random_env(rng, 2, 2, 2, 2);
  SUBCASE("zero against itself") {
    CHECK(distortion(e, e, PolicyClassSpec::all_deterministic()) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("symmetry") {
    ZeroSumGame e2 = e;
    Rng rng2(105);
    std::vector<double> ones(2, 1.0);
    for (std::size_t row = 0; row < e2.num_rows(); ++row)
      rng2.next_dirichlet(ones, {e2.kernel.data() + row * 2, 2});
    PolicyClassSpec phi = PolicyClassSpec::all_deterministic();
    CHECK(distortion(e, e2, phi) == doctest::Approx(distortion(e2, e, phi)).epsilon(1e-12));
  }
  SUBCASE("mismatched rewards rejected") {
    ZeroSumGame e2 = e;
    e2.reward[0] = 1.0 - e2.reward[0];
    CHECK_THROWS_AS(distortion(e, e2, PolicyClassSpec::all_deterministic()),
                    std::invalid_argument);
  }
  SUBCASE("enumeration guard trips on large classes") {
    ZeroSumGame big = oracle::random_env(rng, 4, 6, 6, 6);
    ZeroSumGame big2 = big;
    CHECK_THROWS_AS(distortion(big, big2, PolicyClassSpec::all_deterministic()),
                    EnumerationTooLarge);
  }
}

TEST_CASE("hard partition classification") {
  Rng rng(107);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  const double epsilon = 0.8;
  HardPartition part = build_hard_partition(base, epsilon);
  const double delta = epsilon / (2.0 * 2 * 2);
  CHECK(part.cover.delta == doctest::Approx(delta));

  SUBCASE("identical kernels share a cell; classification is deterministic") {
    ZeroSumGame e = oracle::random_env(rng, 2, 2, 2, 2);
    ZeroSumGame e2 = e;
    CHECK(part.classify(e) == part.classify(e2));
    CHECK(part.classify(e) == part.classify(e));
  }

  SUBCASE("references snap rows to centers within delta, idempotently") {
    for (int trial = 0; trial < 20; ++trial) {
      ZeroSumGame e = oracle::random_env(rng, 2, 2, 2, 2);
      e.reward = base.reward;
      CompressedEnv comp = compress_env(part, e);
      for (std::size_t row = 0; row < e.num_rows(); ++row) {
        std::span<const double> orig{e.kernel.data() + row * 2, 2};
        std::span<const double> snapped{comp.reference.kernel.data() + row * 2, 2};
        CHECK(tv_distance(orig, snapped) <= part.cover.delta + 1e-12);
      }
      CompressedEnv again = compress_env(part, comp.reference);
      CHECK(again.cell == comp.cell);
      CHECK(again.reference.kernel == comp.reference.kernel);
    }
  }

  SUBCASE("same-cell distortion stays within epsilon") {
    // Reference pairs: an environment and its snapped center sit in one cell.
    for (int trial = 0; trial < 40; ++trial) {
      ZeroSumGame e = oracle::random_env(rng, 2, 2, 2, 2);
      e.reward = base.reward;
      CompressedEnv comp = compress_env(part, e);
      double d = distortion(e, comp.reference, PolicyClassSpec::all_deterministic());
      CHECK(d <= epsilon + 1e-10);
    }
  }
}

TEST_CASE("candidate partitions") {
  Rng rng(109);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  FiniteSupportBelief belief = random_product_support(base, {2, 2}, 113);

  SUBCASE("identity assigns one cell per candidate") {
    Partition p = Partition::identity(belief);
    CHECK(p.num_cells() == 4);
    for (int i = 0; i < 4; ++i) CHECK(p.cell_of[i] == i);
  }
  SUBCASE("grouping by labels keeps lowest-index references") {
    Partition p = Partition::group_by(belief, {1, 0, 1, 0});
    CHECK(p.num_cells() == 2);
    CHECK(p.cell_of[0] == p.cell_of[2]);
    CHECK(p.cell_of[1] == p.cell_of[3]);
    CHECK(p.references[p.cell_of[0]].kernel == belief.candidates[0].kernel);
    CHECK(p.references[p.cell_of[1]].kernel == belief.candidates[1].kernel);
  }
  SUBCASE("hard classification groups near-identical candidates") {
    FiniteSupportBelief tight;
    tight.candidates = {belief.candidates[0], belief.candidates[0]};
    tight.log_weights = {std::log(0.5), std::log(0.5)};
    HardPartition hard = build_hard_partition(base, 0.5);
    Partition p = Partition::from_hard(hard, tight);
    CHECK(p.num_cells() == 1);
  }
}

TEST_CASE("soft constraint estimates") {
  Rng rng(127);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  FiniteSupportBelief belief = random_product_support(base, {2, 2}, 131);
  PolicyClassSpec phi = PolicyClassSpec::all_deterministic();

  SUBCASE("point mass on its own reference has zero distortion") {
    FiniteSupportBelief point;
    point.candidates = {belief.candidates[0]};
    point.log_weights = {0.0};
    Partition p = Partition::identity(point);
    SoftConstraintEstimate est = check_soft_constraint(point, p, phi);
    CHECK(est.mean_distortion == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("hard partitions satisfy the soft constraint") {
    const double epsilon = 0.7;
    HardPartition hard = build_hard_partition(base, epsilon);
    Partition p = Partition::from_hard(hard, belief);
    SoftConstraintEstimate est = check_soft_constraint(belief, p, phi);
    CHECK(est.mean_distortion <= epsilon + 1e-10);

    Belief dirichlet = DirichletBelief::uniform_prior(base, 2.0);
    SoftConstraintEstimate mc = check_soft_constraint(dirichlet, hard, phi, 50, 999);
    CHECK(mc.mean_distortion <= epsilon + 1e-10);
  }

  SUBCASE("single cell with the mean environment as reference") {
    ZeroSumGame mean_env = base;
    mean_env.kernel = mean_kernel(Belief{belief});
    Partition p = Partition::single_cell(belief, mean_env);
    SoftConstraintEstimate est = check_soft_constraint(belief, p, phi);
    std::vector<double> w = belief.weights();
    double direct = 0.0;
    for (std::size_t i = 0; i < belief.candidates.size(); ++i)
      direct += w[i] * distortion(belief.candidates[i], mean_env, phi);
    CHECK(est.mean_distortion == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("compressed entropy") {
  Rng rng(137);
  ZeroSumGame base = oracle::random_env(rng, 2, 2, 2, 2);
  FiniteSupportBelief belief = random_product_support(base, {2, 2}, 139);
  SUBCASE("one cell has zero entropy") {
    CHECK(compressed_entropy(belief, Partition::single_cell(belief)) ==
          doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("two equal-mass cells give ln 2") {
    FiniteSupportBelief pair;
    pair.candidates = {belief.candidates[0], belief.candidates[1]};
    pair.log_weights = {std::log(0.5), std::log(0.5)};
    CHECK(compressed_entropy(pair, Partition::identity(pair)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
}

}  // TEST_SUITE
