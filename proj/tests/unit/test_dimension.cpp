#include <gtest/gtest.h>

#include <cmath>

#include "brute_force.hpp"
#include "minorbit/bernoulli.hpp"
#include "minorbit/dimension.hpp"
#include "minorbit/errors.hpp"
#include "minorbit/rng.hpp"

using namespace minorbit;
using namespace minorbit::dimension;
namespace bn = minorbit::bernoulli;

namespace {

CorrelationCurve synthetic(double exponent, std::size_t count) {
  CorrelationCurve c;
  const RadiusGrid grid(0.5, 0.7, count);
  for (auto it = grid.radii().rbegin(); it != grid.radii().rend(); ++it) {
    c.points.push_back({*it, std::pow(*it, exponent)});
  }
  return c;
}

double brute_circle_sum(const std::vector<double>& pts, double r) {
  std::size_t hits = 0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (a != b && brute::circle_gap(pts[a], pts[b]) <= r) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(pts.size() * (pts.size() - 1));
}

const CircleSampler kLebesgue = [](std::uint64_t s) { return rng::uniform(s, 0); };

WordEnvSampler bernoulli_words(const bn::BernoulliParams& p, std::size_t depth) {
  return [p, depth](std::uint64_t env_seed, std::uint64_t point_seed) {
    const auto env = bn::sample_environment(env_seed, depth);
    return bn::sample_fiber_sequence(p, env, point_seed, depth);
  };
}

}  // namespace

TEST(RadiusGrid, Construction) {
  const RadiusGrid g(1.0, 0.5, 5);
  EXPECT_EQ(g.radii(), (std::vector<double>{1.0, 0.5, 0.25, 0.125, 0.0625}));
  const auto l = RadiusGrid::log_spaced(1e-4, 1e-2, 9);
  EXPECT_NEAR(l.radii().front(), 1e-2, 1e-17);
  EXPECT_NEAR(l.radii().back(), 1e-4, 1e-18);
  for (std::size_t k = 1; k < l.count(); ++k) ASSERT_LT(l.radii()[k], l.radii()[k - 1]);
  EXPECT_THROW(RadiusGrid(1.0, 1.0, 5), DomainError);
  EXPECT_THROW(RadiusGrid(1.0, 0.5, 3), DomainError);
  EXPECT_THROW(RadiusGrid(-1.0, 0.5, 5), DomainError);
}

TEST(CorrelationSum, Examples) {
  const std::vector<double> pts{0.0, 0.1, 0.2};
  EXPECT_NEAR(correlation_sum(pts, 0.1), 4.0 / 6.0, 1e-15);
  EXPECT_EQ(correlation_sum(pts, 0.5), 1.0);
  EXPECT_THROW(correlation_sum(std::vector<double>{0.3}, 0.1), DomainError);

  std::vector<double> uniform(2000);
  for (std::size_t k = 0; k < uniform.size(); ++k) uniform[k] = rng::uniform(rng::stream_key(1, 0, "u"), k);
  EXPECT_NEAR(correlation_sum(uniform, 0.01), 0.02, 0.003);
}

TEST(CorrelationSum, MatchesBruteForceAndIsMonotone) {
  const auto key = rng::stream_key(2, 0, "cs");
  for (int t = 0; t < 30; ++t) {
    std::vector<double> pts(150);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double u = rng::uniform(rng::combine(key, t), k);
      pts[k] = t % 2 ? std::floor(u * 40) / 40 : u;  // ties on odd trials
    }
    double prev = 0.0;
    for (double r : {0.0, 0.001, 0.01, 0.025, 0.05, 0.1, 0.3, 0.5}) {
      const double c = correlation_sum(pts, r);
      ASSERT_DOUBLE_EQ(c, brute_circle_sum(pts, r)) << "r=" << r;
      ASSERT_GE(c, prev);
      prev = c;
    }
    auto shuffled = pts;
    std::reverse(shuffled.begin(), shuffled.end());
    ASSERT_EQ(correlation_sum(shuffled, 0.05), correlation_sum(pts, 0.05));
  }
}

TEST(CorrelationSum, WordsUseAgreementDepth) {
  const std::vector<std::vector<Symbol>> words{{0, 0, 1}, {0, 0, 0}, {0, 1, 1}, {1, 0, 0}};
  // Depths: (0,1)=2 (0,2)=1 (0,3)=0 (1,2)=1 (1,3)=0 (2,3)=0.
  EXPECT_NEAR(correlation_sum(words, 2.0, 0.25), 2.0 / 12.0, 1e-15);
  EXPECT_NEAR(correlation_sum(words, 2.0, 0.5), 6.0 / 12.0, 1e-15);
  EXPECT_EQ(correlation_sum(words, 2.0, 1.0), 1.0);
  EXPECT_EQ(correlation_sum(words, 2.0, 0.1), 0.0);
  const std::vector<std::vector<Symbol>> same{{1, 0}, {1, 0}};
  EXPECT_EQ(correlation_sum(same, 2.0, 0.0), 1.0);
}

TEST(FitDimension, SyntheticPowerLaws) {
  const auto c = synthetic(1.7, 20);
  const auto fit = fit_dimension(c, c.points.front().r, c.points.back().r);
  EXPECT_NEAR(fit.slope, 1.7, 1e-12);
  EXPECT_EQ(fit.used_points, 20u);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_NEAR(fit_dimension(c).slope, 1.7, 1e-12);

  const auto flat = synthetic(0.0, 12);
  EXPECT_EQ(fit_dimension(flat).slope, 0.0);

  for (const auto& s : local_slopes(c)) ASSERT_NEAR(s.c, 1.7, 1e-12);
}

TEST(FitDimension, DropsEmptyRadiiAndRefusesShortFits) {
  auto c = synthetic(1.0, 10);
  for (std::size_t k = 0; k < 7; ++k) c.points[k].c = 0.0;
  EXPECT_THROW(fit_dimension(c, c.points.front().r, c.points.back().r), FitError);
  c.points[6].c = c.points[6].r;
  const auto fit = fit_dimension(c, c.points.front().r, c.points.back().r);
  EXPECT_EQ(fit.used_points, 4u);
  EXPECT_NEAR(fit.slope, 1.0, 1e-12);
}

TEST(Curves, LebesgueAndAtom) {
  const auto grid = RadiusGrid::log_spaced(1e-3, 1e-1, 12);
  const auto leb = annealed_curve(kLebesgue, 3000, grid, 7);
  EXPECT_EQ(leb.kind, CurveKind::Annealed);
  EXPECT_NEAR(fit_dimension(leb).slope, 1.0, 0.05);
  for (std::size_t k = 1; k < leb.points.size(); ++k) {
    ASSERT_LT(leb.points[k - 1].r, leb.points[k].r);
    ASSERT_LE(leb.points[k - 1].c, leb.points[k].c);
  }
  const CircleSampler atom = [](std::uint64_t) { return 0.25; };
  const auto a = annealed_curve(atom, 200, grid, 7);
  for (const auto& p : a.points) ASSERT_EQ(p.c, 1.0);
  EXPECT_EQ(fit_dimension(a).slope, 0.0);
  EXPECT_THROW(annealed_curve(kLebesgue, 99, grid, 7), DomainError);
}

TEST(Curves, UniformBernoulliWordsHaveSlopeOne) {
  const bn::BernoulliParams p(0.5, 0.5);
  const auto sample = bernoulli_words(p, 40);
  const WordSampler pooled = [&](std::uint64_t s) {
    return sample(rng::combine(s, 17), s);
  };
  const RadiusGrid grid(0.5, 0.5, 12);
  const auto an = annealed_curve(pooled, 2.0, 2000, grid, 3);
  EXPECT_NEAR(fit_dimension(an).slope, 1.0, 0.05);
  const auto qu = quenched_curve(sample, 2.0, 10, 1000, grid, 3);
  EXPECT_EQ(qu.kind, CurveKind::Quenched);
  EXPECT_EQ(qu.env_count, 10u);
  EXPECT_NEAR(fit_dimension(qu).slope, fit_dimension(an).slope, 0.05);
  EXPECT_THROW(quenched_curve(sample, 2.0, 9, 1000, grid, 3), DomainError);
}

TEST(Curves, SingleEnvironmentCurveIsOneCorrelationSum) {
  // One environment: the curve is the plain correlation sum of the points
  // drawn under it.
  const bn::BernoulliParams p(0.2, 0.7);
  const auto sample = bernoulli_words(p, 30);
  const RadiusGrid grid(0.5, 0.5, 8);
  const std::uint64_t env_seed = 99, seed = 5;
  const auto curve = environment_curve(sample, 2.0, env_seed, 150, grid, seed);
  std::vector<std::vector<Symbol>> pts;
  for (std::size_t a = 0; a < 150; ++a) {
    pts.push_back(sample(env_seed, point_seed(rng::combine(seed, env_seed), a)));
  }
  for (const auto& pt : curve.points) {
    ASSERT_EQ(pt.c, correlation_sum(pts, 2.0, pt.r));
  }
}

TEST(CylinderSums, ExactModeMatchesClosedForms) {
  const auto fair = ProductCylinderModel::from_bernoulli(bn::BernoulliParams(0.5, 0.5));
  for (const auto& e : renyi_from_cylinders(fair, 1, 12)) {
    ASSERT_NEAR(e.annealed, 1.0, 1e-12);
    ASSERT_NEAR(e.quenched, 1.0, 1e-12);
  }
  const bn::BernoulliParams p(0.3, 0.6);
  const auto model = ProductCylinderModel::from_bernoulli(p);
  const auto at10 = renyi_from_cylinders(model, 10, 10).front();
  EXPECT_NEAR(at10.annealed, bn::renyi_annealed(p), 1e-9);
  EXPECT_NEAR(at10.annealed, 0.985645, 1e-6);
  EXPECT_NEAR(at10.quenched, 0.862496, 1e-6);
  for (const auto& e : renyi_from_cylinders(model, 2, 12)) {
    ASSERT_NEAR(e.annealed, bn::renyi_annealed(p), 1e-9) << e.k;
    ASSERT_NEAR(e.quenched, bn::renyi_quenched(p), 1e-9) << e.k;
  }
}

TEST(CylinderSums, EnumerationModesAgree) {
  const auto model = ProductCylinderModel::from_bernoulli(bn::BernoulliParams(0.15, 0.8));
  for (std::size_t k = 1; k <= 8; ++k) {
    ASSERT_NEAR(quenched_cylinder_sum(model, k, QuenchedEnumeration::PerSymbol),
                quenched_cylinder_sum(model, k, QuenchedEnumeration::FullEnvironment),
                1e-15);
  }
  EXPECT_THROW(quenched_cylinder_sum(model, 13, QuenchedEnumeration::FullEnvironment),
               ResourceError);
  EXPECT_THROW(annealed_cylinder_sum(model, 25), ResourceError);
}

TEST(CylinderSums, GeneralProductModel) {
  // Three fiber symbols, two unequally weighted environments.
  const ProductCylinderModel model({0.25, 0.75}, {{0.5, 0.3, 0.2}, {0.1, 0.1, 0.8}});
  const double an1 = 0.2 * 0.2 + 0.15 * 0.15 + 0.65 * 0.65;
  const double qu1 = 0.25 * (0.25 + 0.09 + 0.04) + 0.75 * (0.01 + 0.01 + 0.64);
  EXPECT_NEAR(annealed_cylinder_sum(model, 1), an1, 1e-15);
  EXPECT_NEAR(annealed_cylinder_sum(model, 5), std::pow(an1, 5), 1e-15);
  EXPECT_NEAR(quenched_cylinder_sum(model, 4), std::pow(qu1, 4), 1e-15);
  EXPECT_THROW(ProductCylinderModel({0.5, 0.6}, {{1.0}, {1.0}}), DomainError);
}

TEST(Empirical, UniformWordEntropy) {
  const auto env = bn::sample_environment(8, 1000000);
  const auto x = bn::sample_fiber_sequence(bn::BernoulliParams(0.5, 0.5), env, 9, 1000000);
  EXPECT_NEAR(renyi_empirical(x, 8), 1.0, 0.02);
  EXPECT_EQ(empirical_cylinder_sum(std::vector<Symbol>{1, 1, 1, 1}, 2), 1.0);
}

TEST(Empirical, QuenchedAverageDominatesPooled) {
  const bn::BernoulliParams p(0.1, 0.8);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<Symbol>> words;
    for (int e = 0; e < 12; ++e) {
      const auto env = bn::sample_environment(rng::combine(t, e), 2000);
      words.push_back(bn::sample_fiber_sequence(p, env, rng::combine(t, 100 + e), 2000));
    }
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto sums = empirical_cylinder_sums(words, k);
      ASSERT_GE(sums.averaged, sums.pooled);
    }
    for (const auto& e : renyi_empirical(words, 1, 6)) ASSERT_LE(e.quenched, e.annealed);
  }
  std::vector<std::vector<Symbol>> ragged{{0, 1, 0}, {1, 0}};
  EXPECT_THROW(empirical_cylinder_sums(ragged, 1), DomainError);
}
