#include "chaoslab/toral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace chaoslab;
using namespace chaoslab::toral;

namespace {

const double golden = (1.0 + std::sqrt(5.0)) / 2.0;

// f(p) computed directly from the integer matrix, reduced mod 1.
TorusPoint naive_apply(const IntMatrix& a, const TorusPoint& p)
{
    const double x = a[0][0] * p.x + a[0][1] * p.y;
    const double y = a[1][0] * p.x + a[1][1] * p.y;
    return {x - std::floor(x), y - std::floor(y)};
}

double naive_distance(const TorusPoint& p, const TorusPoint& q)
{
    double best = 1e9;
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) best = std::min(best, std::max(std::fabs(p.x - q.x + i), std::fabs(p.y - q.y + j)));
    return best;
}

} // namespace

TEST(CatMap, SpectralData)
{
    const auto cat = cat_map();
    EXPECT_TRUE(cat.eigen_identity_holds());
    EXPECT_NEAR(cat.lambda_u_value(), golden * golden, 1e-14);
    EXPECT_NEAR(cat.lambda_s_value(), 1.0 / (golden * golden), 1e-14);
    EXPECT_EQ(cat.operator_norm(), 3.0);
    EXPECT_NEAR(cat.expansive_constant(), 1.0 / 6.0, 1e-15);
    const Eigen::Vector2d u = cat.unstable_direction();
    const Eigen::Vector2d au = cat.linear(u);
    EXPECT_NEAR(au[0], cat.lambda_u_value() * u[0], 1e-12);
    EXPECT_NEAR(au[1], cat.lambda_u_value() * u[1], 1e-12);
    EXPECT_NEAR(std::max(std::fabs(u[0]), std::fabs(u[1])), 1.0, 1e-15);
    EXPECT_GE(cat.shadowing_constant(), (golden * golden + 1.0) / (golden * golden - 1.0) - 1e-12);
}

TEST(CatMap, RejectsNonHyperbolic)
{
    EXPECT_ANY_THROW(ToralMap("rot", IntMatrix{{{0, -1}, {1, 0}}}));
    EXPECT_ANY_THROW(ToralMap("shear", IntMatrix{{{1, 1}, {0, 1}}}));
    EXPECT_ANY_THROW(ToralMap("det2", IntMatrix{{{2, 0}, {0, 1}}}));
}

TEST(CatMap, ApplyAndInverse)
{
    const auto cat = cat_map();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint p(u(rng), u(rng));
        const TorusPoint q = cat.apply(p);
        EXPECT_LE(naive_distance(q, naive_apply(cat.matrix(), p)), 1e-14);
        EXPECT_LE(naive_distance(cat.apply_inverse(q), p), 1e-14);
        EXPECT_GE(q.x, 0.0);
        EXPECT_LT(q.x, 1.0);
    }
}

TEST(TorusDistance, MatchesLiftScan)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const TorusPoint p(u(rng), u(rng)), q(u(rng), u(rng));
        EXPECT_NEAR(torus_distance(p, q), naive_distance(p, q), 1e-15);
    }
    EXPECT_EQ(TorusPoint(1.25, -0.25).x, 0.25);
    EXPECT_EQ(TorusPoint(1.25, -0.25).y, 0.75);
}

TEST(ShadowToral, CorrectedWindowIsATrueOrbit)
{
    const auto cat = cat_map();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const double delta = 1e-5;
        const auto po = random_pseudo_orbit(cat, 300, delta, seed);
        ASSERT_TRUE(is_pseudo_orbit(cat.contract(), po));
        const auto s = shadow_toral(cat, po);
        double worst_step = 0.0, worst_gap = 0.0;
        for (Index i = po.i_min; i < po.i_max(); ++i)
            worst_step = std::max(worst_step, naive_distance(naive_apply(cat.matrix(), s.orbit.at(i)), s.orbit.at(i + 1)));
        for (Index i = po.i_min; i <= po.i_max(); ++i) worst_gap = std::max(worst_gap, naive_distance(po.at(i), s.orbit.at(i)));
        EXPECT_LE(worst_step, 1e-12);
        EXPECT_LE(worst_gap, cat.shadowing_constant() * delta);
        EXPECT_LE(s.certified_epsilon, cat.shadowing_constant() * delta * (1 + 1e-12));
        EXPECT_EQ(s.orbit.at(0), s.base);
    }
}

TEST(ShadowToral, TrueOrbitNeedsNoCorrection)
{
    const auto cat = cat_map();
    PseudoOrbit<TorusPoint> po{cat.name(), 0, {TorusPoint(0.2, 0.3)}, 0.0};
    for (int i = 0; i < 20; ++i) po.points.push_back(naive_apply(cat.matrix(), po.points.back()));
    const auto s = shadow_toral(cat, po);
    EXPECT_LE(s.max_correction, 1e-12);
}

TEST(ShadowToral, RefusesLargeDelta)
{
    const auto cat = cat_map();
    EXPECT_ANY_THROW(shadow_toral(cat, random_pseudo_orbit(cat, 10, 0.2, 1)));
}

TEST(Homoclinic, OrbitConvergesToZeroBothWays)
{
    const auto cat = cat_map();
    const TorusPoint zero(0.0, 0.0);
    for (const auto& n : {std::array<long, 2>{1, 0}, std::array<long, 2>{0, 1}, std::array<long, 2>{2, -1}}) {
        const HomoclinicPoint h(cat, n);
        EXPECT_GT(naive_distance(h.point(), zero), 1e-3);
        for (Index i = -40; i < 40; ++i)
            EXPECT_LE(naive_distance(naive_apply(cat.matrix(), h.orbit(i)), h.orbit(i + 1)), 1e-12) << i;
        for (Index i : {30, 60, 200})
            EXPECT_LE(naive_distance(h.orbit(i), zero), 10.0 * std::pow(golden, -2.0 * static_cast<double>(i)));
        for (Index i : {-30, -60, -200})
            EXPECT_LE(naive_distance(h.orbit(i), zero), 10.0 * std::pow(golden, 2.0 * static_cast<double>(i)));
    }
    EXPECT_ANY_THROW(HomoclinicPoint(cat, {0, 0}));
}

TEST(Expansive, DistinctPointsSeparate)
{
    const auto cat = cat_map();
    const auto s = expansive_separation_toral(cat, TorusPoint(0.1, 0.1), TorusPoint(0.1 + 1e-6, 0.1), cat.expansive_constant(), 40);
    EXPECT_TRUE(s.separated);
    ASSERT_TRUE(s.witness.has_value());
    EXPECT_GT(s.distance, cat.expansive_constant());
}
