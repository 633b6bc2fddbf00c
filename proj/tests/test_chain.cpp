#include "chaoslab/chain_analysis.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace chaoslab;
using namespace chaoslab::chain;

namespace {

// Reachability by repeated squaring of a boolean matrix (Warshall).
std::vector<std::vector<bool>> closure(const TransitionGraph& g)
{
    const std::size_t n = g.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = true;
        for (BoxId j : g.successors[i]) r[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

void expect_matches_oracle(const TransitionGraph& g)
{
    const auto comps = chain_components(g);
    const auto r = closure(g);
    const std::size_t n = g.size();
    std::set<std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.insert(comps.scc_id[i]);
        for (std::size_t j = 0; j < n; ++j)
            ASSERT_EQ(comps.scc_id[i] == comps.scc_id[j], r[i][j] && r[j][i]) << i << " " << j;
        bool cycle = false;
        for (std::size_t j = 0; j < n && !cycle; ++j) {
            const bool edge = std::find(g.successors[i].begin(), g.successors[i].end(), j) != g.successors[i].end();
            cycle = (j != i && r[i][j] && r[j][i]) || (j == i && edge);
        }
        EXPECT_EQ(comps.recurrent[i], cycle) << i;
    }
    EXPECT_EQ(ids.size(), comps.component_count);
    std::size_t total = 0;
    for (auto s : comps.component_sizes) total += s;
    EXPECT_EQ(total, n);
}

// Symbolic chain step: first disagreement of f(p) and q.
double sym_jump(const symbolic::BiInfSeq& p, const symbolic::BiInfSeq& q) { return symbolic::shift_metric(p.shifted(1), q); }

} // namespace

TEST(Components, RandomGraphsMatchClosureOracle)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        TransitionGraph g;
        const std::size_t n = 1 + rng() % 200;
        const double p = 1.5 / static_cast<double>(n) * static_cast<double>(1 + rng() % 3);
        g.successors.resize(n);
        std::bernoulli_distribution edge(std::min(1.0, p));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (edge(rng)) g.successors[i].push_back(static_cast<BoxId>(j));
        expect_matches_oracle(g);
    }
}

TEST(Components, IdsOrderedBySmallestBox)
{
    TransitionGraph g;
    g.successors = {{1}, {0}, {2}, {}, {3}};
    const auto c = chain_components(g);
    EXPECT_EQ(c.scc_id, (std::vector<std::size_t>{0, 0, 1, 2, 3}));
    EXPECT_EQ(c.recurrent, (std::vector<bool>{true, true, true, false, false}));
    EXPECT_EQ(c.recurrent_count(), 3u);
}

TEST(Components, SmallModelGraphsMatchOracle)
{
    for (int depth : {1, 3, 5}) {
        for (double delta : {0.5, 0.25, 0.125}) {
            expect_matches_oracle(build_transition_graph(SymbolicBoxes(symbolic::golden_mean(), depth), delta));
            expect_matches_oracle(build_transition_graph(SymbolicBoxes(symbolic::two_fixed_points(), depth), delta));
        }
    }
    for (int n : {4, 8, 14}) expect_matches_oracle(build_transition_graph(ToralBoxes(toral::cat_map(), n), 0.01));
}

TEST(Components, TwoFixedPointsGiveTwoComponents)
{
    for (int depth : {3, 5, 7}) {
        const auto g = build_transition_graph(SymbolicBoxes(symbolic::two_fixed_points(), depth), 0.125);
        const auto c = chain_components(g);
        EXPECT_EQ(c.component_count, 2u);
        EXPECT_EQ(c.recurrent_count(), 2u);
        EXPECT_FALSE(is_chain_transitive(g).transitive);
    }
}

TEST(Components, CatMapIsOneComponent)
{
    const auto g = build_transition_graph(ToralBoxes::from_resolution(toral::cat_map(), 1.0 / 32.0), 1e-3);
    EXPECT_EQ(g.size(), 1024u);
    const auto c = chain_components(g);
    EXPECT_EQ(c.component_count, 1u);
    const auto rep = is_chain_transitive(g);
    EXPECT_TRUE(rep.transitive);
    EXPECT_FALSE(rep.caveat.empty());
}

TEST(ToralBoxes, SuccessorsContainSampledImages)
{
    const auto cat = toral::cat_map();
    const ToralBoxes boxes(cat, 16);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (BoxId b = 0; b < boxes.size(); ++b) {
        const auto succ = boxes.successors(b, 0.0);
        const auto [cx, cy] = boxes.center(b);
        for (int s = 0; s < 20; ++s) {
            const toral::TorusPoint p(cx + (u(rng) - 0.5) / 16.0, cy + (u(rng) - 0.5) / 16.0);
            const BoxId t = boxes.box_of(cat.apply(p));
            EXPECT_TRUE(std::binary_search(succ.begin(), succ.end(), t)) << b << " -> " << t;
        }
    }
}

TEST(ToralBoxes, ResolutionMustBeReciprocal)
{
    EXPECT_THROW(ToralBoxes::from_resolution(toral::cat_map(), 0.3), ConfigurationError);
    EXPECT_EQ(ToralBoxes::from_resolution(toral::cat_map(), 0.125).per_side(), 8);
}

TEST(SymbolicBoxes, SuccessorsContainShiftedRepresentatives)
{
    const auto g = symbolic::golden_mean();
    const SymbolicBoxes boxes(g, 5);
    const auto graph = build_transition_graph(boxes, 0.25);
    for (BoxId b = 0; b < boxes.size(); ++b) {
        const auto img = boxes.box_of(boxes.representative(b).shifted(1));
        EXPECT_TRUE(graph.has_edge(b, img));
    }
}

TEST(SymbolicBoxes, EveryGraphEdgeRealizesAChainStep)
{
    for (double delta : {0.5, 0.25, 0.125}) {
        const auto [boxes, gd] = SymbolicBoxes::for_chain_delta(symbolic::golden_mean(), delta);
        const auto graph = build_transition_graph(boxes, gd);
        for (BoxId b = 0; b < boxes.size(); ++b)
            for (BoxId t : graph.successors[b])
                EXPECT_LE(sym_jump(boxes.representative(b), boxes.representative(t)), delta);
    }
}

TEST(Proximal, GoldenMeanWitnessesForAllDyadicDeltas)
{
    const auto g = symbolic::golden_mean();
    const std::vector<symbolic::BiInfSeq> cands{symbolic::BiInfSeq::constant(2, 0), symbolic::BiInfSeq::periodic(2, {0, 1})};
    const std::vector<double> deltas{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto res = find_chain_proximal_pair<SymbolicBoxes>(
        [&](double d) { return SymbolicBoxes::for_chain_delta(g, d); }, cands, deltas);
    ASSERT_TRUE(res.has_value());
    ASSERT_EQ(res->witnesses.size(), deltas.size());
    for (const auto& w : res->witnesses) {
        EXPECT_TRUE(verify_proximal_witness(g.contract(), w));
        for (const auto* c : {&w.xx, &w.xy, &w.yx, &w.yy}) {
            ASSERT_EQ(c->steps(), w.m);
            for (std::size_t i = 0; i + 1 < c->points.size(); ++i) {
                EXPECT_LE(sym_jump(c->points[i], c->points[i + 1]), w.delta);
                EXPECT_TRUE(g.contains(c->points[i]));
            }
        }
        EXPECT_EQ(w.xx.front(), w.x);
        EXPECT_EQ(w.xy.back(), w.y);
        EXPECT_EQ(w.yx.back(), w.x);
        EXPECT_EQ(w.yy.front(), w.y);
    }
}

TEST(Proximal, TwoFixedPointsHaveNoPair)
{
    const auto g = symbolic::two_fixed_points();
    const std::vector<symbolic::BiInfSeq> cands{symbolic::BiInfSeq::constant(2, 0), symbolic::BiInfSeq::constant(2, 1)};
    const auto res = find_chain_proximal_pair<SymbolicBoxes>(
        [&](double d) { return SymbolicBoxes::for_chain_delta(g, d); }, cands, {0.25});
    EXPECT_FALSE(res.has_value());
}

TEST(Proximal, CatMapWitnessChainsAreChains)
{
    const auto cat = toral::cat_map();
    const std::vector<toral::TorusPoint> cands{{0.0, 0.0}, {0.5, 0.5}};
    const auto res = find_chain_proximal_pair<ToralBoxes>(
        [&](double d) { return ToralBoxes::for_chain_delta(cat, d); }, cands, {0.1, 0.05});
    ASSERT_TRUE(res.has_value());
    for (const auto& w : res->witnesses) {
        for (const auto* c : {&w.xx, &w.xy, &w.yx, &w.yy})
            for (std::size_t i = 0; i + 1 < c->points.size(); ++i)
                EXPECT_LE(toral::torus_distance(cat.apply(c->points[i]), c->points[i + 1]), w.delta + 1e-12);
    }
}

TEST(Refinement, BoxCountsGrow)
{
    const auto levels = refine_toral(toral::cat_map(), 8, 0.01, 3);
    ASSERT_EQ(levels.size(), 3u);
    EXPECT_EQ(levels[0].boxes, 64u);
    EXPECT_EQ(levels[1].boxes, 256u);
    EXPECT_EQ(levels[2].boxes, 1024u);
    for (const auto& l : levels) EXPECT_LE(l.recurrent_measure, 1.0 + 1e-12);
    const auto sym = refine_symbolic(symbolic::two_fixed_points(), 3, 0.125, 2);
    ASSERT_EQ(sym.size(), 2u);
    for (const auto& l : sym) EXPECT_EQ(l.components, 2u);
}

TEST(LimitSets, HomoclinicPointReturnsToTheFixedPointBox)
{
    const auto g = symbolic::full_shift(2);
    const SymbolicBoxes boxes(g, 3);
    const auto comps = chain_components(build_transition_graph(boxes, 0.125));
    const auto hp = symbolic::homoclinic_pair_fullshift();
    const auto res = limit_set_component(boxes, comps, hp.x, 8);
    ASSERT_TRUE(res.resolved());
    EXPECT_EQ(*res.omega_component, comps.scc_id[boxes.box_of(hp.fixed_point)]);
}
