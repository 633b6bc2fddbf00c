#pragma once

// Chain recurrence at a fixed granularity: box covers, delta-transition
// graphs, chain components as strongly connected components, the chain
// proximal relation with explicit equal-length witnesses, and limit-set
// sampling.

#include "chaoslab/core.hpp"
#include "chaoslab/parallel.hpp"
#include "chaoslab/symbolic.hpp"
#include "chaoslab/toral.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chaoslab::chain {

using BoxId = std::uint32_t;

struct BoxCover {
    std::string system_id;
    /// Box side for toral covers, cylinder depth for symbolic ones.
    double resolution = 0.0;
    std::size_t box_count = 0;
    /// Metric diameter of every box.
    double box_diameter = 0.0;
};

struct TransitionGraph {
    BoxCover cover;
    double delta = 0.0;
    std::vector<std::vector<BoxId>> successors;

    std::size_t size() const { return successors.size(); }
    std::size_t edge_count() const;
    bool has_edge(BoxId from, BoxId to) const;
    std::vector<std::vector<BoxId>> predecessors() const;
};

/// Cylinders [w] of a memory-1 SFT fixing coordinates [-L, R] with
/// L = (depth-1)/2 and R = depth-1-L.
class SymbolicBoxes {
public:
    using Point = symbolic::BiInfSeq;

    SymbolicBoxes(symbolic::SftSystem system, int depth);

    /// Depth 2t+1 for delta rounded down to 2^-t, so that any points taken
    /// along a graph path form delta-chains.
    static std::pair<SymbolicBoxes, double> for_chain_delta(const symbolic::SftSystem& system, double delta);

    std::size_t size() const { return words_.size(); }
    BoxCover cover() const;
    const symbolic::SftSystem& system() const { return system_; }
    SystemContract<Point> contract() const { return system_.contract(); }
    int depth() const { return depth_; }
    const symbolic::Word& word(BoxId b) const { return words_.at(b); }

    BoxId box_of(const Point& p) const;
    Point representative(BoxId b) const;
    std::pair<double, double> center(BoxId b) const;
    double diameter() const;
    /// Bound on d(f(p_i), p_{i+1}) for points taken in the boxes of a path.
    double chain_slack(double delta) const { return std::max(diameter(), delta); }

    /// All successor lists for one graph build.
    std::vector<std::vector<BoxId>> successor_lists(double delta) const;

private:
    symbolic::SftSystem system_;
    int depth_;
    int left_;
    int right_;
    std::vector<symbolic::Word> words_;
    std::map<symbolic::Word, BoxId> index_;
};

/// Uniform n x n grid of squares of side 1/n on the torus.
class ToralBoxes {
public:
    using Point = toral::TorusPoint;

    ToralBoxes(toral::ToralMap map, int per_side);
    /// Accepts a side length that must be 1/n for an integer n >= 2.
    static ToralBoxes from_resolution(const toral::ToralMap& map, double resolution);
    /// Box side small enough that any points of the boxes along a path of
    /// the graph built with the returned delta form a delta-chain.
    static std::pair<ToralBoxes, double> for_chain_delta(const toral::ToralMap& map, double delta);

    std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
    BoxCover cover() const;
    const toral::ToralMap& map() const { return map_; }
    SystemContract<Point> contract() const { return map_.contract(); }
    int per_side() const { return n_; }

    BoxId box_of(const Point& p) const;
    Point representative(BoxId b) const;
    std::pair<double, double> center(BoxId b) const;
    double diameter() const { return 1.0 / n_; }
    /// Jump bound for any points of the boxes along a graph path.
    double chain_slack(double delta) const { return (map_.operator_norm() + 1.0) / n_ + delta; }

    /// Boxes meeting the delta-inflated exact image of box b.
    std::vector<BoxId> successors(BoxId b, double delta) const;
    std::vector<std::vector<BoxId>> successor_lists(double delta) const;

private:
    toral::ToralMap map_;
    int n_;
};

template <class Model>
TransitionGraph build_transition_graph(const Model& model, double delta)
{
    if (!(delta >= 0.0)) throw ConfigurationError("delta must be nonnegative");
    TransitionGraph g;
    g.cover = model.cover();
    g.delta = delta;
    g.successors = model.successor_lists(delta);
    return g;
}

struct ChainComponentResult {
    std::vector<std::size_t> scc_id;
    std::size_t component_count = 0;
    std::vector<std::size_t> component_sizes;
    /// Box lies in a component carrying a cycle (size > 1 or self-loop).
    std::vector<bool> recurrent;

    std::size_t recurrent_count() const
    {
        return static_cast<std::size_t>(std::count(recurrent.begin(), recurrent.end(), true));
    }
};

/// Linear-time SCC decomposition; ids ordered by each component's smallest box.
ChainComponentResult chain_components(const TransitionGraph& graph);

struct TransitivityReport {
    bool transitive = false;
    std::size_t component_count = 0;
    std::size_t recurrent_boxes = 0;
    std::string caveat;
};

TransitivityReport is_chain_transitive(const TransitionGraph& graph);

struct RefinementLevel {
    double resolution = 0.0;
    std::size_t boxes = 0;
    std::size_t components = 0;
    std::size_t recurrent_boxes = 0;
    /// Recurrent boxes times box measure, an over-approximation of CR(f).
    double recurrent_measure = 0.0;
};

/// Halves the box diameter at each level and reports the components.
std::vector<RefinementLevel> refine_toral(const toral::ToralMap& map, int per_side, double delta, int levels);
std::vector<RefinementLevel> refine_symbolic(const symbolic::SftSystem& system, int depth, double delta,
                                             int levels);

template <class P>
struct ProximalWitness {
    P x;
    P y;
    double delta = 0.0;
    std::size_t m = 0;
    Chain<P> xx, xy, yx, yy;
};

template <class P>
struct ProximalSearchResult {
    P x;
    P y;
    std::vector<ProximalWitness<P>> witnesses;
    /// The pair straddles several components of the graph; the relation is
    /// then only defined by extension.
    bool extension_semantics = false;
};

namespace detail {

std::vector<BoxId> backtrack(const std::vector<std::vector<BoxId>>& preds, const std::vector<std::vector<bool>>& layers,
                             BoxId target, std::size_t len);

/// Layer[t] = boxes reachable from the sources in exactly t steps, grown
/// until all four (source, target) incidences hold at a common t or the
/// layer pair repeats.
std::size_t common_length(const TransitionGraph& graph, BoxId bx, BoxId by, std::size_t max_len,
                          std::vector<std::vector<bool>>& lx, std::vector<std::vector<bool>>& ly);

} // namespace detail

/// Smallest m <= max_len with all four box paths of length exactly m,
/// realized by concrete points and checked as delta-chains.
template <class Model>
std::optional<ProximalWitness<typename Model::Point>>
proximal_witness(const Model& model, const TransitionGraph& graph, double delta, const typename Model::Point& x,
                 const typename Model::Point& y, std::size_t max_len)
{
    using P = typename Model::Point;
    const BoxId bx = model.box_of(x);
    const BoxId by = model.box_of(y);
    std::vector<std::vector<bool>> lx, ly;
    const std::size_t m = detail::common_length(graph, bx, by, max_len, lx, ly);
    if (m == 0) return std::nullopt;

    const auto preds = graph.predecessors();
    const auto contract = model.contract();
    auto realize = [&](const P& from, const std::vector<std::vector<bool>>& layers, const P& to, BoxId tb) {
        const auto boxes = detail::backtrack(preds, layers, tb, m);
        Chain<P> c{contract.system_id, {}, delta};
        c.points.reserve(m + 1);
        c.points.push_back(from);
        for (std::size_t i = 1; i < m; ++i) c.points.push_back(model.representative(boxes[i]));
        c.points.push_back(to);
        if (!is_chain(contract, c)) throw InternalError("box path does not realize a delta-chain");
        return c;
    };
    ProximalWitness<P> w{x, y, delta, m, {}, {}, {}, {}};
    w.xx = realize(x, lx, x, bx);
    w.xy = realize(x, lx, y, by);
    w.yx = realize(y, ly, x, bx);
    w.yy = realize(y, ly, y, by);
    return w;
}

/// Verifies the equal-length condition for a stored witness.
template <class P>
bool verify_proximal_witness(const SystemContract<P>& system, const ProximalWitness<P>& w)
{
    auto ok = [&](const Chain<P>& c, const P& a, const P& b) {
        return c.steps() == w.m && c.delta <= w.delta && system.metric(c.front(), a) == 0.0 &&
               system.metric(c.back(), b) == 0.0 && is_chain(system, c);
    };
    return w.m >= 1 && ok(w.xx, w.x, w.x) && ok(w.xy, w.x, w.y) && ok(w.yx, w.y, w.x) && ok(w.yy, w.y, w.y);
}

/// Tries candidate pairs (i < j; a single candidate is paired with itself)
/// and returns the first pair with a witness for every delta.
template <class Model, class Factory>
std::optional<ProximalSearchResult<typename Model::Point>>
find_chain_proximal_pair(const Factory& model_for_delta, const std::vector<typename Model::Point>& candidates,
                         const std::vector<double>& delta_list, std::size_t max_len = 4096)
{
    using P = typename Model::Point;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (candidates.size() == 1) pairs.emplace_back(0, 0);
    for (std::size_t i = 0; i < candidates.size(); ++i)
        for (std::size_t j = i + 1; j < candidates.size(); ++j) pairs.emplace_back(i, j);

    for (const auto& [i, j] : pairs) {
        ProximalSearchResult<P> result{candidates[i], candidates[j], {}, false};
        bool all = true;
        for (double delta : delta_list) {
            if (!(delta > 0.0)) throw DomainError("proximal search needs positive deltas");
            const auto [model, graph_delta] = model_for_delta(delta);
            const TransitionGraph graph = build_transition_graph(model, graph_delta);
            const auto comps = chain_components(graph);
            if (comps.scc_id[model.box_of(candidates[i])] != comps.scc_id[model.box_of(candidates[j])] ||
                comps.component_count != 1)
                result.extension_semantics = true;
            auto w = proximal_witness(model, graph, delta, candidates[i], candidates[j], max_len);
            if (!w) {
                all = false;
                break;
            }
            result.witnesses.push_back(std::move(*w));
        }
        if (all) return result;
    }
    return std::nullopt;
}

struct LimitSetResult {
    std::optional<std::size_t> omega_component;
    std::optional<std::size_t> alpha_component;
    bool resolved() const { return omega_component && alpha_component; }
};

/// Components of the boxes visited by f^i(p) for i in [N, 2N] and [-2N, -N].
template <class Model>
LimitSetResult limit_set_component(const Model& model, const ChainComponentResult& comps,
                                   const typename Model::Point& p, Index n_tail)
{
    const auto contract = model.contract();
    auto tail_id = [&](Index sign) -> std::optional<std::size_t> {
        auto q = contract.iterate(p, sign * n_tail);
        std::optional<std::size_t> id;
        for (Index i = n_tail; i <= 2 * n_tail; ++i) {
            const std::size_t c = comps.scc_id[model.box_of(q)];
            if (id && *id != c) return std::nullopt;
            id = c;
            q = sign > 0 ? contract.forward(q) : contract.backward(q);
        }
        return id;
    };
    return {tail_id(1), tail_id(-1)};
}

} // namespace chaoslab::chain
