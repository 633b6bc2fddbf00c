#include "chaoslab/chain_analysis.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

namespace chaoslab::chain {

std::size_t TransitionGraph::edge_count() const
{
    std::size_t n = 0;
    for (const auto& s : successors) n += s.size();
    return n;
}

bool TransitionGraph::has_edge(BoxId from, BoxId to) const
{
    const auto& s = successors.at(from);
    return std::binary_search(s.begin(), s.end(), to);
}

std::vector<std::vector<BoxId>> TransitionGraph::predecessors() const
{
    std::vector<std::vector<BoxId>> preds(successors.size());
    for (std::size_t b = 0; b < successors.size(); ++b) {
        for (BoxId s : successors[b]) preds[s].push_back(static_cast<BoxId>(b));
    }
    return preds;
}

// ---------------------------------------------------------------------------
// Symbolic cylinders

SymbolicBoxes::SymbolicBoxes(symbolic::SftSystem system, int depth)
    : system_(std::move(system)), depth_(depth), left_((depth - 1) / 2), right_(depth - 1 - (depth - 1) / 2)
{
    if (depth < 1 || depth > 24) throw ConfigurationError("cylinder depth must be in [1, 24]");
    words_ = system_.admissible_words(depth);
    if (words_.size() > (1u << 22)) throw ConfigurationError("cylinder cover too large");
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], static_cast<BoxId>(i));
}

std::pair<SymbolicBoxes, double> SymbolicBoxes::for_chain_delta(const symbolic::SftSystem& system, double delta)
{
    const double d = symbolic::round_down_dyadic(std::min(delta, 0.5));
    const int t = *symbolic::dyadic_exponent(d);
    return {SymbolicBoxes(system, 2 * t + 1), d};
}

BoxCover SymbolicBoxes::cover() const
{
    return {system_.name(), static_cast<double>(depth_), words_.size(), diameter()};
}

double SymbolicBoxes::diameter() const { return std::ldexp(1.0, -(left_ + 1)); }

BoxId SymbolicBoxes::box_of(const Point& p) const
{
    const auto it = index_.find(p.window(-left_, right_));
    if (it == index_.end()) throw DomainError("point is outside the subshift");
    return it->second;
}

SymbolicBoxes::Point SymbolicBoxes::representative(BoxId b) const { return system_.extend(words_.at(b), -left_); }

std::pair<double, double> SymbolicBoxes::center(BoxId b) const
{
    // Future coordinates on the x axis, past ones on the y axis.
    const auto& w = words_.at(b);
    const double a = system_.alphabet_size();
    double cx = 0.0, cy = 0.0, scale = 1.0 / a;
    for (int c = 0; c <= right_; ++c, scale /= a) cx += w[static_cast<std::size_t>(c + left_)] * scale;
    cx += 0.5 * scale * a;
    scale = 1.0 / a;
    for (int c = 1; c <= left_; ++c, scale /= a) cy += w[static_cast<std::size_t>(left_ - c)] * scale;
    cy += 0.5 * scale * a;
    return {cx, cy};
}

std::vector<std::vector<BoxId>> SymbolicBoxes::successor_lists(double delta) const
{
    // d(sigma p, q) <= delta  iff  agreement on |i| <= T.
    int t_radius;
    if (delta >= 1.0) t_radius = -1;
    else if (delta <= 0.0) t_radius = 1 << 20;
    else t_radius = static_cast<int>(std::ceil(-std::log2(delta))) - 1;
    const int lo = std::max(-left_, -t_radius);
    const int hi = std::min(right_ - 1, t_radius);

    auto key_of_target = [&](const symbolic::Word& v) {
        symbolic::Word k;
        for (int c = lo; c <= hi; ++c) k.push_back(v[static_cast<std::size_t>(c + left_)]);
        return k;
    };
    auto key_of_source = [&](const symbolic::Word& u) {
        symbolic::Word k;
        for (int c = lo; c <= hi; ++c) k.push_back(u[static_cast<std::size_t>(c + 1 + left_)]);
        return k;
    };
    std::map<symbolic::Word, std::vector<BoxId>> buckets;
    for (std::size_t j = 0; j < words_.size(); ++j) buckets[key_of_target(words_[j])].push_back(static_cast<BoxId>(j));

    const bool right_link = t_radius >= right_;
    const bool left_link = t_radius >= left_ + 1;
    std::vector<std::vector<BoxId>> out(words_.size());
    parallel_for(words_.size(), [&](std::size_t i) {
        const auto& u = words_[i];
        const auto it = buckets.find(key_of_source(u));
        if (it == buckets.end()) return;
        for (BoxId j : it->second) {
            const auto& v = words_[j];
            if (right_link && !system_.allowed(u.back(), v.back())) continue;
            if (left_link && !system_.allowed(u.front(), v.front())) continue;
            out[i].push_back(j);
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Torus grid

ToralBoxes::ToralBoxes(toral::ToralMap map, int per_side) : map_(std::move(map)), n_(per_side)
{
    if (per_side < 2) throw ConfigurationError("resolution too coarse to build a cover");
    if (per_side > 2048) throw ConfigurationError("resolution too fine (more than 2048 boxes per side)");
}

ToralBoxes ToralBoxes::from_resolution(const toral::ToralMap& map, double resolution)
{
    if (!(resolution > 0.0)) throw ConfigurationError("resolution must be positive");
    const double inv = 1.0 / resolution;
    const long n = std::lround(inv);
    if (std::fabs(inv - static_cast<double>(n)) > 1e-9 * inv)
        throw ConfigurationError("toral resolution must be 1/n for an integer n");
    return ToralBoxes(map, static_cast<int>(n));
}

std::pair<ToralBoxes, double> ToralBoxes::for_chain_delta(const toral::ToralMap& map, double delta)
{
    const double spread = map.operator_norm() + 1.0;
    const int n = std::max(2, static_cast<int>(std::ceil(2.0 * spread / delta)));
    ToralBoxes boxes(map, n);
    const double graph_delta = delta - spread / n;
    return {std::move(boxes), graph_delta};
}

BoxCover ToralBoxes::cover() const { return {map_.name(), 1.0 / n_, size(), 1.0 / n_}; }

BoxId ToralBoxes::box_of(const Point& p) const
{
    const int i = std::min(n_ - 1, static_cast<int>(p.x * n_));
    const int j = std::min(n_ - 1, static_cast<int>(p.y * n_));
    return static_cast<BoxId>(i + n_ * j);
}

ToralBoxes::Point ToralBoxes::representative(BoxId b) const
{
    const auto [cx, cy] = center(b);
    return {cx, cy};
}

std::pair<double, double> ToralBoxes::center(BoxId b) const
{
    const int i = static_cast<int>(b % static_cast<BoxId>(n_));
    const int j = static_cast<int>(b / static_cast<BoxId>(n_));
    return {(i + 0.5) / n_, (j + 0.5) / n_};
}

std::vector<BoxId> ToralBoxes::successors(BoxId b, double delta) const
{
    const double h = 1.0 / n_;
    const int bi = static_cast<int>(b % static_cast<BoxId>(n_));
    const int bj = static_cast<int>(b / static_cast<BoxId>(n_));
    const Eigen::Vector2d origin = map_.linear({bi * h, bj * h});
    const Eigen::Vector2d e1 = map_.linear({h, 0.0});
    const Eigen::Vector2d e2 = map_.linear({0.0, h});
    const std::array<Eigen::Vector2d, 4> corners{origin, origin + e1, origin + e2, origin + e1 + e2};

    const std::array<Eigen::Vector2d, 4> axes{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1),
                                              Eigen::Vector2d(-e1[1], e1[0]), Eigen::Vector2d(-e2[1], e2[0])};
    std::array<std::pair<double, double>, 4> image_extent;
    for (std::size_t a = 0; a < 4; ++a) {
        double lo = corners[0].dot(axes[a]), hi = lo;
        for (const auto& c : corners) {
            lo = std::min(lo, c.dot(axes[a]));
            hi = std::max(hi, c.dot(axes[a]));
        }
        image_extent[a] = {lo, hi};
    }
    constexpr double slack = 1e-12;

    const int i0 = static_cast<int>(std::floor((image_extent[0].first - delta) * n_)) - 1;
    const int i1 = static_cast<int>(std::floor((image_extent[0].second + delta) * n_)) + 1;
    const int j0 = static_cast<int>(std::floor((image_extent[1].first - delta) * n_)) - 1;
    const int j1 = static_cast<int>(std::floor((image_extent[1].second + delta) * n_)) + 1;

    std::vector<BoxId> out;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            // Target square (lifted) inflated by delta; separating-axis test.
            const double x0 = i * h - delta, x1 = (i + 1) * h + delta;
            const double y0 = j * h - delta, y1 = (j + 1) * h + delta;
            const std::array<Eigen::Vector2d, 4> rect{Eigen::Vector2d(x0, y0), Eigen::Vector2d(x1, y0),
                                                      Eigen::Vector2d(x0, y1), Eigen::Vector2d(x1, y1)};
            bool overlap = true;
            for (std::size_t a = 0; a < 4 && overlap; ++a) {
                double lo = rect[0].dot(axes[a]), hi = lo;
                for (const auto& c : rect) {
                    lo = std::min(lo, c.dot(axes[a]));
                    hi = std::max(hi, c.dot(axes[a]));
                }
                const double tol = slack * (1.0 + axes[a].lpNorm<1>());
                overlap = lo <= image_extent[a].second + tol && image_extent[a].first <= hi + tol;
            }
            if (!overlap) continue;
            const int wi = ((i % n_) + n_) % n_;
            const int wj = ((j % n_) + n_) % n_;
            out.push_back(static_cast<BoxId>(wi + n_ * wj));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<BoxId>> ToralBoxes::successor_lists(double delta) const
{
    std::vector<std::vector<BoxId>> out(size());
    parallel_for(size(), [&](std::size_t b) { out[b] = successors(static_cast<BoxId>(b), delta); });
    return out;
}

// ---------------------------------------------------------------------------
// Components

ChainComponentResult chain_components(const TransitionGraph& graph)
{
    const std::size_t n = graph.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), raw_id(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, components = 0;

    // Iterative Tarjan: frames of (vertex, next successor position).
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        frames.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, pos] = frames.back();
            const auto& succ = graph.successors[v];
            if (pos < succ.size()) {
                const std::size_t w = succ[pos++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                }
                else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    raw_id[w] = components;
                } while (w != v);
                ++components;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                const std::size_t parent = frames.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }

    // Renumber by smallest member.
    std::vector<std::size_t> remap(components, unvisited);
    std::size_t next = 0;
    ChainComponentResult out;
    out.scc_id.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (remap[raw_id[v]] == unvisited) remap[raw_id[v]] = next++;
        out.scc_id[v] = remap[raw_id[v]];
    }
    out.component_count = components;
    out.component_sizes.assign(components, 0);
    for (std::size_t v = 0; v < n; ++v) ++out.component_sizes[out.scc_id[v]];
    out.recurrent.assign(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (out.component_sizes[out.scc_id[v]] > 1 || graph.has_edge(static_cast<BoxId>(v), static_cast<BoxId>(v)))
            out.recurrent[v] = true;
    }
    return out;
}

TransitivityReport is_chain_transitive(const TransitionGraph& graph)
{
    const auto comps = chain_components(graph);
    TransitivityReport r;
    r.component_count = comps.component_count;
    r.recurrent_boxes = comps.recurrent_count();
    r.transitive = comps.component_count == 1 && r.recurrent_boxes == graph.size();
    r.caveat = "granularity-dependent: strong connectivity of the box graph at resolution " +
               std::to_string(graph.cover.resolution) + " and delta " + std::to_string(graph.delta) +
               "; a finer cover may split components";
    return r;
}

namespace {

template <class Model>
RefinementLevel level_of(const Model& model, double delta, double measure)
{
    const auto g = build_transition_graph(model, delta);
    const auto c = chain_components(g);
    return {g.cover.resolution, g.size(), c.component_count, c.recurrent_count(), c.recurrent_count() * measure};
}

} // namespace

std::vector<RefinementLevel> refine_toral(const toral::ToralMap& map, int per_side, double delta, int levels)
{
    std::vector<RefinementLevel> out;
    for (int k = 0; k < levels; ++k, per_side *= 2) {
        const double h = 1.0 / per_side;
        out.push_back(level_of(ToralBoxes(map, per_side), delta, h * h));
    }
    return out;
}

std::vector<RefinementLevel> refine_symbolic(const symbolic::SftSystem& system, int depth, double delta, int levels)
{
    std::vector<RefinementLevel> out;
    for (int k = 0; k < levels; ++k, depth += 2) {
        out.push_back(level_of(SymbolicBoxes(system, depth), delta,
                               std::pow(static_cast<double>(system.alphabet_size()), -depth)));
    }
    return out;
}

namespace detail {

std::vector<BoxId> backtrack(const std::vector<std::vector<BoxId>>& preds, const std::vector<std::vector<bool>>& layers,
                             BoxId target, std::size_t len)
{
    std::vector<BoxId> path(len + 1);
    path[len] = target;
    for (std::size_t t = len; t-- > 0;) {
        bool found = false;
        BoxId best = 0;
        for (BoxId p : preds[path[t + 1]]) {
            if (layers[t][p] && (!found || p < best)) {
                best = p;
                found = true;
            }
        }
        if (!found) throw InternalError("reachability layers are inconsistent");
        path[t] = best;
    }
    return path;
}

std::size_t common_length(const TransitionGraph& graph, BoxId bx, BoxId by, std::size_t max_len,
                          std::vector<std::vector<bool>>& lx, std::vector<std::vector<bool>>& ly)
{
    const std::size_t n = graph.size();
    lx.assign(1, std::vector<bool>(n, false));
    ly.assign(1, std::vector<bool>(n, false));
    lx[0][bx] = true;
    ly[0][by] = true;

    auto step = [&](std::vector<std::vector<bool>>& layers) {
        std::vector<bool> next(n, false);
        const auto& cur = layers.back();
        for (std::size_t b = 0; b < n; ++b) {
            if (!cur[b]) continue;
            for (BoxId s : graph.successors[b]) next[s] = true;
        }
        layers.push_back(std::move(next));
    };

    // The pair of layers evolves deterministically; a repeat means no new
    // lengths can appear.
    std::unordered_multimap<std::size_t, std::size_t> seen;
    const std::hash<std::vector<bool>> hasher;
    for (std::size_t len = 1; len <= max_len; ++len) {
        step(lx);
        step(ly);
        const auto& ax = lx[len];
        const auto& ay = ly[len];
        if (ax[bx] && ax[by] && ay[bx] && ay[by]) return len;
        const std::size_t h = hasher(ax) * 1000003u ^ hasher(ay);
        auto [it, end] = seen.equal_range(h);
        for (; it != end; ++it) {
            if (lx[it->second] == ax && ly[it->second] == ay) return 0;
        }
        seen.emplace(h, len);
    }
    return 0;
}

} // namespace detail

} // namespace chaoslab::chain
