#pragma once

// Embedded horseshoes from a chain proximal pair (x, y): codings c over
// {x, y}, the pseudo-orbits Gamma_c built from the four equal-length chains,
// their shadows pi^-1(c) on a finite coding window, and the special points
// p, q, r handed to the Bohr certificate.

#include "chaoslab/bohr.hpp"
#include "chaoslab/chain_analysis.hpp"
#include "chaoslab/parallel.hpp"

#include <cmath>
#include <limits>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab::horseshoe {

using bohr::ShadowingModule;
using bohr::TailKind;
using bohr::Tails;

template <class P>
struct HorseshoeInput {
    std::string system_id;
    std::string c_description;
    /// Neighbourhood radius of C on which expansiveness and shadowing hold.
    double b = 0.0;
    /// Expansive constant on B_b(C).
    double e = 0.0;
    chain::ProximalWitness<P> proximal;
    std::function<bool(const P&)> in_c;
};

/// min{b, e/2, d(x, y)/3}.
template <class P>
double horseshoe_epsilon(const SystemContract<P>& sys, double b, double e, const P& x, const P& y)
{
    return std::min({b, e / 2.0, sys.metric(x, y) / 3.0});
}

/// Coding window [-W, W]; symbols outside it are x.
struct Coding {
    Index radius = 0;
    std::string word;

    static Coding from_index(Index radius, std::uint64_t bits);
    static Coding parse(const std::string& word);
    std::uint64_t index() const;
    char at(Index j) const;
    /// (sigma c)_j = c_{j+1}; defined on the window when c_{-W} = x.
    std::optional<Coding> shifted() const;
};

template <class P>
struct CodingEntry {
    Coding coding;
    P point;
    PseudoOrbit<P> orbit;
};

struct CodingChecks {
    bool shadow_tube = false;
    bool checkpoints = false;
    bool semiconjugacy = false;
    std::size_t semiconjugacy_pairs = 0;
    /// Largest d(f^m(pi^-1 c) at t, pi^-1(sigma c) at t) over all t.
    double semiconjugacy_error = 0.0;
    /// Same, at block checkpoints only; must stay <= 2 epsilon.
    double semiconjugacy_checkpoint_error = 0.0;
    bool separation = false;
    double min_separation = 0.0;
    double separation_bound = 0.0;

    bool passed() const { return shadow_tube && checkpoints && semiconjugacy && separation; }
};

template <class P>
struct CodingMap {
    Index radius = 0;
    Index m = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    Index block_lo = 0, block_hi = 0;
    /// Indexed by Coding::index().
    std::vector<CodingEntry<P>> entries;
    CodingChecks checks;

    const CodingEntry<P>& entry(const Coding& c) const { return entries.at(c.index()); }
};

template <class P>
struct SpecialPoints {
    P p, q, r;
    Index m = 0;
    /// max d(f^i q, O(p)), max d(f^i r, O(p)) over i = +-W m.
    double q_tail = 0.0, r_tail = 0.0;
    double tol = 0.0;
};

/// Checks the input's invariants and returns epsilon.
template <class P>
double validate_input(const ShadowingModule<P>& module, const HorseshoeInput<P>& in)
{
    const auto& sys = module.system;
    require_same_system(sys, in.system_id);
    const auto& w = in.proximal;
    if (!chain::verify_proximal_witness(sys, w)) throw ConstructionError("proximal witness fails verification");
    for (const auto* ch : {&w.xx, &w.xy, &w.yx, &w.yy}) {
        for (const auto& q : ch->points) {
            if (in.in_c && !in.in_c(q)) throw ConstructionError("proximal chain leaves C");
        }
    }
    const double eps = horseshoe_epsilon(sys, in.b, in.e, w.x, w.y);
    if (!(eps > 0.0)) throw ConstructionError("epsilon = min{b, e/2, d(x,y)/3} is not positive");
    if (w.delta > module.delta_for(eps)) throw ParameterError("proximal delta too large for epsilon-shadowing");
    return eps;
}

/// Gamma_c on blocks [block_lo, block_hi]: block j carries the chain from
/// c_j to c_{j+1} without its last point.
template <class P>
PseudoOrbit<P> build_gamma_c(const ShadowingModule<P>& module, const HorseshoeInput<P>& in, const Coding& c,
                             Index block_lo, Index block_hi)
{
    const auto& w = in.proximal;
    const Index m = static_cast<Index>(w.m);
    PseudoOrbit<P> g{module.system.system_id, block_lo * m, {}, w.delta};
    g.points.reserve(static_cast<std::size_t>((block_hi - block_lo + 1) * m));
    for (Index j = block_lo; j <= block_hi; ++j) {
        const char a = c.at(j), b = c.at(j + 1);
        const auto& ch = a == 'x' ? (b == 'x' ? w.xx : w.xy) : (b == 'x' ? w.yx : w.yy);
        g.points.insert(g.points.end(), ch.points.begin(), ch.points.end() - 1);
    }
    if (!is_pseudo_orbit(module.system, g)) throw InternalError("Gamma_c is not a delta-pseudo-orbit");
    if (in.in_c) {
        for (const auto& q : g.points) {
            if (!in.in_c(q)) throw InternalError("Gamma_c leaves C");
        }
    }
    return g;
}

/// Shadow of Gamma_c with x-blocks continuing periodically on both sides.
template <class P>
bohr::ShadowResult<P> shadow_coding(const ShadowingModule<P>& module, const HorseshoeInput<P>& in, double epsilon,
                                    const Coding& c, Index block_lo, Index block_hi)
{
    if (block_lo > -c.radius - 2 || block_hi < c.radius + 1) throw DomainError("block window too narrow for the coding");
    const auto g = build_gamma_c(module, in, c, block_lo, block_hi);
    auto s = module.shadow(g, epsilon, Tails{TailKind::periodic, static_cast<Index>(in.proximal.m)});
    if (!is_shadowed_by_orbit(module.system, g, s.orbit, epsilon))
        throw InternalError("shadow leaves the epsilon-tube of Gamma_c");
    return s;
}

template <class P>
CodingMap<P> build_coding_map(const ShadowingModule<P>& module, const HorseshoeInput<P>& in, Index radius,
                              std::uint64_t budget = 1u << 16)
{
    const auto& sys = module.system;
    const double eps = validate_input(module, in);
    if (radius < 0 || radius > 30) throw ConfigurationError("window radius must be in [0, 30]");
    const std::uint64_t count = std::uint64_t{1} << (2 * radius + 1);
    if (count > budget)
        throw ConfigurationError("coding budget exceeded: window radius " + std::to_string(radius) + " needs " +
                                 std::to_string(count) + " entries, budget is " + std::to_string(budget));

    CodingMap<P> map;
    map.radius = radius;
    map.m = static_cast<Index>(in.proximal.m);
    map.epsilon = eps;
    map.delta = in.proximal.delta;
    map.block_lo = -radius - 2;
    map.block_hi = radius + 1;
    const Index m = map.m;
    const P& x = in.proximal.x;
    const P& y = in.proximal.y;

    std::vector<std::optional<CodingEntry<P>>> slots(count);
    std::vector<char> tube(count, 0), marks(count, 0);
    parallel_for(count, [&](std::size_t i) {
        const Coding c = Coding::from_index(radius, i);
        auto s = shadow_coding(module, in, eps, c, map.block_lo, map.block_hi);
        tube[i] = 1;
        bool ok = true;
        for (Index j = map.block_lo; j <= map.block_hi; ++j)
            ok = ok && sys.within(sys.metric(s.orbit.at(j * m), c.at(j) == 'x' ? x : y), eps);
        marks[i] = ok;
        slots[i].emplace(CodingEntry<P>{c, s.orbit.at(0), std::move(s.orbit)});
    });
    map.entries.reserve(count);
    for (auto& s : slots) map.entries.push_back(std::move(*s));
    map.checks.shadow_tube = std::all_of(tube.begin(), tube.end(), [](char v) { return v != 0; });
    map.checks.checkpoints = std::all_of(marks.begin(), marks.end(), [](char v) { return v != 0; });

    // Semiconjugacy on the window.
    auto& ck = map.checks;
    ck.semiconjugacy = true;
    const Index t_lo = map.block_lo * m;
    const Index t_hi = (map.block_hi + 1) * m - 1 - m;
    for (const auto& e : map.entries) {
        const auto sc = e.coding.shifted();
        if (!sc) continue;
        const auto& f = map.entry(*sc);
        ++ck.semiconjugacy_pairs;
        for (Index t = t_lo; t <= t_hi; ++t) {
            const double d = sys.metric(e.orbit.at(t + m), f.orbit.at(t));
            ck.semiconjugacy_error = std::max(ck.semiconjugacy_error, d);
            if (t % m == 0) ck.semiconjugacy_checkpoint_error = std::max(ck.semiconjugacy_checkpoint_error, d);
        }
    }
    ck.semiconjugacy = ck.semiconjugacy_error <= module.point_tolerance &&
                       ck.semiconjugacy_checkpoint_error <= 2.0 * eps;

    // Injectivity surrogate.
    ck.separation_bound = sys.metric(x, y) - 2.0 * eps;
    std::vector<std::vector<P>> marks_at(count);
    for (std::size_t i = 0; i < count; ++i) {
        for (Index j = -radius; j <= radius; ++j) marks_at[i].push_back(map.entries[i].orbit.at(j * m));
    }
    std::vector<double> row_min(count, std::numeric_limits<double>::infinity());
    parallel_for(count, [&](std::size_t i) {
        for (std::size_t k = i + 1; k < count; ++k) {
            double best = 0.0;
            for (std::size_t t = 0; t < marks_at[i].size(); ++t) best = std::max(best, sys.metric(marks_at[i][t], marks_at[k][t]));
            row_min[i] = std::min(row_min[i], best);
        }
    });
    ck.min_separation = count > 1 ? *std::min_element(row_min.begin(), row_min.end()) : ck.separation_bound;
    ck.separation = ck.separation_bound > 0.0 && ck.min_separation >= ck.separation_bound - sys.comparison_tolerance;
    return map;
}

/// rate^((W-2) m): how close q and r must come to O(p) at i = +-W m.
template <class P>
double membership_tolerance(const ShadowingModule<P>& module, const CodingMap<P>& map)
{
    return std::pow(module.contraction_rate, static_cast<double>((map.radius - 2) * map.m));
}

/// p, q, r for the codings A (all x), B (y at block 0), C (y at blocks 0, 1).
/// A nonpositive tol selects membership_tolerance().
template <class P>
SpecialPoints<P> special_points(const ShadowingModule<P>& module, const CodingMap<P>& map, double tol = 0.0)
{
    const auto& sys = module.system;
    if (map.radius < 2) throw ConfigurationError("special points need window radius >= 2");
    const Index W = map.radius, m = map.m;
    std::string a(static_cast<std::size_t>(2 * W + 1), 'x');
    std::string b = a, c = a;
    b[static_cast<std::size_t>(W)] = 'y';
    c[static_cast<std::size_t>(W)] = c[static_cast<std::size_t>(W + 1)] = 'y';
    const auto& ea = map.entry(Coding::parse(a));
    const auto& eb = map.entry(Coding::parse(b));
    const auto& ec = map.entry(Coding::parse(c));

    if (!(tol > 0.0)) tol = membership_tolerance(module, map);
    SpecialPoints<P> sp{ea.point, eb.point, ec.point, m, 0.0, 0.0, tol};
    if (!(sys.metric(ea.orbit.at(m), sp.p) <= module.point_tolerance))
        throw ConstructionError("f^m(p) != p");
    if (!(sys.metric(sp.q, sp.r) > 0.0)) throw ConstructionError("q = r");
    auto dist_to_orbit = [&](const P& u) {
        double best = std::numeric_limits<double>::infinity();
        for (Index t = 0; t < m; ++t) best = std::min(best, sys.metric(u, ea.orbit.at(t)));
        return best;
    };
    for (Index t = 0; t < m; ++t) {
        if (!(sys.metric(sp.q, ea.orbit.at(t)) > 0.0) || !(sys.metric(sp.r, ea.orbit.at(t)) > 0.0))
            throw ConstructionError("q or r lies on the orbit of p");
    }
    sp.q_tail = std::max(dist_to_orbit(eb.orbit.at(W * m)), dist_to_orbit(eb.orbit.at(-W * m)));
    sp.r_tail = std::max(dist_to_orbit(ec.orbit.at(W * m)), dist_to_orbit(ec.orbit.at(-W * m)));
    if (!(sp.q_tail <= tol) || !(sp.r_tail <= tol))
        throw ConstructionError("q or r not within tol of O(p) at i = +-W m");
    return sp;
}

/// S = O(p), x := q, y := r, with orbits stored over [-n_window - 2m, n_window + 2m].
template <class P>
bohr::Theorem1Input<P> theorem2_to_corollary1(const ShadowingModule<P>& module, const HorseshoeInput<P>& in,
                                              const CodingMap<P>& map, const bohr::SignSequenceSpec& a,
                                              Index n_max, Index n_window, double tol)
{
    const Index m = map.m;
    const Index pad = std::max((n_window + m - 1) / m + 3, map.radius + 2);
    auto orbit_of = [&](const std::string& word) {
        const Coding c = Coding::parse(word);
        return shadow_coding(module, in, map.epsilon, c, -pad, pad).orbit;
    };
    const auto W = map.radius;
    std::string a_word(static_cast<std::size_t>(2 * W + 1), 'x');
    std::string b_word = a_word, c_word = a_word;
    b_word[static_cast<std::size_t>(W)] = 'y';
    c_word[static_cast<std::size_t>(W)] = c_word[static_cast<std::size_t>(W + 1)] = 'y';
    const auto op = orbit_of(a_word);
    bohr::Theorem1Input<P> out;
    out.system_id = module.system.system_id;
    // S lists O(p) once, at its least period.
    out.S.push_back(op.at(0));
    for (Index t = 1; t < m && module.system.metric(op.at(t), op.at(0)) > module.point_tolerance; ++t)
        out.S.push_back(op.at(t));
    out.x = bohr::track_window(orbit_of(b_word));
    out.y = bohr::track_window(orbit_of(c_word));
    out.a = a;
    out.n_max = n_max;
    out.n_window = n_window;
    out.tol = tol;
    return out;
}

/// Golden-mean style input: b = 1, e = 1/2 and a proximal witness at the
/// dyadic delta of epsilon.
HorseshoeInput<symbolic::BiInfSeq> symbolic_input(const symbolic::SftSystem& system, const symbolic::BiInfSeq& x,
                                                  const symbolic::BiInfSeq& y, std::size_t max_len = 4096);
/// The whole torus as C: b = 1/2, e = 1 / (2 ||A||).
HorseshoeInput<toral::TorusPoint> toral_input(const toral::ToralMap& map, const toral::TorusPoint& x,
                                              const toral::TorusPoint& y, std::size_t max_len = 4096);

} // namespace chaoslab::horseshoe
