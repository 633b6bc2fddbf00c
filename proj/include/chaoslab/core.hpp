#pragma once

// System-agnostic contracts: metric dynamical systems given by a
// homeomorphism and its inverse, finite windows of pseudo-orbits, chains,
// and the plateau test function used by the Bohr certificate.

#include "chaoslab/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab {

using Index = std::int64_t;

template <class P>
struct SystemContract {
    std::string system_id;
    std::function<P(const P&)> forward;
    std::function<P(const P&)> backward;
    std::function<double(const P&, const P&)> metric;
    double diameter_bound = 1.0;
    std::optional<double> expansive_constant;
    /// metric(f p, f q) <= lipschitz_bound * metric(p, q)
    double lipschitz_bound = 1.0;
    /// Slack used by every "<= delta" comparison: 0 for exact systems.
    double comparison_tolerance = 0.0;

    P iterate(P p, Index n) const
    {
        for (; n > 0; --n) p = forward(p);
        for (; n < 0; ++n) p = backward(p);
        return p;
    }

    bool within(double distance, double bound) const { return distance <= bound + comparison_tolerance; }
};

/// Finite window (x_i), i_min <= i <= i_max, of a pseudo-orbit.
template <class P>
struct PseudoOrbit {
    std::string system_id;
    Index i_min = 0;
    std::vector<P> points;
    double delta = 0.0;

    Index i_max() const { return i_min + static_cast<Index>(points.size()) - 1; }
    Index size() const { return static_cast<Index>(points.size()); }
    bool contains(Index i) const { return i >= i_min && i <= i_max(); }
    const P& at(Index i) const { return points.at(static_cast<std::size_t>(i - i_min)); }
    P& at(Index i) { return points.at(static_cast<std::size_t>(i - i_min)); }
};

/// (x_0, ..., x_k), k >= 1.
template <class P>
struct Chain {
    std::string system_id;
    std::vector<P> points;
    double delta = 0.0;

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
    const P& front() const { return points.front(); }
    const P& back() const { return points.back(); }
};

template <class P>
struct BumpFunctionSpec {
    P center_x;
    P center_y;
    double epsilon = 0.0;
};

/// Radial profile: 1 on [0, eps], linear down to 0 on [eps, 2 eps], 0 beyond.
double bump(double t, double epsilon);

/// Largest consecutive defect metric(f(x_i), x_{i+1}) over the window.
template <class P>
double max_defect(const SystemContract<P>& system, const std::vector<P>& points)
{
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        worst = std::max(worst, system.metric(system.forward(points[i]), points[i + 1]));
    return worst;
}

template <class P>
void require_same_system(const SystemContract<P>& system, const std::string& id)
{
    if (id != system.system_id)
        throw ConfigurationError("unknown system id '" + id + "' (expected '" + system.system_id + "')");
}

template <class P>
bool is_pseudo_orbit(const SystemContract<P>& system, const PseudoOrbit<P>& po)
{
    require_same_system(system, po.system_id);
    for (std::size_t i = 0; i + 1 < po.points.size(); ++i) {
        if (!system.within(system.metric(system.forward(po.points[i]), po.points[i + 1]), po.delta))
            return false;
    }
    return true;
}

template <class P>
bool is_chain(const SystemContract<P>& system, const Chain<P>& chain)
{
    require_same_system(system, chain.system_id);
    if (chain.points.size() < 2) return false;
    for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
        if (!system.within(system.metric(system.forward(chain.points[i]), chain.points[i + 1]), chain.delta))
            return false;
    }
    return true;
}

/// Joins a chain ending at w with a chain starting at w.
template <class P>
Chain<P> concatenate(const Chain<P>& first, const Chain<P>& second)
{
    if (first.system_id != second.system_id) throw ConfigurationError("chains from different systems");
    if (first.points.empty() || second.points.empty() || !(first.back() == second.front()))
        throw DomainError("chains do not share an endpoint");
    Chain<P> out{first.system_id, first.points, std::max(first.delta, second.delta)};
    out.points.insert(out.points.end(), second.points.begin() + 1, second.points.end());
    return out;
}

template <class P>
PseudoOrbit<P> orbit_window(const SystemContract<P>& system, const P& p, Index i_min, Index i_max)
{
    if (i_min > 0 || i_max < 0) throw DomainError("orbit window must contain index 0");
    PseudoOrbit<P> po{system.system_id, i_min, {}, 0.0};
    po.points.resize(static_cast<std::size_t>(i_max - i_min + 1), p);
    for (Index i = 1; i <= i_max; ++i) po.at(i) = system.forward(po.at(i - 1));
    for (Index i = -1; i >= i_min; --i) po.at(i) = system.backward(po.at(i + 1));
    return po;
}

/// sup_i metric(x_i, f^i(p)) <= epsilon, iterating p directly.
template <class P>
bool is_shadowed_by(const SystemContract<P>& system, const PseudoOrbit<P>& po, const P& p, double epsilon)
{
    require_same_system(system, po.system_id);
    if (po.points.empty()) return true;
    P current = system.iterate(p, po.i_min);
    for (Index i = po.i_min; i <= po.i_max(); ++i) {
        if (!system.within(system.metric(po.at(i), current), epsilon)) return false;
        if (i < po.i_max()) current = system.forward(current);
    }
    return true;
}

/// Same check against an explicitly stored orbit. The orbit must itself be
/// a true orbit up to the system's comparison tolerance on every step; this
/// is how shadowing is certified where direct iteration is numerically
/// unstable (expanding floating-point maps).
template <class P>
bool is_shadowed_by_orbit(const SystemContract<P>& system, const PseudoOrbit<P>& po, const PseudoOrbit<P>& orbit,
                          double epsilon)
{
    require_same_system(system, po.system_id);
    require_same_system(system, orbit.system_id);
    if (orbit.i_min > po.i_min || orbit.i_max() < po.i_max()) return false;
    PseudoOrbit<P> true_orbit = orbit;
    true_orbit.delta = 0.0;
    if (!is_pseudo_orbit(system, true_orbit)) return false;
    for (Index i = po.i_min; i <= po.i_max(); ++i) {
        if (!system.within(system.metric(po.at(i), orbit.at(i)), epsilon)) return false;
    }
    return true;
}

/// The plateau function q -> bump(d(q, x)) - bump(d(q, y)).
template <class P>
class PlateauFunction {
public:
    PlateauFunction(const SystemContract<P>& system, BumpFunctionSpec<P> spec)
        : system_(&system), spec_(std::move(spec))
    {
        if (!(spec_.epsilon > 0.0)) throw ConstructionError("plateau radius must be positive");
        if (system.metric(spec_.center_x, spec_.center_y) < 3.0 * spec_.epsilon)
            throw ConstructionError("plateau centers closer than 3*epsilon");
    }

    double operator()(const P& q) const
    {
        return bump(system_->metric(q, spec_.center_x), spec_.epsilon) -
               bump(system_->metric(q, spec_.center_y), spec_.epsilon);
    }

    const BumpFunctionSpec<P>& spec() const { return spec_; }

private:
    const SystemContract<P>* system_;
    BumpFunctionSpec<P> spec_;
};

template <class P>
double phi(const SystemContract<P>& system, const P& q, const BumpFunctionSpec<P>& spec)
{
    return PlateauFunction<P>(system, spec)(q);
}

} // namespace chaoslab
