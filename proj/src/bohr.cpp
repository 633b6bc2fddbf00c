#include "chaoslab/bohr.hpp"

#include <cstdio>

namespace chaoslab::bohr {

namespace detail {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace detail

bool HypothesisReport::passed() const
{
    for (const auto& c : conditions) {
        if (!c.passed) return false;
    }
    return true;
}

std::string HypothesisReport::failure_message() const
{
    for (std::size_t i = 0; i < conditions.size(); ++i) {
        if (!conditions[i].passed)
            return "condition (" + std::to_string(i + 1) + ") failed: " + conditions[i].detail;
    }
    return "";
}

ResidueChoice select_residue(const std::vector<double>& a, Index m, Index n_max, double density_floor)
{
    if (m < 1) throw ParameterError("block length m must be positive");
    if (n_max < 1) throw ParameterError("n_max must be positive");
    if (static_cast<Index>(a.size()) <= m - 1 + n_max * m) throw ParameterError("sequence too short for the horizon");
    ResidueChoice best{0, -1.0};
    for (Index r = 0; r < m; ++r) {
        double sum = 0.0;
        for (Index h = 1; h <= n_max; ++h) sum += std::fabs(a[static_cast<std::size_t>(r + h * m)]);
        const double avg = sum / static_cast<double>(n_max);
        if (avg > best.average) best = {r, avg};
    }
    if (!(best.average > 0.0) || best.average < density_floor)
        throw HypothesisError("hypothesis limsup > 0 not witnessed at this horizon (best residue average " +
                              detail::fmt(best.average) + " below floor " + detail::fmt(density_floor) + " at n_max = " +
                              std::to_string(n_max) + ")");
    return best;
}

TrackedPoint<symbolic::BiInfSeq> track(const symbolic::BiInfSeq& p)
{
    return {p, [p](Index i) { return p.shifted(i); }, std::nullopt};
}

TrackedPoint<toral::TorusPoint> track(const toral::HomoclinicPoint& h)
{
    return {h.point(), [h](Index i) { return h.orbit(i); }, std::nullopt};
}

ShadowingModule<symbolic::BiInfSeq> symbolic_module(const symbolic::SftSystem& system)
{
    ShadowingModule<symbolic::BiInfSeq> m;
    m.system = system.contract();
    m.description = "shift shadowing: dyadic 2^-(k+1)-pseudo-orbits are 2^-(k+1)-shadowed, exactly";
    m.exact = true;
    m.identity_tolerance = 0.0;
    m.point_tolerance = 0.0;
    m.contraction_rate = 0.5;
    m.admissible_epsilon = [](double e) { return e > 0.0 ? std::min(symbolic::round_down_dyadic(e), 0.25) : 0.0; };
    m.delta_for = [](double e) { return symbolic::round_down_dyadic(std::min(e, 0.25)); };
    m.shadow = [system](const PseudoOrbit<symbolic::BiInfSeq>& po, double epsilon, Tails tails) {
        const double radius = symbolic::round_down_dyadic(std::min(epsilon, 0.25));
        const auto s = symbolic::shadow_sft(system, po, radius, tails);
        ShadowResult<symbolic::BiInfSeq> out{s.point, {po.system_id, po.i_min, {}, 0.0}, s.certified_epsilon};
        out.orbit.points.reserve(po.points.size());
        for (Index i = po.i_min; i <= po.i_max(); ++i) out.orbit.points.push_back(s.point.shifted(i));
        return out;
    };
    return m;
}

ShadowingModule<toral::TorusPoint> toral_module(const toral::ToralMap& map)
{
    ShadowingModule<toral::TorusPoint> m;
    m.system = map.contract();
    m.description = "linear shadowing: delta-pseudo-orbits are C delta-shadowed with C = " +
                    detail::fmt(map.shadowing_constant());
    m.exact = false;
    m.identity_tolerance = 1e-9;
    m.point_tolerance = 1e-9;
    m.contraction_rate = 1.0 / std::fabs(map.lambda_u_value());
    m.admissible_epsilon = [](double e) { return e; };
    const double c = map.shadowing_constant();
    m.delta_for = [c](double e) { return e / c * (1.0 - 1e-9); };
    m.shadow = [map](const PseudoOrbit<toral::TorusPoint>& po, double epsilon, Tails tails) {
        auto s = toral::shadow_toral(map, po, tails);
        if (s.certified_epsilon > epsilon) throw ParameterError("pseudo-orbit delta too large for epsilon");
        return ShadowResult<toral::TorusPoint>{s.base, std::move(s.orbit), s.certified_epsilon};
    };
    return m;
}

} // namespace chaoslab::bohr
