#pragma once

// JSON encodings of points, pseudo-orbits, chains, system definitions and
// Bohr certificates, plus atomic file output.

#include "chaoslab/bohr.hpp"
#include "chaoslab/symbolic.hpp"
#include "chaoslab/toral.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace chaoslab::io {

using json = nlohmann::ordered_json;

#ifdef CHAOSLAB_VERSION
inline constexpr const char* tool_version = CHAOSLAB_VERSION;
#else
inline constexpr const char* tool_version = "unknown";
#endif

using AnySystem = std::variant<symbolic::SftSystem, toral::ToralMap>;

std::string system_id(const AnySystem& system);
json system_definition(const AnySystem& system);
/// {"name", "alphabet", "transitions"} or {"name", "matrix"}.
AnySystem system_from_json(const json& j);

json point_json(const symbolic::BiInfSeq& p);
json point_json(const toral::TorusPoint& p);
symbolic::BiInfSeq symbolic_point(const json& j, int alphabet);
toral::TorusPoint torus_point(const json& j);
/// A number, a decimal or "a/b" string, or [num, den].
double coordinate(const json& j);

template <class P>
using PointReader = std::function<P(const json&)>;

template <class P>
json points_json(const std::vector<P>& points)
{
    json out = json::array();
    for (const auto& p : points) out.push_back(point_json(p));
    return out;
}

template <class P>
std::vector<P> points_from(const json& j, const PointReader<P>& read)
{
    std::vector<P> out;
    for (const auto& e : j) out.push_back(read(e));
    return out;
}

template <class P>
json pseudo_orbit_json(const PseudoOrbit<P>& po)
{
    return {{"system", po.system_id}, {"i_min", po.i_min}, {"delta", po.delta}, {"points", points_json(po.points)}};
}

template <class P>
PseudoOrbit<P> pseudo_orbit_from(const json& j, const PointReader<P>& read)
{
    return {j.at("system").get<std::string>(), j.value("i_min", Index{0}), points_from(j.at("points"), read),
            j.at("delta").get<double>()};
}

template <class P>
json chain_json(const Chain<P>& c)
{
    return {{"system", c.system_id}, {"delta", c.delta}, {"points", points_json(c.points)}};
}

template <class P>
Chain<P> chain_from(const json& j, const PointReader<P>& read)
{
    return {j.at("system").get<std::string>(), points_from(j.at("points"), read), j.at("delta").get<double>()};
}

json hypotheses_json(const bohr::HypothesisReport& rep);
bohr::HypothesisReport hypotheses_from(const json& j);

template <class P>
json certificate_json(const bohr::BohrCertificate<P>& c, const AnySystem& system, const json& parameters)
{
    json j;
    j["schema"] = "chaoslab/bohr-certificate/v1";
    j["tool_version"] = tool_version;
    j["parameters"] = parameters;
    j["system"] = c.system_id;
    j["system_definition"] = system_definition(system);
    j["exact"] = c.exact;
    j["epsilon"] = c.epsilon;
    j["delta"] = c.delta;
    for (const auto& [k, v] : {std::pair{"k", c.k}, {"l", c.l}, {"j", c.j}, {"m", c.m}, {"r", c.r}}) j[k] = v;
    j["n_max"] = c.n_max;
    j["n_window"] = c.n_window;
    j["x"] = point_json(c.x);
    j["y"] = point_json(c.y);
    j["S"] = points_json(c.S);
    j["chain_x"] = chain_json(c.chain_x);
    j["chain_y"] = chain_json(c.chain_y);
    const auto prefix = static_cast<std::size_t>(c.r + c.l + 1);
    j["gamma_window"] = {{"i_min", 0},
                         {"i_max", c.gamma_window.i_max()},
                         {"delta", c.gamma_window.delta},
                         {"prefix", points_json(std::vector<P>(c.gamma_window.points.begin(),
                                                               c.gamma_window.points.begin() + prefix))},
                         {"blocks", c.blocks}};
    j["shadow_base"] = point_json(c.shadow_base);
    if (c.shadow_orbit) j["shadow_orbit"] = {{"i_min", c.shadow_orbit->i_min}, {"points", points_json(c.shadow_orbit->points)}};
    j["sequence"] = c.sequence.str();
    j["phi"] = {{"center_x", point_json(c.x)}, {"center_y", point_json(c.y)}, {"epsilon", c.epsilon}};
    j["partial_sums"] = {{"sum_phi", c.sum_phi}, {"sum_abs", c.sum_abs}};
    j["lower_bound"] = c.lower_bound;
    j["residue_average"] = c.residue_average;
    json density = json::array();
    for (const auto& d : c.density) density.push_back({{"n", d.n}, {"average", d.average}});
    j["density"] = density;
    j["hypotheses"] = hypotheses_json(c.hypotheses);
    j["tolerances"] = {{"identity_per_term", c.identity_tolerance}, {"orbit_step", c.orbit_tolerance}};
    return j;
}

template <class P>
bohr::BohrCertificate<P> certificate_from(const json& j, const PointReader<P>& read)
{
    bohr::BohrCertificate<P> c;
    c.system_id = j.at("system").get<std::string>();
    c.exact = j.at("exact").get<bool>();
    c.epsilon = j.at("epsilon").get<double>();
    c.delta = j.at("delta").get<double>();
    c.k = j.at("k").get<Index>();
    c.l = j.at("l").get<Index>();
    c.j = j.at("j").get<Index>();
    c.m = j.at("m").get<Index>();
    c.r = j.at("r").get<Index>();
    c.n_max = j.at("n_max").get<Index>();
    c.n_window = j.at("n_window").get<Index>();
    c.x = read(j.at("x"));
    c.y = read(j.at("y"));
    c.S = points_from(j.at("S"), read);
    c.chain_x = chain_from(j.at("chain_x"), read);
    c.chain_y = chain_from(j.at("chain_y"), read);
    const auto& g = j.at("gamma_window");
    c.blocks = g.at("blocks").get<std::string>();
    c.gamma_window = {c.system_id, 0, points_from(g.at("prefix"), read), g.at("delta").get<double>()};
    if (c.chain_x.points.size() == static_cast<std::size_t>(c.m + 1) &&
        c.chain_y.points.size() == static_cast<std::size_t>(c.m + 1)) {
        for (char b : c.blocks) {
            const auto& ch = b == 'x' ? c.chain_x : c.chain_y;
            c.gamma_window.points.insert(c.gamma_window.points.end(), ch.points.begin() + 1, ch.points.end());
        }
    }
    c.shadow_base = read(j.at("shadow_base"));
    if (j.contains("shadow_orbit")) {
        const auto& o = j.at("shadow_orbit");
        c.shadow_orbit = PseudoOrbit<P>{c.system_id, o.at("i_min").get<Index>(), points_from(o.at("points"), read), 0.0};
    }
    c.sequence = bohr::SignSequenceSpec::parse(j.at("sequence").get<std::string>());
    c.sum_phi = j.at("partial_sums").at("sum_phi").get<std::vector<double>>();
    c.sum_abs = j.at("partial_sums").at("sum_abs").get<std::vector<double>>();
    c.lower_bound = j.at("lower_bound").get<double>();
    c.residue_average = j.value("residue_average", 0.0);
    for (const auto& d : j.value("density", json::array()))
        c.density.push_back({d.at("n").get<std::size_t>(), d.at("average").get<double>()});
    if (j.contains("hypotheses")) c.hypotheses = hypotheses_from(j.at("hypotheses"));
    c.identity_tolerance = j.at("tolerances").at("identity_per_term").get<double>();
    c.orbit_tolerance = j.at("tolerances").at("orbit_step").get<double>();
    return c;
}

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);
/// Two-space indented, trailing newline.
std::string dump(const json& j);

} // namespace chaoslab::io
