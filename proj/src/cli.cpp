#include "chaoslab/cli.hpp"

#include "chaoslab/bohr.hpp"
#include "chaoslab/chain_analysis.hpp"
#include "chaoslab/horseshoe.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace chaoslab::cli {

namespace {

using io::json;
using symbolic::BiInfSeq;
using toral::TorusPoint;

std::string num17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err)
    {
        echo_["command"] = cfg.command;
        if (!cfg.system_id.empty()) echo_["system"] = cfg.system_id;
        if (cfg.seed) echo_["seed"] = *cfg.seed;
    }

    std::ostream& out() { return out_; }
    std::ostream& err() { return err_; }
    const RunConfig& config() const { return cfg_; }
    const json& echo() const { return echo_; }

    bool has(const std::string& key) const { return cfg_.parameters.count(key) != 0; }

    std::string text(const std::string& key, const std::string& fallback)
    {
        const auto it = cfg_.parameters.find(key);
        const std::string v = it == cfg_.parameters.end() ? fallback : it->second;
        echo_[key] = v;
        return v;
    }

    double number(const std::string& key, double fallback)
    {
        const auto it = cfg_.parameters.find(key);
        const double v = it == cfg_.parameters.end() ? fallback : io::coordinate(json(it->second));
        echo_[key] = v;
        return v;
    }

    Index integer(const std::string& key, Index fallback)
    {
        const auto it = cfg_.parameters.find(key);
        Index v = fallback;
        if (it != cfg_.parameters.end()) {
            std::size_t used = 0;
            try {
                v = std::stoll(it->second, &used);
            }
            catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != it->second.size())
                throw ConfigurationError("option --" + key + " expects an integer, got '" + it->second + "'");
        }
        echo_[key] = v;
        return v;
    }

    std::uint64_t seed(std::uint64_t fallback)
    {
        const std::uint64_t s = cfg_.seed.value_or(fallback);
        echo_["seed"] = s;
        return s;
    }

    json envelope(const std::string& schema) const
    {
        json j;
        j["schema"] = schema;
        j["tool_version"] = io::tool_version;
        j["parameters"] = echo_;
        return j;
    }

    void emit(const std::string& content, const std::string& path)
    {
        if (path.empty() || path == "-") out_ << content;
        else io::write_atomic(path, content);
    }

    void emit(json artifact)
    {
        if (artifact.contains("parameters")) artifact["parameters"] = echo_;
        emit(io::dump(artifact), cfg_.out_path);
    }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
    std::ostream& err_;
    json echo_ = json::object();
};

// ---------------------------------------------------------------------------
// defaults

std::vector<BiInfSeq> periodic_candidates(const symbolic::SftSystem& sys)
{
    std::vector<BiInfSeq> out;
    const int a = sys.alphabet_size();
    for (int s = 0; s < a; ++s) {
        if (sys.allowed(static_cast<symbolic::Symbol>(s), static_cast<symbolic::Symbol>(s)))
            out.push_back(BiInfSeq::constant(a, static_cast<symbolic::Symbol>(s)));
    }
    for (int s = 0; s < a; ++s) {
        for (int t = 0; t < a; ++t) {
            const auto u = static_cast<symbolic::Symbol>(s), v = static_cast<symbolic::Symbol>(t);
            if (s != t && sys.allowed(u, v) && sys.allowed(v, u)) out.push_back(BiInfSeq::periodic(a, {u, v}));
        }
    }
    return out;
}

struct SymbolicPair {
    BiInfSeq s, x, y;
};

SymbolicPair default_symbolic_pair(const symbolic::SftSystem& sys)
{
    const int a = sys.alphabet_size();
    if (sys.allowed(0, 0)) {
        std::vector<BiInfSeq> found;
        for (const char* w : {"1", "11", "101", "1001"}) {
            const BiInfSeq p(a, {0}, symbolic::parse_word(w, a), {0}, 0);
            if (sys.contains(p)) found.push_back(p);
            if (found.size() == 2) return {BiInfSeq::constant(a, 0), found[0], found[1]};
        }
    }
    throw HypothesisError("no default homoclinic pair to 0^inf in '" + sys.name() + "'");
}

std::vector<BiInfSeq> periodic_orbit(const symbolic::SftSystem& sys, const BiInfSeq& base)
{
    if (!sys.contains(base)) throw ConfigurationError("S base point is outside the subshift");
    std::vector<BiInfSeq> orbit{base};
    for (Index t = 1; t <= 4096; ++t) {
        const BiInfSeq next = base.shifted(t);
        if (next == base) return orbit;
        orbit.push_back(next);
    }
    throw ConfigurationError("S base point is not periodic with period <= 4096");
}

bohr::TrackedPoint<TorusPoint> parse_tracked_torus(const toral::ToralMap& map, const std::string& text)
{
    if (text.rfind("homoclinic:", 0) == 0) {
        const auto parts = split(text.substr(11), ',');
        if (parts.size() != 2) throw ConfigurationError("expected homoclinic:a,b");
        try {
            return bohr::track(toral::HomoclinicPoint(map, {std::stol(parts[0]), std::stol(parts[1])}));
        }
        catch (const std::invalid_argument&) {
            throw ConfigurationError("malformed lattice vector '" + text + "'");
        }
    }
    const TorusPoint p = parse_torus_point(text);
    const auto contract = map.contract();
    return {p, [contract, p](Index i) { return contract.iterate(p, i); }, std::nullopt};
}

// ---------------------------------------------------------------------------
// commands

int cmd_systems(Context& ctx)
{
    auto list = builtin_systems();
    if (ctx.has("dir")) {
        const auto user = user_systems(ctx.text("dir", ""));
        list.insert(list.end(), user.begin(), user.end());
    }
    if (ctx.config().out_path.empty()) {
        for (const auto& s : list) ctx.out() << s.id << '\t' << s.kind << '\t' << s.description << '\n';
        return exit_ok;
    }
    json j = ctx.envelope("chaoslab/systems/v1");
    json arr = json::array();
    for (const auto& s : list)
        arr.push_back({{"id", s.id}, {"kind", s.kind}, {"description", s.description}, {"source", s.source}});
    j["systems"] = arr;
    ctx.emit(j);
    return exit_ok;
}

symbolic::Tails parse_tails(Context& ctx)
{
    const std::string t = ctx.text("tails", "true-orbit");
    if (t == "true-orbit") return {};
    if (t.rfind("periodic:", 0) == 0) {
        try {
            return {symbolic::TailKind::periodic, std::stoll(t.substr(9))};
        }
        catch (const std::exception&) {
        }
    }
    throw ConfigurationError("tails must be 'true-orbit' or 'periodic:N'");
}

int cmd_shadow(Context& ctx, const io::AnySystem& system)
{
    json j = ctx.envelope("chaoslab/shadow/v1");
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
        const int a = sft->alphabet_size();
        const io::PointReader<BiInfSeq> read = [a](const json& p) { return io::symbolic_point(p, a); };
        PseudoOrbit<BiInfSeq> po;
        if (ctx.has("input")) po = io::pseudo_orbit_from(io::read_json(ctx.text("input", "")), read);
        else {
            const double delta = ctx.number("delta", 0.125);
            const auto t = symbolic::dyadic_exponent(delta);
            if (!t || *t < 1) throw ParameterError("random symbolic pseudo-orbits need delta = 2^-t, t >= 1");
            po = symbolic::random_pseudo_orbit(*sft, *t, static_cast<std::size_t>(ctx.integer("length", 100)),
                                               ctx.seed(0));
        }
        const double radius = ctx.number("radius", po.delta);
        const auto tails = parse_tails(ctx);
        const auto s = symbolic::shadow_sft(*sft, po, radius, tails);
        const bool verified = is_shadowed_by(sft->contract(), po, s.point, radius);
        if (!verified) throw InternalError("shadow fails the independent check");
        j["system"] = sft->name();
        j["pseudo_orbit"] = io::pseudo_orbit_json(po);
        j["base"] = io::point_json(s.point);
        j["certified_epsilon"] = s.certified_epsilon;
        j["verified"] = verified;
    }
    else {
        const auto& map = std::get<toral::ToralMap>(system);
        const io::PointReader<TorusPoint> read = [](const json& p) { return io::torus_point(p); };
        PseudoOrbit<TorusPoint> po;
        if (ctx.has("input")) po = io::pseudo_orbit_from(io::read_json(ctx.text("input", "")), read);
        else
            po = toral::random_pseudo_orbit(map, static_cast<std::size_t>(ctx.integer("length", 1000)),
                                            ctx.number("delta", 1e-6), ctx.seed(0));
        const auto s = toral::shadow_toral(map, po, parse_tails(ctx));
        const bool verified = is_shadowed_by_orbit(map.contract(), po, s.orbit, s.certified_epsilon);
        if (!verified) throw InternalError("shadow fails the independent check");
        j["system"] = map.name();
        j["pseudo_orbit"] = io::pseudo_orbit_json(po);
        j["base"] = io::point_json(s.base);
        j["certified_epsilon"] = s.certified_epsilon;
        j["shadowing_constant"] = map.shadowing_constant();
        j["max_correction"] = s.max_correction;
        j["max_step_error"] = s.max_step_error;
        j["orbit"] = io::pseudo_orbit_json(s.orbit);
        j["verified"] = verified;
        if (ctx.has("csv")) {
            std::string csv = "i,w_x,w_y,z_x,z_y\n";
            for (Index i = po.i_min; i <= po.i_max(); ++i) {
                csv += std::to_string(i) + ',' + num17(po.at(i).x) + ',' + num17(po.at(i).y) + ',' +
                       num17(s.orbit.at(i).x) + ',' + num17(s.orbit.at(i).y) + '\n';
            }
            ctx.emit(csv, ctx.text("csv", ""));
        }
    }
    ctx.emit(j);
    return exit_ok;
}

template <class Model>
int emit_graph(Context& ctx, const Model& model, double delta, json j, bool csv,
               const std::vector<chain::RefinementLevel>& levels)
{
    const auto graph = chain::build_transition_graph(model, delta);
    const auto comps = chain::chain_components(graph);
    const auto report = chain::is_chain_transitive(graph);
    if (csv) {
        std::string out = "box_id,center_x,center_y,scc_id\n";
        for (chain::BoxId b = 0; b < graph.size(); ++b) {
            const auto [cx, cy] = model.center(b);
            out += std::to_string(b) + ',' + num17(cx) + ',' + num17(cy) + ',' + std::to_string(comps.scc_id[b]) + '\n';
        }
        ctx.emit(out, ctx.config().out_path);
        return exit_ok;
    }
    j["cover"] = {{"resolution", graph.cover.resolution},
                  {"box_count", graph.cover.box_count},
                  {"box_diameter", graph.cover.box_diameter}};
    j["delta"] = graph.delta;
    j["edge_count"] = graph.edge_count();
    j["component_count"] = comps.component_count;
    j["component_sizes"] = comps.component_sizes;
    j["recurrent_boxes"] = comps.recurrent_count();
    j["transitive"] = report.transitive;
    j["caveat"] = report.caveat;
    json boxes = json::array();
    for (chain::BoxId b = 0; b < graph.size(); ++b) {
        const auto [cx, cy] = model.center(b);
        boxes.push_back({{"id", b}, {"center", {cx, cy}}, {"scc", comps.scc_id[b]}, {"recurrent", comps.recurrent[b] ? true : false}});
    }
    j["boxes"] = boxes;
    j["successors"] = graph.successors;
    if (!levels.empty()) {
        json arr = json::array();
        for (const auto& l : levels)
            arr.push_back({{"resolution", l.resolution},
                           {"boxes", l.boxes},
                           {"components", l.components},
                           {"recurrent_boxes", l.recurrent_boxes},
                           {"recurrent_measure", l.recurrent_measure}});
        j["refinement"] = arr;
    }
    ctx.emit(j);
    return exit_ok;
}

int cmd_chain_graph(Context& ctx, const io::AnySystem& system)
{
    const std::string path = ctx.config().out_path;
    const bool csv_ext = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
    const std::string format = ctx.text("format", csv_ext ? "csv" : "json");
    if (format != "csv" && format != "json") throw ConfigurationError("format must be json or csv");
    const Index refine = ctx.integer("refine", 0);
    json j = ctx.envelope("chaoslab/chain-graph/v1");
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
        const double delta = ctx.number("delta", 0.125);
        const int depth = static_cast<int>(ctx.integer("resolution", 7));
        j["system"] = sft->name();
        const chain::SymbolicBoxes boxes(*sft, depth);
        const auto levels = refine > 0 ? chain::refine_symbolic(*sft, depth, delta, static_cast<int>(refine))
                                       : std::vector<chain::RefinementLevel>{};
        return emit_graph(ctx, boxes, delta, j, format == "csv", levels);
    }
    const auto& map = std::get<toral::ToralMap>(system);
    const double delta = ctx.number("delta", 1e-3);
    const double resolution = ctx.number("resolution", 1.0 / 32.0);
    j["system"] = map.name();
    const auto boxes = chain::ToralBoxes::from_resolution(map, resolution);
    const auto levels = refine > 0 ? chain::refine_toral(map, boxes.per_side(), delta, static_cast<int>(refine))
                                   : std::vector<chain::RefinementLevel>{};
    return emit_graph(ctx, boxes, delta, j, format == "csv", levels);
}

std::vector<double> parse_deltas(const std::string& text)
{
    std::vector<double> out;
    for (const auto& s : split(text, ',')) out.push_back(io::coordinate(json(s)));
    if (out.empty()) throw ConfigurationError("empty delta list");
    return out;
}

template <class P>
int emit_proximal(Context& ctx, const std::optional<chain::ProximalSearchResult<P>>& result, json j)
{
    if (!result) {
        ctx.err() << "no chain proximal pair among the candidates for every delta\n";
        j["found"] = false;
        ctx.emit(j);
        return exit_negative;
    }
    j["found"] = true;
    j["x"] = io::point_json(result->x);
    j["y"] = io::point_json(result->y);
    j["semantics"] = result->extension_semantics ? "extension, not paper semantics" : "chain transitive component";
    json ws = json::array();
    for (const auto& w : result->witnesses) {
        ws.push_back({{"delta", w.delta},
                      {"m", w.m},
                      {"chains",
                       {{"xx", io::chain_json(w.xx)},
                        {"xy", io::chain_json(w.xy)},
                        {"yx", io::chain_json(w.yx)},
                        {"yy", io::chain_json(w.yy)}}}});
    }
    j["witnesses"] = ws;
    ctx.emit(j);
    return exit_ok;
}

const char* default_deltas = "0.5,0.25,0.125,0.0625,0.03125,0.015625";

int cmd_proximal(Context& ctx, const io::AnySystem& system)
{
    json j = ctx.envelope("chaoslab/proximal/v1");
    const auto max_len = static_cast<std::size_t>(ctx.integer("max-len", 4096));
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
        const auto deltas = parse_deltas(ctx.text("deltas", default_deltas));
        std::vector<BiInfSeq> cands;
        if (ctx.has("x") || ctx.has("y")) {
            cands = {parse_symbolic_point(ctx.text("x", ""), sft->alphabet_size()),
                     parse_symbolic_point(ctx.text("y", ""), sft->alphabet_size())};
        }
        else cands = periodic_candidates(*sft);
        j["system"] = sft->name();
        const auto factory = [&](double d) { return chain::SymbolicBoxes::for_chain_delta(*sft, d); };
        return emit_proximal(ctx, chain::find_chain_proximal_pair<chain::SymbolicBoxes>(factory, cands, deltas, max_len), j);
    }
    const auto& map = std::get<toral::ToralMap>(system);
    const auto deltas = parse_deltas(ctx.text("deltas", "0.05,0.025"));
    std::vector<TorusPoint> cands{parse_torus_point(ctx.text("x", "0,0")), parse_torus_point(ctx.text("y", "1/2,1/2"))};
    j["system"] = map.name();
    const auto factory = [&](double d) { return chain::ToralBoxes::for_chain_delta(map, d); };
    return emit_proximal(ctx, chain::find_chain_proximal_pair<chain::ToralBoxes>(factory, cands, deltas, max_len), j);
}

template <class P>
int write_certificate(Context& ctx, const bohr::ShadowingModule<P>& module, const bohr::Theorem1Input<P>& in,
                      const io::AnySystem& system, const std::string& path, const std::string& csv)
{
    const auto cert = bohr::certify_bohr(module, in);
    ctx.emit(io::dump(io::certificate_json(cert, system, ctx.echo())), path);
    if (!csv.empty()) {
        std::string out = "n,sum_phi,sum_abs\n";
        for (std::size_t n = 0; n < cert.sum_phi.size(); ++n)
            out += std::to_string(n) + ',' + num17(cert.sum_phi[n]) + ',' + num17(cert.sum_abs[n]) + '\n';
        ctx.emit(out, csv);
    }
    if (!path.empty() && path != "-") {
        ctx.out() << "certificate " << path << ": identity holds for all n <= " << cert.n_max
                  << (cert.exact ? " exactly" : " within 1e-9 n") << "; m = " << cert.m << ", r = " << cert.r
                  << ", lower_bound = " << num17(cert.lower_bound) << '\n';
    }
    return exit_ok;
}

int cmd_certify(Context& ctx, const io::AnySystem& system)
{
    const std::string path = ctx.config().out_path.empty() ? "cert.json" : ctx.config().out_path;
    const std::string pair = ctx.text("pair", "homoclinic-default");
    if (pair != "homoclinic-default") throw ConfigurationError("unknown pair '" + pair + "'");
    const auto seq = bohr::SignSequenceSpec::parse(ctx.text("seq", "constant_one"));
    const Index n_max = ctx.integer("n-max", 1000);
    const Index n_window = ctx.integer("n-window", 64);
    const double floor = ctx.number("density-floor", 1e-2);
    const std::string csv = ctx.has("csv") ? ctx.text("csv", "") : "";
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
        const int a = sft->alphabet_size();
        bohr::Theorem1Input<BiInfSeq> in;
        in.system_id = sft->name();
        if (ctx.has("x") || ctx.has("y") || ctx.has("s")) {
            const auto def = (ctx.has("x") && ctx.has("y") && ctx.has("s")) ? SymbolicPair{} : default_symbolic_pair(*sft);
            const BiInfSeq s = ctx.has("s") ? parse_symbolic_point(ctx.text("s", ""), a) : def.s;
            in.S = periodic_orbit(*sft, s);
            in.x = bohr::track(ctx.has("x") ? parse_symbolic_point(ctx.text("x", ""), a) : def.x);
            in.y = bohr::track(ctx.has("y") ? parse_symbolic_point(ctx.text("y", ""), a) : def.y);
        }
        else if (sft->name() == "fullshift2") {
            const auto hp = symbolic::homoclinic_pair_fullshift();
            in.S = {hp.fixed_point};
            in.x = bohr::track(hp.x);
            in.y = bohr::track(hp.y);
        }
        else {
            const auto def = default_symbolic_pair(*sft);
            in.S = {def.s};
            in.x = bohr::track(def.x);
            in.y = bohr::track(def.y);
        }
        for (const auto* t : {&in.x, &in.y}) {
            if (!sft->contains(t->point)) throw ConfigurationError("x and y must lie in the subshift");
        }
        in.a = seq;
        in.n_max = n_max;
        in.n_window = n_window;
        in.tol = ctx.number("tol", std::ldexp(1.0, -32));
        in.density_floor = floor;
        return write_certificate(ctx, bohr::symbolic_module(*sft), in, system, path, csv);
    }
    const auto& map = std::get<toral::ToralMap>(system);
    if (ctx.has("s")) throw ConfigurationError("toral certificates use S = {(0,0)}");
    bohr::Theorem1Input<TorusPoint> in;
    in.system_id = map.name();
    in.S = {TorusPoint(0.0, 0.0)};
    in.x = parse_tracked_torus(map, ctx.text("x", "homoclinic:1,0"));
    in.y = parse_tracked_torus(map, ctx.text("y", "homoclinic:0,1"));
    in.a = seq;
    in.n_max = n_max;
    in.n_window = n_window;
    in.tol = ctx.number("tol", 1e-9);
    in.density_floor = floor;
    return write_certificate(ctx, bohr::toral_module(map), in, system, path, csv);
}

int cmd_check(Context& ctx)
{
    const std::string file = ctx.text("file", "");
    const json j = io::read_json(file);
    bohr::CheckResult res;
    try {
        const auto system = io::system_from_json(j.at("system_definition"));
        if (io::system_id(system) != j.at("system").get<std::string>())
            throw ConfigurationError("system definition does not match the certificate's system id");
        if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
            const int a = sft->alphabet_size();
            const auto cert = io::certificate_from<BiInfSeq>(j, [a](const json& p) { return io::symbolic_point(p, a); });
            res = bohr::check_certificate(sft->contract(), cert);
        }
        else {
            const auto& map = std::get<toral::ToralMap>(system);
            const auto cert = io::certificate_from<TorusPoint>(j, [](const json& p) { return io::torus_point(p); });
            res = bohr::check_certificate(map.contract(), cert);
        }
    }
    catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed certificate: ") + e.what());
    }
    if (res.ok) {
        ctx.out() << "certificate verified: " << file << '\n';
        return exit_ok;
    }
    ctx.out() << "certificate rejected: " << res.reason;
    if (res.first_failing_n) ctx.out() << " (first failing n = " << *res.first_failing_n << ")";
    ctx.out() << '\n';
    return exit_negative;
}

template <class P>
int run_horseshoe(Context& ctx, const bohr::ShadowingModule<P>& module, const horseshoe::HorseshoeInput<P>& in,
                  const io::AnySystem& system, double default_tol)
{
    const Index W = ctx.integer("window", 2);
    const auto budget = static_cast<std::uint64_t>(ctx.integer("budget", 1 << 16));
    const auto cm = horseshoe::build_coding_map(module, in, W, budget);
    json j = ctx.envelope("chaoslab/coding-map/v1");
    j["system"] = in.system_id;
    const auto& w = in.proximal;
    j["input"] = {{"C", in.c_description},
                  {"b", in.b},
                  {"e", in.e},
                  {"epsilon", cm.epsilon},
                  {"delta", cm.delta},
                  {"m", cm.m},
                  {"x", io::point_json(w.x)},
                  {"y", io::point_json(w.y)},
                  {"chains",
                   {{"xx", io::chain_json(w.xx)}, {"xy", io::chain_json(w.xy)}, {"yx", io::chain_json(w.yx)}, {"yy", io::chain_json(w.yy)}}}};
    j["window_radius"] = cm.radius;
    j["block_window"] = {cm.block_lo, cm.block_hi};
    json entries = json::array();
    for (const auto& e : cm.entries) entries.push_back({{"coding", e.coding.word}, {"point", io::point_json(e.point)}});
    j["entries"] = entries;
    const auto& ck = cm.checks;
    j["checks"] = {{"shadow_tube", ck.shadow_tube},
                   {"checkpoints", ck.checkpoints},
                   {"semiconjugacy", ck.semiconjugacy},
                   {"semiconjugacy_pairs", ck.semiconjugacy_pairs},
                   {"semiconjugacy_error", ck.semiconjugacy_error},
                   {"semiconjugacy_checkpoint_error", ck.semiconjugacy_checkpoint_error},
                   {"separation", ck.separation},
                   {"min_separation", ck.min_separation},
                   {"separation_bound", ck.separation_bound}};
    if (!ck.passed()) {
        ctx.emit(j);
        throw ConstructionError("coding map checks failed");
    }
    const auto sp = horseshoe::special_points(module, cm, ctx.number("membership-tol", 0.0));
    j["special_points"] = {{"p", io::point_json(sp.p)},
                           {"q", io::point_json(sp.q)},
                           {"r", io::point_json(sp.r)},
                           {"period", sp.m},
                           {"q_tail", sp.q_tail},
                           {"r_tail", sp.r_tail},
                           {"tol", sp.tol}};
    const auto seq = bohr::SignSequenceSpec::parse(ctx.text("seq", "constant_one"));
    const Index n_max = ctx.integer("n-max", 1000);
    const Index n_window = ctx.integer("n-window", 64 + 4 * cm.m);
    const double tol = ctx.number("tol", default_tol);
    auto t1 = horseshoe::theorem2_to_corollary1(module, in, cm, seq, n_max, n_window, tol);
    t1.density_floor = ctx.number("density-floor", 1e-2);
    const auto rep = bohr::verify_theorem1_hypotheses(module, t1);
    j["theorem1_input"] = {{"system", t1.system_id},
                           {"S", io::points_json(t1.S)},
                           {"x", io::point_json(t1.x.point)},
                           {"y", io::point_json(t1.y.point)},
                           {"sequence", seq.str()},
                           {"n_window", n_window},
                           {"n_max", n_max},
                           {"tol", tol},
                           {"hypotheses", io::hypotheses_json(rep)}};
    ctx.emit(j);
    if (!ctx.has("emit-bohr")) return exit_ok;
    bohr::require_hypotheses(rep);
    return write_certificate(ctx, module, t1, system, ctx.text("emit-bohr", ""), "");
}

int cmd_horseshoe(Context& ctx, const io::AnySystem& system)
{
    const auto max_len = static_cast<std::size_t>(ctx.integer("max-len", 4096));
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system)) {
        const int a = sft->alphabet_size();
        BiInfSeq x = BiInfSeq::constant(a, 0), y = BiInfSeq::periodic(a, {0, 1});
        if (ctx.has("x") || ctx.has("y")) {
            x = parse_symbolic_point(ctx.text("x", ""), a);
            y = parse_symbolic_point(ctx.text("y", ""), a);
        }
        else if (!sft->contains(x) || !sft->contains(y)) {
            const auto c = periodic_candidates(*sft);
            if (c.size() < 2) throw HypothesisError("no pair of distinct periodic points to start from");
            x = c[0];
            y = c[1];
        }
        const auto in = horseshoe::symbolic_input(*sft, x, y, max_len);
        return run_horseshoe(ctx, bohr::symbolic_module(*sft), in, system, std::ldexp(1.0, -32));
    }
    const auto& map = std::get<toral::ToralMap>(system);
    const auto in = horseshoe::toral_input(map, parse_torus_point(ctx.text("x", "0,0")),
                                           parse_torus_point(ctx.text("y", "1/2,1/2")), max_len);
    return run_horseshoe(ctx, bohr::toral_module(map), in, system, 1e-9);
}

} // namespace

std::vector<SystemInfo> builtin_systems()
{
    return {{"fullshift2", "sft", "full shift on two symbols", "builtin"},
            {"golden-mean", "sft", "golden mean shift (word 11 forbidden)", "builtin"},
            {"two-fixed", "sft", "two fixed points, transitions 00 and 11 only", "builtin"},
            {"cat", "toral", "cat map [[2,1],[1,1]] on the 2-torus", "builtin"}};
}

std::vector<SystemInfo> user_systems(const std::string& dir)
{
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    if (ec) throw ConfigurationError("cannot list " + dir + ": " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<SystemInfo> out;
    for (const auto& f : files) {
        try {
            const auto sys = io::system_from_json(io::read_json(f));
            const bool sft = std::holds_alternative<symbolic::SftSystem>(sys);
            out.push_back({io::system_id(sys), sft ? "sft" : "toral", "user definition", f.string()});
        }
        catch (const Error&) {
        }
    }
    return out;
}

io::AnySystem resolve_system(const std::string& id)
{
    if (id == "fullshift2") return symbolic::full_shift(2);
    if (id == "golden-mean") return symbolic::golden_mean();
    if (id == "two-fixed") return symbolic::two_fixed_points();
    if (id == "cat") return toral::cat_map();
    if (!id.empty() && std::filesystem::is_regular_file(id)) return io::system_from_json(io::read_json(id));
    throw ConfigurationError("unknown system id '" + id + "'");
}

symbolic::BiInfSeq parse_symbolic_point(const std::string& text, int alphabet)
{
    if (!text.empty() && text.front() == '{') {
        try {
            return io::symbolic_point(json::parse(text), alphabet);
        }
        catch (const json::parse_error& e) {
            throw ConfigurationError(std::string("malformed point: ") + e.what());
        }
    }
    const auto parts = split(text + "|", '|');
    if (parts.size() != 4) throw ConfigurationError("symbolic points are written left|core|right|offset");
    Index offset = 0;
    try {
        std::size_t used = 0;
        offset = std::stoll(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
    }
    catch (const std::exception&) {
        throw ConfigurationError("malformed offset in '" + text + "'");
    }
    return BiInfSeq(alphabet, symbolic::parse_word(parts[0], alphabet), symbolic::parse_word(parts[1], alphabet),
                    symbolic::parse_word(parts[2], alphabet), offset);
}

toral::TorusPoint parse_torus_point(const std::string& text)
{
    if (!text.empty() && text.front() == '[') {
        try {
            return io::torus_point(json::parse(text));
        }
        catch (const json::parse_error& e) {
            throw ConfigurationError(std::string("malformed point: ") + e.what());
        }
    }
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ConfigurationError("torus points are written x,y");
    return {io::coordinate(json(parts[0])), io::coordinate(json(parts[1]))};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Context ctx(config, out, err);
    try {
        const auto& c = config.command;
        if (c == "systems") return cmd_systems(ctx);
        if (c == "check-cert") return cmd_check(ctx);
        if (config.system_id.empty()) throw ConfigurationError("--system is required for " + c);
        const auto system = resolve_system(config.system_id);
        if (c == "shadow") return cmd_shadow(ctx, system);
        if (c == "chain-graph") return cmd_chain_graph(ctx, system);
        if (c == "proximal") return cmd_proximal(ctx, system);
        if (c == "certify-bohr") return cmd_certify(ctx, system);
        if (c == "horseshoe") return cmd_horseshoe(ctx, system);
        throw ConfigurationError("unknown command '" + c + "'");
    }
    catch (const HypothesisError& e) {
        err << "hypothesis not satisfied: " << e.what() << '\n';
        return exit_negative;
    }
    catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_error;
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Shadowing, chain recurrence and Bohr chaos certificates", "chaoslab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(io::tool_version));

    RunConfig cfg;
    std::string seed_text;
    std::map<std::string, std::map<std::string, std::string>> store;

    struct Spec {
        const char* command;
        const char* help;
        bool system;
        std::vector<std::pair<const char*, const char*>> options;
    };
    const std::vector<Spec> specs = {
        {"systems", "list registered systems", false, {{"dir", "also list JSON system definitions in this directory"}}},
        {"shadow", "shadow a pseudo-orbit (from --input or generated from --seed)", true,
         {{"input", "pseudo-orbit JSON"},
          {"delta", "defect bound of generated pseudo-orbits"},
          {"length", "length of generated pseudo-orbits"},
          {"radius", "symbolic shadowing radius 2^-(k+1)"},
          {"tails", "true-orbit or periodic:N"},
          {"csv", "orbit trace CSV (toral)"}}},
        {"chain-graph", "box transition graph and chain components", true,
         {{"resolution", "box side 1/n (toral) or cylinder depth (symbolic)"},
          {"delta", "pseudo-orbit jump"},
          {"format", "json or csv"},
          {"refine", "number of refinement levels to report"}}},
        {"proximal", "search a chain proximal pair with equal-length witnesses", true,
         {{"x", "first point"}, {"y", "second point"}, {"deltas", "comma-separated deltas"}, {"max-len", "longest chain"}}},
        {"certify-bohr", "build a Bohr certificate", true,
         {{"pair", "homoclinic-default"},
          {"x", "first homoclinic point"},
          {"y", "second homoclinic point"},
          {"s", "base point of the periodic orbit S (symbolic)"},
          {"seq", "constant_one | periodic:v,... | bernoulli:p=P,seed=N | sparse_squares"},
          {"n-max", "certificate horizon"},
          {"n-window", "finite window standing in for limits"},
          {"tol", "convergence tolerance"},
          {"density-floor", "least residue average accepted"},
          {"csv", "partial sums CSV"}}},
        {"check-cert", "verify a Bohr certificate independently", false, {}},
        {"horseshoe", "coding map, special points and the derived certificate input", true,
         {{"window", "coding window radius W"},
          {"x", "first point of the proximal pair"},
          {"y", "second point of the proximal pair"},
          {"budget", "largest number of codings"},
          {"max-len", "longest proximal chain"},
          {"membership-tol", "tolerance for q, r near O(p) at +-W m"},
          {"emit-bohr", "also certify and write the certificate here"},
          {"seq", "sign sequence for the derived certificate"},
          {"n-max", "certificate horizon"},
          {"n-window", "finite window of the derived input"},
          {"tol", "convergence tolerance of the derived input"},
          {"density-floor", "least residue average accepted"}}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.command, s.help);
        subs[s.command] = sub;
        auto& opts = store[s.command];
        if (s.system) sub->add_option("--system", cfg.system_id, "system id or JSON definition file")->required();
        if (std::string(s.command) == "check-cert") sub->add_option("file", opts["file"], "certificate JSON")->required();
        else sub->add_option("--out", cfg.out_path, "output file (atomic write)");
        sub->add_option("--seed", seed_text, "seed for all randomness");
        for (const auto& [name, help] : s.options) sub->add_option(std::string("--") + name, opts[name], help);
    }

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForVersion&) {
        out << io::tool_version << '\n';
        return exit_ok;
    }
    catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        app.exit(e, o, er);
        err << er.str() << o.str();
        return exit_error;
    }
    for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) continue;
        cfg.command = name;
        for (const auto& [key, value] : store[name]) {
            if (sub->count(key == "file" ? "file" : "--" + key) > 0) cfg.parameters[key] = value;
        }
    }
    if (!seed_text.empty()) {
        try {
            std::size_t used = 0;
            cfg.seed = std::stoull(seed_text, &used);
            if (used != seed_text.size()) throw std::invalid_argument(seed_text);
        }
        catch (const std::exception&) {
            err << "error: --seed expects a nonnegative integer\n";
            return exit_error;
        }
    }
    return run(cfg, out, err);
}

} // namespace chaoslab::cli
