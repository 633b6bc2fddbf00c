// Acceptance run: one line per criterion with its wall time and budget.

#include "chaoslab/chain_analysis.hpp"
#include "chaoslab/cli.hpp"
#include "chaoslab/horseshoe.hpp"
#include "chaoslab/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace chaoslab;
using io::json;
using symbolic::BiInfSeq;
using toral::TorusPoint;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string artifact;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass) detail = "FAILED: " + what;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

TorusPoint cat_step(const TorusPoint& p)
{
    const double x = 2.0 * p.x + p.y, y = p.x + p.y;
    return {x - std::floor(x), y - std::floor(y)};
}

fs::path workdir()
{
    const auto dir = fs::temp_directory_path() / ("chaoslab_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

struct CliRun {
    int code;
    std::string out, err;
};

CliRun run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "chaoslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Criterion 1 ---------------------------------------------------------------

Outcome symbolic_identity()
{
    Outcome o;
    const auto sys = symbolic::full_shift(2);
    const auto hp = symbolic::homoclinic_pair_fullshift();
    for (const auto& seq : {bohr::SignSequenceSpec::constant_one(), bohr::SignSequenceSpec::bernoulli(0.5, 7)}) {
        bohr::Theorem1Input<BiInfSeq> in;
        in.system_id = sys.name();
        in.S = {hp.fixed_point};
        in.x = bohr::track(hp.x);
        in.y = bohr::track(hp.y);
        in.a = seq;
        in.n_max = 10000;
        in.tol = std::ldexp(1.0, -32);
        const auto cert = bohr::certify_bohr(bohr::symbolic_module(sys), in);
        bool equal = cert.sum_phi.size() == 10001;
        for (std::size_t n = 1; equal && n < cert.sum_phi.size(); ++n) equal = cert.sum_phi[n] == cert.sum_abs[n];
        o.require(equal, seq.str() + ": columns differ");
        o.require(cert.lower_bound > 0.0, seq.str() + ": lower bound not positive");
        o.require(bohr::check_certificate(sys.contract(), cert).ok, seq.str() + ": independent check rejects");
        o.detail += seq.str() + " m=" + std::to_string(cert.m) + " lb=" + fmt("%.4g", cert.lower_bound) + "; ";
        o.artifact += io::dump(io::certificate_json(cert, sys, json::object()));
    }
    return o;
}

// Criterion 2 ---------------------------------------------------------------

Outcome toral_identity()
{
    Outcome o;
    const auto cat = toral::cat_map();
    bohr::Theorem1Input<TorusPoint> in;
    in.system_id = cat.name();
    in.S = {TorusPoint(0.0, 0.0)};
    in.x = bohr::track(toral::HomoclinicPoint(cat, {1, 0}));
    in.y = bohr::track(toral::HomoclinicPoint(cat, {0, 1}));
    in.a = bohr::SignSequenceSpec::bernoulli(0.5, 7);
    in.n_max = 1000;
    const auto cert = bohr::certify_bohr(bohr::toral_module(cat), in);
    double worst = 0.0;
    for (std::size_t n = 1; n < cert.sum_phi.size(); ++n)
        worst = std::max(worst, std::fabs(cert.sum_phi[n] - cert.sum_abs[n]) / static_cast<double>(n));
    o.require(worst <= 1e-9, "columns differ by more than 1e-9 n");
    o.require(bohr::check_certificate(cat.contract(), cert).ok, "independent check rejects");
    o.detail = "m=" + std::to_string(cert.m) + " worst |gap|/n=" + fmt("%.3g", worst) + " lb=" + fmt("%.4g", cert.lower_bound);
    o.artifact = io::dump(io::certificate_json(cert, cat, json::object()));
    return o;
}

// Criterion 3 ---------------------------------------------------------------

Outcome toral_shadowing()
{
    Outcome o;
    const auto cat = toral::cat_map();
    const double delta = 1e-6, C = cat.shadowing_constant();
    double worst_step = 0.0, worst_ratio = 0.0;
    json corrections = json::array();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto po = toral::random_pseudo_orbit(cat, 1000, delta, seed);
        const auto s = toral::shadow_toral(cat, po);
        double gap = 0.0;
        for (Index i = po.i_min; i <= po.i_max(); ++i) {
            gap = std::max(gap, toral::torus_distance(po.at(i), s.orbit.at(i)));
            if (i < po.i_max()) worst_step = std::max(worst_step, toral::torus_distance(cat_step(s.orbit.at(i)), s.orbit.at(i + 1)));
        }
        worst_ratio = std::max(worst_ratio, gap / (C * delta));
        corrections.push_back(gap);
    }
    o.require(worst_step <= 1e-12, "corrected sequence is not a true orbit to 1e-12");
    o.require(worst_ratio <= 1.0, "correction exceeds C delta");

    // Every defect delta along the unit unstable direction.
    const Eigen::Vector2d u = cat.unstable_direction();
    PseudoOrbit<TorusPoint> adv{cat.name(), 0, {TorusPoint(0.3, 0.6)}, delta};
    for (int i = 1; i < 1000; ++i) {
        const TorusPoint next = cat_step(adv.points.back());
        adv.points.emplace_back(next.x + delta * u[0], next.y + delta * u[1]);
    }
    const auto s = toral::shadow_toral(cat, adv);
    o.require(s.max_correction >= C * delta / 10.0, "adversarial defect stays below C delta / 10");
    o.detail = "200 orbits: max step " + fmt("%.2g", worst_step) + ", max correction/(C delta) " + fmt("%.3f", worst_ratio) +
               "; adversarial correction/(C delta) " + fmt("%.3f", s.max_correction / (C * delta));
    o.artifact = corrections.dump() + fmt("%.17g", s.max_correction);
    return o;
}

// Criterion 4 ---------------------------------------------------------------

Outcome symbolic_shadowing()
{
    Outcome o;
    std::string bases;
    int count = 0;
    for (const auto& sys : {symbolic::full_shift(2), symbolic::golden_mean()}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const int t = 2 + static_cast<int>(seed % 6);
            const auto po = symbolic::random_pseudo_orbit(sys, t, 200, seed);
            const auto s = symbolic::shadow_sft(sys, po, po.delta);
            o.require(is_pseudo_orbit(sys.contract(), po), "generated sequence is not a pseudo-orbit");
            o.require(s.certified_epsilon == po.delta, "certified epsilon differs from delta");
            o.require(is_shadowed_by(sys.contract(), po, s.point, po.delta), "not shadowed with epsilon = delta");
            bases += s.point.describe() + "\n";
            ++count;
        }
    }
    o.detail = std::to_string(count) + " pseudo-orbits (full shift, golden mean), t in [2, 7], length 200";
    o.artifact = bases;
    return o;
}

// Criterion 5 ---------------------------------------------------------------

bool matches_closure(const chain::TransitionGraph& g)
{
    const std::size_t n = g.size();
    std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        r[i][i] = 1;
        for (auto j : g.successors[i]) r[i][j] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j) r[i][j] |= r[k][j];
    const auto c = chain::chain_components(g);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((c.scc_id[i] == c.scc_id[j]) != (r[i][j] && r[j][i])) return false;
    return true;
}

Outcome components()
{
    Outcome o;
    std::vector<chain::TransitionGraph> graphs;
    for (const auto& sys : {symbolic::full_shift(2), symbolic::golden_mean(), symbolic::two_fixed_points()}) {
        for (int depth = 1; depth <= 9; depth += 2) {
            const chain::SymbolicBoxes boxes(sys, depth);
            if (boxes.size() > 200) continue;
            for (double d : {0.5, 0.25, 0.125, 0.0625}) graphs.push_back(chain::build_transition_graph(boxes, d));
        }
    }
    for (int n = 2; n <= 14; ++n)
        for (double d : {0.1, 0.01, 1e-3}) graphs.push_back(chain::build_transition_graph(chain::ToralBoxes(toral::cat_map(), n), d));
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 100; ++t) {
        chain::TransitionGraph g;
        const std::size_t n = 1 + rng() % 200;
        g.successors.resize(n);
        std::bernoulli_distribution edge(std::min(1.0, 2.0 / static_cast<double>(n)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (edge(rng)) g.successors[i].push_back(static_cast<chain::BoxId>(j));
        graphs.push_back(std::move(g));
    }
    std::size_t agree = 0;
    std::string ids;
    for (const auto& g : graphs) {
        agree += matches_closure(g) ? 1 : 0;
        ids += json(chain::chain_components(g).scc_id).dump();
    }
    o.require(agree == graphs.size(), "SCC output disagrees with the closure oracle");

    const auto two = chain::chain_components(
        chain::build_transition_graph(chain::SymbolicBoxes(symbolic::two_fixed_points(), 7), 0.125));
    o.require(two.component_count == 2, "two-fixed-point SFT does not give two components");
    const auto catg = chain::build_transition_graph(chain::ToralBoxes::from_resolution(toral::cat_map(), 1.0 / 32.0), 1e-3);
    const auto cat = chain::chain_components(catg);
    o.require(cat.component_count == 1, "cat map at 1/32, 1e-3 does not give one component");
    o.detail = std::to_string(agree) + "/" + std::to_string(graphs.size()) + " graphs match the oracle; two-fixed: " +
               std::to_string(two.component_count) + " components; cat 1/32: " + std::to_string(cat.component_count);
    o.artifact = ids + json(cat.scc_id).dump();
    return o;
}

// Criterion 6 ---------------------------------------------------------------

Outcome proximal()
{
    Outcome o;
    const auto g = symbolic::golden_mean();
    const std::vector<double> deltas{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const std::vector<BiInfSeq> cands{BiInfSeq::constant(2, 0), BiInfSeq::periodic(2, {0, 1})};
    const auto res = chain::find_chain_proximal_pair<chain::SymbolicBoxes>(
        [&](double d) { return chain::SymbolicBoxes::for_chain_delta(g, d); }, cands, deltas);
    o.require(res.has_value(), "no pair found");
    if (!res) return o;
    o.require(res->witnesses.size() == deltas.size(), "missing deltas");
    json arr = json::array();
    std::string ms;
    for (const auto& w : res->witnesses) {
        o.require(chain::verify_proximal_witness(g.contract(), w), "witness fails verification");
        for (const auto* c : {&w.xx, &w.xy, &w.yx, &w.yy}) {
            o.require(c->steps() == w.m, "chain length differs from m");
            for (std::size_t i = 0; i + 1 < c->points.size(); ++i)
                o.require(symbolic::shift_metric(c->points[i].shifted(1), c->points[i + 1]) <= w.delta, "jump exceeds delta");
        }
        ms += std::to_string(w.m) + " ";
        arr.push_back({io::chain_json(w.xx), io::chain_json(w.xy), io::chain_json(w.yx), io::chain_json(w.yy)});
    }
    o.detail = "pair " + res->x.describe() + ", " + res->y.describe() + "; m per delta: " + ms;
    o.artifact = arr.dump();
    return o;
}

// Criterion 7 ---------------------------------------------------------------

template <class P>
void horseshoe_pipeline(Outcome& o, const std::string& label, const bohr::ShadowingModule<P>& module,
                        const horseshoe::HorseshoeInput<P>& in, Index W, double tol, const io::AnySystem& system,
                        double budget_s)
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto map = horseshoe::build_coding_map(module, in, W);
    o.require(map.entries.size() == (std::size_t{1} << (2 * W + 1)), label + ": wrong number of codings");
    o.require(map.checks.shadow_tube, label + ": shadow tube");
    o.require(map.checks.semiconjugacy, label + ": semiconjugacy");
    o.require(map.checks.separation, label + ": separation");
    const auto sp = horseshoe::special_points(module, map);
    const auto t1 = horseshoe::theorem2_to_corollary1(module, in, map, bohr::SignSequenceSpec::bernoulli(0.5, 7), 1000,
                                                      64 + 4 * map.m, tol);
    const auto rep = bohr::verify_theorem1_hypotheses(module, t1);
    o.require(rep.passed(), label + ": " + rep.failure_message());
    if (!rep.passed()) return;
    const auto cert = bohr::certify_bohr(module, t1);
    double worst = 0.0;
    for (std::size_t n = 1; n < cert.sum_phi.size(); ++n) {
        const double gap = std::fabs(cert.sum_phi[n] - cert.sum_abs[n]);
        worst = std::max(worst, gap / static_cast<double>(n));
    }
    o.require(module.exact ? worst == 0.0 : worst <= 1e-9, label + ": certificate identity");
    o.require(bohr::check_certificate(module.system, cert).ok, label + ": independent check rejects");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= budget_s, label + ": over its time budget");
    o.detail += label + " W=" + std::to_string(W) + " (" + std::to_string(map.entries.size()) + " codings, m=" +
                std::to_string(map.m) + ", sep " + fmt("%.3g", map.checks.min_separation) + " >= " +
                fmt("%.3g", map.checks.separation_bound) + ", cert m=" + std::to_string(cert.m) + ", " + fmt("%.2fs", secs) +
                "); ";
    json pts = json::array();
    for (const auto& e : map.entries) pts.push_back(io::point_json(e.point));
    o.artifact += pts.dump() + io::point_json(sp.q).dump() + io::dump(io::certificate_json(cert, system, json::object()));
}

Outcome horseshoe_pipelines()
{
    Outcome o;
    const auto g = symbolic::golden_mean();
    horseshoe_pipeline(o, "golden-mean", bohr::symbolic_module(g),
                       horseshoe::symbolic_input(g, BiInfSeq::constant(2, 0), BiInfSeq::periodic(2, {0, 1})), 4,
                       std::ldexp(1.0, -32), g, 60.0);
    const auto cat = toral::cat_map();
    horseshoe_pipeline(o, "cat", bohr::toral_module(cat), horseshoe::toral_input(cat, {0.0, 0.0}, {0.5, 0.5}), 3, 1e-9,
                       cat, 120.0);
    return o;
}

// Criterion 8 ---------------------------------------------------------------

Outcome negative_controls()
{
    Outcome o;
    const auto dir = workdir();
    const auto sparse = run_cli({"certify-bohr", "--system", "fullshift2", "--seq", "sparse_squares", "--n-max", "100000", "--out",
                             (dir / "sparse.json").string()});
    o.require(sparse.code == 2, "sparse_squares did not exit 2");
    o.require(sparse.err.find("not witnessed") != std::string::npos, "sparse_squares message");

    const auto inside = run_cli({"certify-bohr", "--system", "fullshift2", "--x", "0||0|0", "--y", "0|1|0|0", "--out",
                             (dir / "inside.json").string()});
    o.require(inside.code == 2, "x in S did not exit 2");
    o.require(inside.err.find("condition (1)") != std::string::npos, "x in S refusal does not name condition (1)");

    const auto good = dir / "good.json";
    o.require(run_cli({"certify-bohr", "--system", "fullshift2", "--n-max", "1000", "--out", good.string()}).code == 0,
              "baseline certificate");
    json j = io::read_json(good);
    j["partial_sums"]["sum_phi"][617] = j["partial_sums"]["sum_phi"][617].get<double>() - 1.0;
    io::write_atomic(dir / "corrupt.json", io::dump(j));
    const auto corrupt = run_cli({"check-cert", (dir / "corrupt.json").string()});
    o.require(corrupt.code == 2, "corrupted certificate did not exit 2");
    o.require(corrupt.out.find("first failing n = 617") != std::string::npos, "first failing n not reported");

    auto line = [](const std::string& s) { return s.substr(0, s.find('\n')); };
    o.detail = "sparse_squares exit " + std::to_string(sparse.code) + "; x in S exit " + std::to_string(inside.code) + " (" +
               line(inside.err) + "); corrupted exit " + std::to_string(corrupt.code) + " (" + line(corrupt.out) + ")";
    o.artifact = sparse.err + inside.err + corrupt.out;
    return o;
}

// Criterion 9 ---------------------------------------------------------------

Outcome cli_determinism()
{
    Outcome o;
    const auto dir = workdir();
    const std::vector<std::vector<std::string>> runs = {
        {"certify-bohr", "--system", "fullshift2", "--seq", "bernoulli:p=0.5,seed=7", "--n-max", "10000"},
        {"certify-bohr", "--system", "cat", "--seq", "bernoulli:p=0.5,seed=7", "--n-max", "1000"},
        {"shadow", "--system", "cat", "--seed", "11", "--length", "1000", "--delta", "1e-6"},
        {"shadow", "--system", "golden-mean", "--seed", "11", "--length", "200", "--delta", "0.0625"},
        {"chain-graph", "--system", "cat", "--resolution", "1/32", "--delta", "0.001"},
        {"proximal", "--system", "golden-mean"},
        {"horseshoe", "--system", "golden-mean", "--window", "4"},
    };
    int identical = 0;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        std::string bytes[2];
        for (int rep = 0; rep < 2; ++rep) {
            auto args = runs[k];
            const auto path = dir / ("det_" + std::to_string(k) + "_" + std::to_string(rep) + ".json");
            args.insert(args.end(), {"--out", path.string()});
            const auto r = run_cli(args);
            o.require(r.code == 0, runs[k][0] + " exited " + std::to_string(r.code) + ": " + r.err);
            bytes[rep] = fs::exists(path) ? io::read_file(path) : "";
        }
        const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
        o.require(same, runs[k][0] + " " + runs[k][2] + " differs between runs");
        identical += same ? 1 : 0;
    }
    o.detail = std::to_string(identical) + "/" + std::to_string(runs.size()) + " CLI artifacts byte-identical";
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "exact partial-sum identity, full 2-shift", 10.0, symbolic_identity},
        {2, "partial-sum identity, cat map", 30.0, toral_identity},
        {3, "toral shadowing bound and non-vacuity", 20.0, toral_shadowing},
        {4, "exact symbolic shadowing", 5.0, symbolic_shadowing},
        {5, "chain components against closure oracle", 60.0, components},
        {6, "chain proximal witnesses, golden mean", 30.0, proximal},
        {7, "horseshoe pipeline, golden mean and cat map", 180.0, horseshoe_pipelines},
        {8, "negative controls", 30.0, negative_controls},
    };
    int failures = 0;
    std::vector<std::string> first_artifacts;
    auto report = [&](int id, const char* title, bool pass, double secs, double budget, const std::string& detail) {
        std::printf("criterion %d %s  %7.2fs (budget %gs)  %s: %s\n", id, pass ? "PASS" : "FAIL", secs, budget, title,
                    detail.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    };
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        }
        catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s && o.pass) {
            o.pass = false;
            o.detail = "over budget; " + o.detail;
        }
        first_artifacts.push_back(o.artifact);
        report(c.id, c.title, o.pass, secs, c.budget_s, o.detail);
    }

    const auto t0 = std::chrono::steady_clock::now();
    Outcome det;
    std::string rerun;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        try {
            const auto again = criteria[k].run();
            const bool same = again.artifact == first_artifacts[k] && !again.artifact.empty();
            det.require(same, "criterion " + std::to_string(criteria[k].id) + " artifacts differ");
            rerun += same ? "=" : "x";
        }
        catch (const std::exception& e) {
            det.require(false, std::string("rerun exception: ") + e.what());
        }
    }
    const auto cli_det = cli_determinism();
    det.require(cli_det.pass, cli_det.detail);
    if (det.pass) det.detail = "criteria 1-8 rerun [" + rerun + "]; " + cli_det.detail;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(9, "determinism", det.pass, secs, 0, det.detail);

    std::error_code ec;
    fs::remove_all(workdir(), ec);
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
