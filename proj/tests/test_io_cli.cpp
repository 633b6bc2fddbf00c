#include "chaoslab/cli.hpp"
#include "chaoslab/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chaoslab;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("chaoslab_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "chaoslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

int binary_exit(const std::string& args)
{
    const char* exe = std::getenv("CHAOSLAB_CLI");
    if (!exe) return -1;
    const int status = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Io, PointRoundTrips)
{
    const symbolic::BiInfSeq p(2, {0, 1}, {1, 1, 0}, {0}, 1);
    EXPECT_EQ(io::symbolic_point(io::point_json(p), 2), p);
    const toral::TorusPoint q(0.1, 0.7);
    EXPECT_EQ(io::torus_point(io::point_json(q)), q);
    EXPECT_DOUBLE_EQ(io::coordinate(json("1/3")), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(io::coordinate(json("0.25")), 0.25);
    EXPECT_DOUBLE_EQ(io::coordinate(json::array({1, 8})), 0.125);
    EXPECT_THROW(io::coordinate(json("abc")), ConfigurationError);
}

TEST(Io, SystemDefinitions)
{
    for (const auto& id : {"fullshift2", "golden-mean", "two-fixed", "cat"}) {
        const auto sys = cli::resolve_system(id);
        const auto back = io::system_from_json(io::system_definition(sys));
        EXPECT_EQ(io::system_id(back), id);
        EXPECT_EQ(io::system_definition(back), io::system_definition(sys));
    }
    EXPECT_THROW(io::system_from_json(json{{"name", "bad"}, {"matrix", {{1, 1}, {0, 1}}}}), Error);
    EXPECT_THROW(io::system_from_json(json{{"name", "bad"}, {"alphabet", 2}, {"transitions", {{1, 1}}}}), Error);
}

TEST(Io, PseudoOrbitRoundTrip)
{
    const auto g = symbolic::golden_mean();
    const auto po = symbolic::random_pseudo_orbit(g, 3, 20, 4);
    const auto back = io::pseudo_orbit_from<symbolic::BiInfSeq>(
        json::parse(io::dump(io::pseudo_orbit_json(po))), [](const json& j) { return io::symbolic_point(j, 2); });
    EXPECT_EQ(back.points, po.points);
    EXPECT_EQ(back.i_min, po.i_min);
    EXPECT_EQ(back.delta, po.delta);
}

TEST(Io, CertificateRoundTripVerifies)
{
    const auto sys = symbolic::full_shift(2);
    const auto hp = symbolic::homoclinic_pair_fullshift();
    bohr::Theorem1Input<symbolic::BiInfSeq> in;
    in.system_id = sys.name();
    in.S = {hp.fixed_point};
    in.x = bohr::track(hp.x);
    in.y = bohr::track(hp.y);
    in.a = bohr::SignSequenceSpec::bernoulli(0.5, 7);
    in.n_max = 200;
    const auto cert = bohr::certify_bohr(bohr::symbolic_module(sys), in);
    const auto text = io::dump(io::certificate_json(cert, sys, json::object()));
    const auto back = io::certificate_from<symbolic::BiInfSeq>(json::parse(text),
                                                               [](const json& j) { return io::symbolic_point(j, 2); });
    EXPECT_EQ(back.sum_phi, cert.sum_phi);
    EXPECT_EQ(back.gamma_window.points, cert.gamma_window.points);
    EXPECT_EQ(back.shadow_base, cert.shadow_base);
    EXPECT_TRUE(bohr::check_certificate(sys.contract(), back).ok);
}

TEST(Io, AtomicWriteReplacesContent)
{
    const auto p = scratch("atomic.txt");
    io::write_atomic(p, "one");
    io::write_atomic(p, "two");
    EXPECT_EQ(io::read_file(p), "two");
    for (const auto& e : fs::directory_iterator(p.parent_path()))
        EXPECT_EQ(e.path().filename().string().find(".tmp."), std::string::npos);
    EXPECT_THROW(io::read_json(scratch("missing.json")), ConfigurationError);
}

TEST(Cli, PointParsers)
{
    const auto p = cli::parse_symbolic_point("0|1|0|0", 2);
    EXPECT_EQ(p, symbolic::BiInfSeq(2, {0}, {1}, {0}, 0));
    EXPECT_EQ(cli::parse_symbolic_point(io::dump(io::point_json(p)), 2), p);
    EXPECT_THROW(cli::parse_symbolic_point("0|1|0", 2), ConfigurationError);
    EXPECT_THROW(cli::parse_symbolic_point("0|2|0|0", 2), Error);
    const auto q = cli::parse_torus_point("1/2,0.25");
    EXPECT_EQ(q, toral::TorusPoint(0.5, 0.25));
    EXPECT_EQ(cli::parse_torus_point("[0.5, 0.25]"), q);
    EXPECT_THROW(cli::parse_torus_point("0.5"), ConfigurationError);
}

TEST(Cli, SystemsListing)
{
    const auto r = run_cli({"systems"});
    EXPECT_EQ(r.code, cli::exit_ok);
    for (const char* id : {"fullshift2", "golden-mean", "two-fixed", "cat"}) EXPECT_NE(r.out.find(id), std::string::npos);

    const auto dir = scratch("systems_dir");
    fs::create_directories(dir);
    std::ofstream(dir / "even.json") << R"({"name": "even-ish", "alphabet": 2, "transitions": [[1, 1], [1, 0]]})";
    std::ofstream(dir / "broken.json") << "{";
    const auto u = run_cli({"systems", "--dir", dir.string()});
    EXPECT_EQ(u.code, cli::exit_ok);
    EXPECT_NE(u.out.find("even-ish"), std::string::npos);
}

TEST(Cli, CertifyAndCheck)
{
    const auto cert = scratch("cert.json");
    const auto r = run_cli({"certify-bohr", "--system", "fullshift2", "--seq", "constant_one", "--n-max", "1000", "--out", cert.string()});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    const json j = io::read_json(cert);
    EXPECT_EQ(j["schema"], "chaoslab/bohr-certificate/v1");
    EXPECT_EQ(j["tool_version"], io::tool_version);
    EXPECT_EQ(j["parameters"]["n-max"], 1000);
    EXPECT_EQ(j["partial_sums"]["sum_phi"], j["partial_sums"]["sum_abs"]);
    EXPECT_EQ(run_cli({"check-cert", cert.string()}).code, cli::exit_ok);

    json bad = j;
    bad["partial_sums"]["sum_phi"][412] = bad["partial_sums"]["sum_phi"][412].get<double>() + 1.0;
    const auto bad_path = scratch("bad.json");
    io::write_atomic(bad_path, io::dump(bad));
    const auto c = run_cli({"check-cert", bad_path.string()});
    EXPECT_EQ(c.code, cli::exit_negative);
    EXPECT_NE(c.out.find("first failing n = 412"), std::string::npos);
}

TEST(Cli, NegativeOutcomesExitTwo)
{
    const auto out = scratch("never.json").string();
    const auto s = run_cli({"certify-bohr", "--system", "fullshift2", "--seq", "sparse_squares", "--n-max", "100000", "--out", out});
    EXPECT_EQ(s.code, cli::exit_negative);
    EXPECT_NE(s.err.find("limsup"), std::string::npos);
    EXPECT_FALSE(fs::exists(out));

    const auto x = run_cli({"certify-bohr", "--system", "fullshift2", "--x", "0||0|0", "--y", "0|1|0|0", "--out", out});
    EXPECT_EQ(x.code, cli::exit_negative);
    EXPECT_NE(x.err.find("condition (1)"), std::string::npos);

    EXPECT_EQ(run_cli({"proximal", "--system", "two-fixed", "--out", scratch("prox.json").string()}).code, cli::exit_negative);
}

TEST(Cli, UsageErrorsExitOne)
{
    EXPECT_EQ(run_cli({"certify-bohr", "--system", "nosuch"}).code, cli::exit_error);
    EXPECT_EQ(run_cli({"certify-bohr", "--system", "fullshift2", "--n-max", "ten"}).code, cli::exit_error);
    EXPECT_EQ(run_cli({"frobnicate"}).code, cli::exit_error);
    EXPECT_EQ(run_cli({"shadow"}).code, cli::exit_error);
    EXPECT_EQ(run_cli({"chain-graph", "--system", "cat", "--resolution", "0.3"}).code, cli::exit_error);
    EXPECT_EQ(run_cli({"--help"}).code, cli::exit_ok);
}

TEST(Cli, BinaryExitCodes)
{
    if (!std::getenv("CHAOSLAB_CLI")) GTEST_SKIP() << "CHAOSLAB_CLI not set";
    EXPECT_EQ(binary_exit("systems"), 0);
    EXPECT_EQ(binary_exit("certify-bohr --system fullshift2 --seq sparse_squares --n-max 100000 --out -"), 2);
    EXPECT_EQ(binary_exit("certify-bohr --system nosuch"), 1);
}

TEST(Cli, ShadowIsDeterministic)
{
    const auto a = scratch("sh_a.json"), b = scratch("sh_b.json");
    ASSERT_EQ(run_cli({"shadow", "--system", "cat", "--seed", "5", "--length", "200", "--out", a.string()}).code, 0);
    ASSERT_EQ(run_cli({"shadow", "--system", "cat", "--seed", "5", "--length", "200", "--out", b.string()}).code, 0);
    EXPECT_EQ(io::read_file(a), io::read_file(b));
    ASSERT_EQ(run_cli({"shadow", "--system", "cat", "--seed", "6", "--length", "200", "--out", b.string()}).code, 0);
    EXPECT_NE(io::read_file(a), io::read_file(b));
    const json j = io::read_json(a);
    EXPECT_TRUE(j["verified"].get<bool>());
    EXPECT_EQ(j["parameters"]["seed"], 5);
}

TEST(Cli, ShadowFromInputFile)
{
    const auto g = symbolic::golden_mean();
    const auto po = symbolic::random_pseudo_orbit(g, 4, 30, 2);
    const auto in = scratch("po.json");
    io::write_atomic(in, io::dump(io::pseudo_orbit_json(po)));
    const auto r = run_cli({"shadow", "--system", "golden-mean", "--input", in.string(), "--out", scratch("sho.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = io::read_json(scratch("sho.json"));
    const auto base = io::symbolic_point(j["base"], 2);
    EXPECT_TRUE(is_shadowed_by(g.contract(), po, base, po.delta));
}

TEST(Cli, ChainGraphCsv)
{
    const auto r = run_cli({"chain-graph", "--system", "two-fixed", "--resolution", "3", "--delta", "0.125", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "box_id,center_x,center_y,scc_id");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 2);
}

TEST(Cli, HorseshoeArtifact)
{
    const auto out = scratch("coding.json"), bohr = scratch("hb.json");
    const auto r = run_cli({"horseshoe", "--system", "golden-mean", "--window", "2", "--out", out.string(), "--emit-bohr", bohr.string(),
                        "--n-max", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = io::read_json(out);
    EXPECT_EQ(j["entries"].size(), 32u);
    EXPECT_TRUE(j["checks"]["shadow_tube"].get<bool>());
    EXPECT_TRUE(j["checks"]["semiconjugacy"].get<bool>());
    EXPECT_TRUE(j["checks"]["separation"].get<bool>());
    EXPECT_TRUE(j["theorem1_input"].contains("hypotheses"));
    EXPECT_EQ(run_cli({"check-cert", bohr.string()}).code, 0);
}
