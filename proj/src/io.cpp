#include "chaoslab/io.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace chaoslab::io {

std::string system_id(const AnySystem& system)
{
    return std::visit([](const auto& s) { return s.name(); }, system);
}

json system_definition(const AnySystem& system)
{
    if (const auto* sft = std::get_if<symbolic::SftSystem>(&system))
        return {{"name", sft->name()}, {"alphabet", sft->alphabet_size()}, {"transitions", sft->transitions()}};
    const auto& map = std::get<toral::ToralMap>(system);
    const auto& a = map.matrix();
    return {{"name", map.name()}, {"matrix", {{a[0][0], a[0][1]}, {a[1][0], a[1][1]}}}};
}

AnySystem system_from_json(const json& j)
{
    try {
        const std::string name = j.at("name").get<std::string>();
        if (j.contains("transitions")) {
            const auto t = j.at("transitions").get<std::vector<std::vector<int>>>();
            const int alphabet = j.value("alphabet", static_cast<int>(t.size()));
            return symbolic::SftSystem(name, alphabet, t);
        }
        if (j.contains("matrix")) {
            const auto m = j.at("matrix").get<std::vector<std::vector<long>>>();
            if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
                throw ConfigurationError("toral matrix must be 2 x 2");
            return toral::ToralMap(name, {{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}});
        }
    }
    catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed system definition: ") + e.what());
    }
    throw ConfigurationError("system definition needs 'transitions' or 'matrix'");
}

json point_json(const symbolic::BiInfSeq& p)
{
    return {{"left_period", symbolic::word_string(p.left_period())},
            {"core", symbolic::word_string(p.core())},
            {"right_period", symbolic::word_string(p.right_period())},
            {"offset", p.offset()}};
}

json point_json(const toral::TorusPoint& p) { return json::array({p.x, p.y}); }

symbolic::BiInfSeq symbolic_point(const json& j, int alphabet)
{
    try {
        return symbolic::BiInfSeq(alphabet, symbolic::parse_word(j.at("left_period").get<std::string>(), alphabet),
                                  symbolic::parse_word(j.at("core").get<std::string>(), alphabet),
                                  symbolic::parse_word(j.at("right_period").get<std::string>(), alphabet),
                                  j.at("offset").get<Index>());
    }
    catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed symbolic point: ") + e.what());
    }
}

double coordinate(const json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const auto den = j[1].get<long long>();
        if (den == 0) throw ConfigurationError("zero denominator in coordinate");
        return static_cast<double>(j[0].get<long long>()) / static_cast<double>(den);
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        const auto slash = s.find('/');
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                const double v = std::stod(s, &used);
                if (used == s.size()) return v;
            }
            else {
                const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
                std::size_t ua = 0, ub = 0;
                const long long num = std::stoll(a, &ua), den = std::stoll(b, &ub);
                if (ua == a.size() && ub == b.size() && den != 0)
                    return static_cast<double>(num) / static_cast<double>(den);
            }
        }
        catch (const std::exception&) {
        }
    }
    throw ConfigurationError("malformed coordinate " + j.dump());
}

toral::TorusPoint torus_point(const json& j)
{
    if (!j.is_array() || j.size() != 2) throw ConfigurationError("torus point must be [x, y]");
    return {coordinate(j[0]), coordinate(j[1])};
}

json hypotheses_json(const bohr::HypothesisReport& rep)
{
    json conds = json::array();
    for (std::size_t i = 0; i < rep.conditions.size(); ++i)
        conds.push_back({{"condition", i + 1}, {"passed", rep.conditions[i].passed}, {"detail", rep.conditions[i].detail}});
    auto decay = [](const std::vector<std::pair<Index, double>>& d) {
        json out = json::array();
        for (const auto& [i, v] : d) out.push_back({{"i", i}, {"distance", v}});
        return out;
    };
    return {{"conditions", conds},
            {"separation", rep.separation},
            {"epsilon", rep.epsilon},
            {"decay_x", decay(rep.decay_x)},
            {"decay_y", decay(rep.decay_y)}};
}

bohr::HypothesisReport hypotheses_from(const json& j)
{
    bohr::HypothesisReport rep;
    const auto& conds = j.at("conditions");
    for (std::size_t i = 0; i < rep.conditions.size() && i < conds.size(); ++i)
        rep.conditions[i] = {conds[i].at("passed").get<bool>(), conds[i].at("detail").get<std::string>()};
    rep.separation = j.at("separation").get<double>();
    rep.epsilon = j.at("epsilon").get<double>();
    for (const auto& d : j.value("decay_x", json::array())) rep.decay_x.emplace_back(d.at("i").get<Index>(), d.at("distance").get<double>());
    for (const auto& d : j.value("decay_y", json::array())) rep.decay_y.emplace_back(d.at("i").get<Index>(), d.at("distance").get<double>());
    return rep;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::filesystem::path& path)
{
    try {
        return json::parse(read_file(path));
    }
    catch (const json::parse_error& e) {
        throw ConfigurationError(path.string() + ": " + e.what());
    }
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    const auto tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigurationError("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw ConfigurationError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ConfigurationError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace chaoslab::io
