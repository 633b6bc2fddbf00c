#include "chaoslab/horseshoe.hpp"

namespace chaoslab::horseshoe {

Coding Coding::from_index(Index radius, std::uint64_t bits)
{
    Coding c{radius, std::string(static_cast<std::size_t>(2 * radius + 1), 'x')};
    for (std::size_t t = 0; t < c.word.size(); ++t) {
        if (bits >> t & 1u) c.word[t] = 'y';
    }
    return c;
}

Coding Coding::parse(const std::string& word)
{
    if (word.size() % 2 == 0) throw ConfigurationError("coding word must have odd length 2W+1");
    for (char ch : word) {
        if (ch != 'x' && ch != 'y') throw ConfigurationError(std::string("coding symbol '") + ch + "' outside {x, y}");
    }
    return {static_cast<Index>(word.size() / 2), word};
}

std::uint64_t Coding::index() const
{
    std::uint64_t bits = 0;
    for (std::size_t t = 0; t < word.size(); ++t) {
        if (word[t] == 'y') bits |= std::uint64_t{1} << t;
    }
    return bits;
}

char Coding::at(Index j) const
{
    if (j < -radius || j > radius) return 'x';
    return word[static_cast<std::size_t>(j + radius)];
}

std::optional<Coding> Coding::shifted() const
{
    if (word.front() != 'x') return std::nullopt;
    return Coding{radius, word.substr(1) + 'x'};
}

HorseshoeInput<symbolic::BiInfSeq> symbolic_input(const symbolic::SftSystem& system, const symbolic::BiInfSeq& x,
                                                  const symbolic::BiInfSeq& y, std::size_t max_len)
{
    const auto module = bohr::symbolic_module(system);
    const auto sys = system.contract();
    if (!system.contains(x) || !system.contains(y)) throw DomainError("x and y must lie in the subshift");
    const double b = sys.diameter_bound;
    const double e = symbolic::expansive_constant_sft(system);
    const double eps = horseshoe_epsilon(sys, b, e, x, y);
    if (!(eps > 0.0)) throw DomainError("x and y coincide");
    const double delta = module.delta_for(eps);
    const auto [boxes, graph_delta] = chain::SymbolicBoxes::for_chain_delta(system, delta);
    const auto graph = chain::build_transition_graph(boxes, graph_delta);
    auto w = chain::proximal_witness(boxes, graph, graph_delta, x, y, max_len);
    if (!w) throw HypothesisError("x and y are not chain proximal at delta = " + bohr::detail::fmt(graph_delta));
    return {system.name(), "subshift " + system.name(), b, e, std::move(*w),
            [system](const symbolic::BiInfSeq& q) { return system.contains(q); }};
}

HorseshoeInput<toral::TorusPoint> toral_input(const toral::ToralMap& map, const toral::TorusPoint& x,
                                              const toral::TorusPoint& y, std::size_t max_len)
{
    const auto module = bohr::toral_module(map);
    const auto sys = map.contract();
    const double b = sys.diameter_bound;
    const double e = map.expansive_constant();
    const double eps = horseshoe_epsilon(sys, b, e, x, y);
    if (!(eps > 0.0)) throw DomainError("x and y coincide");
    const double delta = module.delta_for(eps);
    const auto [boxes, graph_delta] = chain::ToralBoxes::for_chain_delta(map, delta);
    const auto graph = chain::build_transition_graph(boxes, graph_delta);
    auto w = chain::proximal_witness(boxes, graph, delta, x, y, max_len);
    if (!w) throw HypothesisError("x and y are not chain proximal at delta = " + bohr::detail::fmt(delta));
    return {map.name(), "torus", b, e, std::move(*w), {}};
}

} // namespace chaoslab::horseshoe
