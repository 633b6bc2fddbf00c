#pragma once

// Bohr chaos certificates. Finite-horizon checks of the four hypotheses,
// the two chains through x and y, the sign-driven pseudo-orbit Gamma, its
// shadow p and the partial-sum identity
//
//     sum_{i < r+l+nm} a_i phi(f^i p) = sum_{h <= n} |a_{r+hm}|,
//
// plus a checker that replays a certificate without the builder.

#include "chaoslab/core.hpp"
#include "chaoslab/sign_sequence.hpp"
#include "chaoslab/symbolic.hpp"
#include "chaoslab/toral.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab::bohr {

using symbolic::TailKind;
using symbolic::Tails;

/// A point together with an accurate evaluator of its orbit.
template <class P>
struct TrackedPoint {
    P point;
    std::function<P(Index)> orbit;
    /// Largest |i| the evaluator supports; unbounded when empty.
    std::optional<Index> horizon;

    P at(Index i) const
    {
        if (horizon && (i > *horizon || i < -*horizon))
            throw DomainError("orbit index " + std::to_string(i) + " beyond the stored horizon " +
                              std::to_string(*horizon));
        return orbit(i);
    }
};

TrackedPoint<symbolic::BiInfSeq> track(const symbolic::BiInfSeq& p);
TrackedPoint<toral::TorusPoint> track(const toral::HomoclinicPoint& h);

/// Orbit read off a stored true-orbit window containing index 0.
template <class P>
TrackedPoint<P> track_window(const PseudoOrbit<P>& orbit)
{
    if (!orbit.contains(0)) throw DomainError("orbit window must contain index 0");
    return {orbit.at(0), [orbit](Index i) { return orbit.at(i); }, std::min(-orbit.i_min, orbit.i_max())};
}

template <class P>
struct ShadowResult {
    P base;
    /// f^i(base) over the pseudo-orbit's index range.
    PseudoOrbit<P> orbit;
    double certified_epsilon = 0.0;
};

/// What the certifier needs from a system with the shadowing property.
template <class P>
struct ShadowingModule {
    SystemContract<P> system;
    std::string description;
    bool exact = false;
    /// Per-term slack of the partial-sum identity.
    double identity_tolerance = 0.0;
    /// Slack for point identities such as f^m(p) = p.
    double point_tolerance = 0.0;
    /// Per-step factor by which nearby orbits converge along stable directions.
    double contraction_rate = 0.5;
    /// Rounds a candidate epsilon down to the admissible grid.
    std::function<double(double)> admissible_epsilon;
    /// A delta such that every delta-pseudo-orbit is epsilon-shadowed.
    std::function<double(double)> delta_for;
    std::function<ShadowResult<P>(const PseudoOrbit<P>&, double epsilon, Tails)> shadow;
};

ShadowingModule<symbolic::BiInfSeq> symbolic_module(const symbolic::SftSystem& system);
ShadowingModule<toral::TorusPoint> toral_module(const toral::ToralMap& map);

template <class P>
struct Theorem1Input {
    std::string system_id;
    /// A periodic orbit listed in order: S[i+1] = f(S[i]).
    std::vector<P> S;
    TrackedPoint<P> x;
    TrackedPoint<P> y;
    SignSequenceSpec a;
    Index n_window = 64;
    Index n_max = 1000;
    double tol = 1e-9;
    /// Smallest residue average accepted as a witness of positive density.
    double density_floor = 1e-2;
};

struct Verdict {
    bool passed = false;
    std::string detail;
};

struct HypothesisReport {
    std::array<Verdict, 4> conditions;
    /// Distance to S at i = +-2^t up to the window, for x then y.
    std::vector<std::pair<Index, double>> decay_x, decay_y;
    double separation = 0.0;
    double epsilon = 0.0;

    bool passed() const;
    /// "condition (k) failed: ..." for the first failing k.
    std::string failure_message() const;
};

struct ResidueChoice {
    Index r = 0;
    double average = 0.0;
};

/// argmax_r (1/n_max) sum_{h=1}^{n_max} |a_{r+hm}|, ties to the smallest r.
ResidueChoice select_residue(const std::vector<double>& a, Index m, Index n_max, double density_floor);

template <class P>
struct Theorem1Chains {
    Index k = 0, l = 0, j = 0, m = 0;
    /// Positions of z and w in S.
    std::size_t z_index = 0, w_index = 0;
    Chain<P> chain_x;
    Chain<P> chain_y;
};

template <class P>
struct BohrCertificate {
    std::string system_id;
    bool exact = false;
    double epsilon = 0.0;
    double delta = 0.0;
    Index k = 0, l = 0, j = 0, m = 0, r = 0;
    Index n_max = 0;
    Index n_window = 0;
    P x, y;
    std::vector<P> S;
    Chain<P> chain_x;
    Chain<P> chain_y;
    /// 'x' or 'y' for h = 1..n_max.
    std::string blocks;
    PseudoOrbit<P> gamma_window;
    P shadow_base;
    /// Stored when direct iteration is not exact.
    std::optional<PseudoOrbit<P>> shadow_orbit;
    SignSequenceSpec sequence;
    /// Entry n for n = 0..n_max.
    std::vector<double> sum_phi;
    std::vector<double> sum_abs;
    double lower_bound = 0.0;
    double residue_average = 0.0;
    std::vector<DensityPoint> density;
    HypothesisReport hypotheses;
    double identity_tolerance = 0.0;
    double orbit_tolerance = 0.0;
};

struct CheckResult {
    bool ok = false;
    std::optional<Index> first_failing_n;
    std::string reason;
};

namespace detail {

template <class P>
double distance_to_set(const SystemContract<P>& system, const std::vector<P>& S, const P& q,
                       std::size_t* nearest = nullptr)
{
    double best = 0.0;
    for (std::size_t s = 0; s < S.size(); ++s) {
        const double d = system.metric(S[s], q);
        if (s == 0 || d < best) {
            best = d;
            if (nearest) *nearest = s;
        }
    }
    return best;
}

std::string fmt(double v);

} // namespace detail

template <class P>
HypothesisReport verify_theorem1_hypotheses(const ShadowingModule<P>& module, const Theorem1Input<P>& in)
{
    const auto& sys = module.system;
    require_same_system(sys, in.system_id);
    if (in.S.empty()) throw ConfigurationError("S must be a nonempty periodic orbit");
    if (in.n_window < 1) throw ConfigurationError("N_window must be positive");
    const Index N = in.n_window;
    HypothesisReport rep;
    using detail::fmt;
    auto dS = [&](const P& q, std::size_t* nearest = nullptr) { return detail::distance_to_set(sys, in.S, q, nearest); };

    // (1) homoclinic to S and outside S.
    {
        auto& v = rep.conditions[0];
        const double dx = dS(in.x.point), dy = dS(in.y.point);
        const double dxy = sys.metric(in.x.point, in.y.point);
        for (Index t = 1;; t *= 2) {
            const Index i = std::min(t, N);
            rep.decay_x.emplace_back(i, dS(in.x.at(i)));
            rep.decay_x.emplace_back(-i, dS(in.x.at(-i)));
            rep.decay_y.emplace_back(i, dS(in.y.at(i)));
            rep.decay_y.emplace_back(-i, dS(in.y.at(-i)));
            if (i == N) break;
        }
        const std::size_t last = rep.decay_x.size() - 2;
        const double tail = std::max({rep.decay_x[last].second, rep.decay_x[last + 1].second,
                                      rep.decay_y[last].second, rep.decay_y[last + 1].second});
        if (!(dx > 0.0)) v.detail = "x lies in S";
        else if (!(dy > 0.0)) v.detail = "y lies in S";
        else if (!(dxy > 0.0)) v.detail = "x and y coincide";
        else if (!(tail <= in.tol))
            v.detail = "orbits not within tol of S at i = +-" + std::to_string(N) + " (max distance " + fmt(tail) + ")";
        else {
            v.passed = true;
            v.detail = "d(x,S) = " + fmt(dx) + ", d(y,S) = " + fmt(dy) + ", max d(f^(+-N) {x,y}, S) = " + fmt(tail);
        }
    }

    // (2) the orbits of x and y approach each other in both directions.
    {
        auto& v = rep.conditions[1];
        double fwd = sys.metric(in.x.point, in.y.point), bwd = fwd;
        for (Index i = 1; i <= N; ++i) {
            fwd = std::min(fwd, sys.metric(in.x.at(i), in.y.at(i)));
            bwd = std::min(bwd, sys.metric(in.x.at(-i), in.y.at(-i)));
        }
        std::size_t xf = 0, yf = 0, xb = 0, yb = 0;
        const bool same_limit = dS(in.x.at(N), &xf) <= in.tol && dS(in.y.at(N), &yf) <= in.tol &&
                                dS(in.x.at(-N), &xb) <= in.tol && dS(in.y.at(-N), &yb) <= in.tol && xf == yf &&
                                xb == yb;
        if (fwd <= in.tol && bwd <= in.tol) {
            v.passed = true;
            v.detail = "window minimum: forward " + fmt(fwd) + ", backward " + fmt(bwd);
        }
        else if (same_limit) {
            v.passed = true;
            v.detail = "both orbits converge to the same point of S in each direction";
        }
        else {
            v.detail = "min distance forward " + fmt(fwd) + ", backward " + fmt(bwd) + " exceeds tol";
        }
    }

    // (3) S is one periodic orbit.
    {
        auto& v = rep.conditions[2];
        double worst = 0.0;
        for (std::size_t s = 0; s < in.S.size(); ++s)
            worst = std::max(worst, sys.metric(sys.forward(in.S[s]), in.S[(s + 1) % in.S.size()]));
        v.passed = worst <= module.point_tolerance;
        v.detail = v.passed ? "S is a periodic orbit of period " + std::to_string(in.S.size()) +
                                  ", chain transitive by construction"
                            : "S is not closed under f (defect " + fmt(worst) + ")";
    }

    rep.conditions[3] = {true, module.description};

    if (!rep.conditions[0].passed) return rep;

    // Separation of x and y from the rest of E = S u O(x) u O(y).
    {
        double sep_x = detail::distance_to_set(sys, in.S, in.x.point);
        double sep_y = detail::distance_to_set(sys, in.S, in.y.point);
        for (Index i = -N; i <= N; ++i) {
            const P xi = in.x.at(i), yi = in.y.at(i);
            sep_x = std::min(sep_x, sys.metric(yi, in.x.point));
            sep_y = std::min(sep_y, sys.metric(xi, in.y.point));
            if (i != 0) {
                sep_x = std::min(sep_x, sys.metric(xi, in.x.point));
                sep_y = std::min(sep_y, sys.metric(yi, in.y.point));
            }
        }
        double tail = 0.0;
        for (std::size_t t = rep.decay_x.size() - 2; t < rep.decay_x.size(); ++t)
            tail = std::max({tail, rep.decay_x[t].second, rep.decay_y[t].second});
        const double tail_bound = std::min(dS(in.x.point), dS(in.y.point)) - tail;
        rep.separation = std::min({sep_x, sep_y, tail_bound});
        rep.epsilon = rep.separation > 0.0 ? module.admissible_epsilon(rep.separation / 3.0) : 0.0;
        if (!(rep.epsilon > 0.0)) {
            rep.conditions[0].passed = false;
            rep.conditions[0].detail = "x or y is not isolated in S u O(x) u O(y) (separation " +
                                       fmt(rep.separation) + ")";
        }
    }
    return rep;
}

inline void require_hypotheses(const HypothesisReport& rep)
{
    if (!rep.passed()) throw HypothesisError(rep.failure_message());
}

template <class P>
Theorem1Chains<P> build_theorem1_chains(const ShadowingModule<P>& module, const Theorem1Input<P>& in,
                                        double epsilon, double delta)
{
    const auto& sys = module.system;
    if (!(delta > 0.0) || !(epsilon > 0.0)) throw ParameterError("epsilon and delta must be positive");
    auto match = [&](Index sign, Index& found, std::size_t& s_found) {
        for (Index n = 1; n <= in.n_window; ++n) {
            const P a = in.x.at(sign * n), b = in.y.at(sign * n);
            for (std::size_t s = 0; s < in.S.size(); ++s) {
                if (std::max(sys.metric(in.S[s], a), sys.metric(in.S[s], b)) <= delta) {
                    found = n;
                    s_found = s;
                    return true;
                }
            }
        }
        return false;
    };
    Theorem1Chains<P> c;
    if (!match(-1, c.k, c.w_index) || !match(+1, c.l, c.z_index))
        throw HypothesisError("window too small: no k, l <= " + std::to_string(in.n_window) +
                              " bring x and y within delta of S");
    const Index period = static_cast<Index>(in.S.size());
    c.j = (static_cast<Index>(c.w_index) - static_cast<Index>(c.z_index) + period) % period;
    if (c.j == 0) c.j = period;
    c.m = c.j + c.k + c.l;

    auto build = [&](const TrackedPoint<P>& t) {
        Chain<P> ch{sys.system_id, {}, 2.0 * delta};
        ch.points.reserve(static_cast<std::size_t>(c.m + 1));
        for (Index i = 0; i < c.j; ++i) ch.points.push_back(in.S[static_cast<std::size_t>((static_cast<Index>(c.z_index) + i) % period)]);
        for (Index i = -c.k; i < c.l; ++i) ch.points.push_back(t.at(i));
        ch.points.push_back(in.S[c.z_index]);
        if (!is_chain(sys, ch)) throw InternalError("assembled chain is not a 2 delta-chain");
        return ch;
    };
    c.chain_x = build(in.x);
    c.chain_y = build(in.y);
    return c;
}

/// Gamma over [0, r + l + n_max m]; `a` must cover every checkpoint.
template <class P>
PseudoOrbit<P> build_gamma(const ShadowingModule<P>& module, const Theorem1Input<P>& in,
                           const Theorem1Chains<P>& c, Index r, Index n_max, const std::vector<double>& a,
                           std::string* blocks = nullptr)
{
    const auto& sys = module.system;
    const Index period = static_cast<Index>(in.S.size());
    PseudoOrbit<P> g{sys.system_id, 0, {}, c.chain_x.delta};
    g.points.reserve(static_cast<std::size_t>(r + c.l + n_max * c.m + 1));
    for (Index i = 0; i <= r + c.l; ++i) {
        const Index s = ((static_cast<Index>(c.z_index) + i - r - c.l) % period + period) % period;
        g.points.push_back(in.S[static_cast<std::size_t>(s)]);
    }
    if (blocks) blocks->clear();
    for (Index h = 1; h <= n_max; ++h) {
        const bool use_x = a.at(static_cast<std::size_t>(r + h * c.m)) > 0.0;
        if (blocks) blocks->push_back(use_x ? 'x' : 'y');
        const auto& ch = use_x ? c.chain_x : c.chain_y;
        g.points.insert(g.points.end(), ch.points.begin() + 1, ch.points.end());
    }
    if (!is_pseudo_orbit(sys, g)) throw InternalError("Gamma is not a 2 delta-pseudo-orbit");
    for (Index h = 1; h <= n_max; ++h) {
        const bool use_x = a[static_cast<std::size_t>(r + h * c.m)] > 0.0;
        if (sys.metric(g.at(r + h * c.m), use_x ? in.x.point : in.y.point) != 0.0)
            throw InternalError("Gamma checkpoint misplaced at h = " + std::to_string(h));
    }
    return g;
}

template <class P>
BohrCertificate<P> certify_bohr(const ShadowingModule<P>& module, const Theorem1Input<P>& in)
{
    const auto& sys = module.system;
    if (in.n_max < 1) throw ConfigurationError("n_max must be positive");
    in.a.validate();
    BohrCertificate<P> cert;
    cert.hypotheses = verify_theorem1_hypotheses(module, in);
    require_hypotheses(cert.hypotheses);

    cert.system_id = sys.system_id;
    cert.exact = module.exact;
    cert.epsilon = cert.hypotheses.epsilon;
    cert.delta = module.delta_for(cert.epsilon) / 2.0;
    const auto chains = build_theorem1_chains(module, in, cert.epsilon, cert.delta);
    cert.k = chains.k;
    cert.l = chains.l;
    cert.j = chains.j;
    cert.m = chains.m;

    const auto a = generate(in.a, static_cast<std::size_t>(cert.m + cert.l + in.n_max * cert.m + 1));
    const auto residue = select_residue(a, cert.m, in.n_max, in.density_floor);
    cert.r = residue.r;
    cert.residue_average = residue.average;
    cert.density = density_report(a);

    cert.n_max = in.n_max;
    cert.n_window = in.n_window;
    cert.x = in.x.point;
    cert.y = in.y.point;
    cert.S = in.S;
    cert.chain_x = chains.chain_x;
    cert.chain_y = chains.chain_y;
    cert.sequence = in.a;
    cert.gamma_window = build_gamma(module, in, chains, cert.r, in.n_max, a, &cert.blocks);

    // Degenerate overlap guard.
    const Index checkpoint = cert.j + cert.k;
    for (const auto* ch : {&cert.chain_x, &cert.chain_y}) {
        for (Index t = 0; t <= cert.m; ++t) {
            if (t == checkpoint) continue;
            const P& q = ch->points[static_cast<std::size_t>(t)];
            if (sys.metric(q, cert.x) < 3.0 * cert.epsilon || sys.metric(q, cert.y) < 3.0 * cert.epsilon)
                throw HypothesisError("chain entry " + std::to_string(t) + " lies within 3 epsilon of x or y");
        }
    }

    auto shadow = module.shadow(cert.gamma_window, cert.epsilon, Tails{});
    if (shadow.certified_epsilon > cert.epsilon)
        throw InternalError("shadowing module certified a radius above epsilon");
    if (!is_shadowed_by_orbit(sys, cert.gamma_window, shadow.orbit, cert.epsilon))
        throw InternalError("shadow orbit leaves the epsilon-tube of Gamma");
    cert.shadow_base = shadow.base;
    if (!module.exact) cert.shadow_orbit = shadow.orbit;

    const PlateauFunction<P> phi(sys, {cert.x, cert.y, cert.epsilon});
    const Index total = cert.r + cert.l + in.n_max * cert.m;
    cert.sum_phi.assign(static_cast<std::size_t>(in.n_max + 1), 0.0);
    cert.sum_abs.assign(static_cast<std::size_t>(in.n_max + 1), 0.0);
    double acc = 0.0;
    Index n = 1;
    for (Index i = 0; i < total; ++i) {
        const double value = phi(shadow.orbit.at(i));
        const bool is_checkpoint = i > cert.r && (i - cert.r) % cert.m == 0;
        const double expected =
            is_checkpoint ? (a[static_cast<std::size_t>(i)] > 0.0 ? 1.0 : -1.0) : 0.0;
        if (std::fabs(value - expected) > module.identity_tolerance)
            throw InternalError("phi leaves its plateau at i = " + std::to_string(i));
        acc += a[static_cast<std::size_t>(i)] * value;
        if (i + 1 == cert.r + cert.l + n * cert.m) {
            cert.sum_phi[static_cast<std::size_t>(n)] = acc;
            cert.sum_abs[static_cast<std::size_t>(n)] =
                cert.sum_abs[static_cast<std::size_t>(n - 1)] + std::fabs(a[static_cast<std::size_t>(cert.r + n * cert.m)]);
            ++n;
        }
    }
    for (Index t = 1; t <= in.n_max; ++t) {
        const double lhs = cert.sum_phi[static_cast<std::size_t>(t)];
        const double rhs = cert.sum_abs[static_cast<std::size_t>(t)];
        const bool equal = module.exact ? lhs == rhs
                                        : std::fabs(lhs - rhs) <= module.identity_tolerance * static_cast<double>(t);
        if (!equal) throw InternalError("partial-sum identity violated at n = " + std::to_string(t));
    }
    cert.lower_bound =
        cert.sum_abs[static_cast<std::size_t>(in.n_max)] / static_cast<double>(in.n_max) / static_cast<double>(cert.m);
    cert.identity_tolerance = module.identity_tolerance;
    cert.orbit_tolerance = module.exact ? 0.0 : toral::orbit_step_tolerance;
    return cert;
}

/// Replays a certificate: the orbit of p by direct iteration (re-anchored on
/// the stored orbit only where the two agree to orbit_tolerance), phi from
/// its parameters, both columns from scratch.
template <class P>
CheckResult check_certificate(const SystemContract<P>& sys, const BohrCertificate<P>& cert)
{
    auto fail = [](std::optional<Index> n, std::string why) { return CheckResult{false, n, std::move(why)}; };
    if (cert.system_id != sys.system_id) return fail(std::nullopt, "certificate is for system '" + cert.system_id + "'");
    if (cert.m != cert.j + cert.k + cert.l || cert.m < 1 || cert.r < 0 || cert.r >= cert.m)
        return fail(std::nullopt, "inconsistent block parameters");
    if (cert.n_max < 1 || static_cast<Index>(cert.blocks.size()) != cert.n_max ||
        static_cast<Index>(cert.sum_phi.size()) != cert.n_max + 1 || static_cast<Index>(cert.sum_abs.size()) != cert.n_max + 1)
        return fail(std::nullopt, "table sizes do not match n_max");
    if (!(cert.epsilon > 0.0) || sys.metric(cert.x, cert.y) < 3.0 * cert.epsilon)
        return fail(std::nullopt, "x and y closer than 3 epsilon");

    const Index checkpoint = cert.j + cert.k;
    for (const auto* ch : {&cert.chain_x, &cert.chain_y}) {
        if (static_cast<Index>(ch->points.size()) != cert.m + 1 || !is_chain(sys, *ch) ||
            ch->delta > 2.0 * cert.delta)
            return fail(std::nullopt, "stored chains are not 2 delta-chains of length m");
        for (Index t = 0; t <= cert.m; ++t) {
            if (t == checkpoint) continue;
            const P& q = ch->points[static_cast<std::size_t>(t)];
            if (sys.metric(q, cert.x) < 3.0 * cert.epsilon || sys.metric(q, cert.y) < 3.0 * cert.epsilon)
                return fail(std::nullopt, "degenerate overlap: chain entry " + std::to_string(t) + " near x or y");
        }
    }
    if (sys.metric(cert.chain_x.points[static_cast<std::size_t>(checkpoint)], cert.x) != 0.0 ||
        sys.metric(cert.chain_y.points[static_cast<std::size_t>(checkpoint)], cert.y) != 0.0)
        return fail(std::nullopt, "chains do not pass through x and y at index j + k");

    const Index total = cert.r + cert.l + cert.n_max * cert.m;
    std::vector<double> a;
    try {
        a = generate(cert.sequence, static_cast<std::size_t>(total + cert.m + 1));
    }
    catch (const Error& e) {
        return fail(std::nullopt, std::string("sequence: ") + e.what());
    }
    for (Index h = 1; h <= cert.n_max; ++h) {
        const char want = a[static_cast<std::size_t>(cert.r + h * cert.m)] > 0.0 ? 'x' : 'y';
        if (cert.blocks[static_cast<std::size_t>(h - 1)] != want)
            return fail(h, "block selector disagrees with the sign of a_{r+hm}");
    }

    const PlateauFunction<P> phi(sys, {cert.x, cert.y, cert.epsilon});
    const auto* stored = cert.shadow_orbit ? &*cert.shadow_orbit : nullptr;
    auto anchor = [&](P q, Index i) {
        if (stored && stored->contains(i) && sys.metric(q, stored->at(i)) <= cert.orbit_tolerance) return stored->at(i);
        return q;
    };
    P q = anchor(cert.shadow_base, 0);
    double acc = 0.0, abs_acc = 0.0;
    Index n = 1;
    for (Index i = 0; i < total; ++i) {
        acc += a[static_cast<std::size_t>(i)] * phi(q);
        if (i + 1 == cert.r + cert.l + n * cert.m) {
            abs_acc += std::fabs(a[static_cast<std::size_t>(cert.r + n * cert.m)]);
            const double slack = cert.identity_tolerance * static_cast<double>(n);
            const double sp = cert.sum_phi[static_cast<std::size_t>(n)];
            const double sa = cert.sum_abs[static_cast<std::size_t>(n)];
            const bool ok = cert.exact ? (acc == sp && abs_acc == sa && sp == sa)
                                       : (std::fabs(acc - sp) <= slack && std::fabs(abs_acc - sa) <= slack &&
                                          std::fabs(sp - sa) <= slack);
            if (!ok) return fail(n, "partial sums disagree at n = " + std::to_string(n));
            ++n;
        }
        q = anchor(sys.forward(q), i + 1);
    }
    const double lb = cert.sum_abs.back() / static_cast<double>(cert.n_max) / static_cast<double>(cert.m);
    if (std::fabs(lb - cert.lower_bound) > 1e-12 * std::max(1.0, lb) || !(cert.lower_bound > 0.0))
        return fail(std::nullopt, "lower_bound inconsistent with the second column");
    return {true, std::nullopt, "ok"};
}

} // namespace chaoslab::bohr
