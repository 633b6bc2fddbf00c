#include "chaoslab/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace chaoslab::symbolic {

namespace {

Index floor_mod(Index a, Index n)
{
    Index r = a % n;
    return r < 0 ? r + n : r;
}

Word primitive_root(const Word& w)
{
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
        if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
    }
    return w;
}

void check_word(const Word& w, int alphabet, const char* what, bool allow_empty)
{
    if (w.empty() && !allow_empty) throw DomainError(std::string(what) + " must be nonempty");
    for (Symbol s : w) {
        if (s >= alphabet) throw DomainError(std::string(what) + " uses a symbol outside the alphabet");
    }
}

} // namespace

char symbol_char(Symbol s)
{
    return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

Symbol parse_symbol(char c, int alphabet_size)
{
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
    if (v < 0 || v >= alphabet_size) throw DomainError(std::string("invalid symbol '") + c + "'");
    return static_cast<Symbol>(v);
}

Word parse_word(std::string_view text, int alphabet_size)
{
    Word w;
    w.reserve(text.size());
    for (char c : text) w.push_back(parse_symbol(c, alphabet_size));
    return w;
}

std::string word_string(const Word& w)
{
    std::string s;
    s.reserve(w.size());
    for (Symbol c : w) s.push_back(symbol_char(c));
    return s;
}

BiInfSeq::BiInfSeq(int alphabet_size, Word left_period, Word core, Word right_period, Index offset)
{
    if (alphabet_size < 2 || alphabet_size > max_alphabet) throw DomainError("alphabet size out of range");
    check_word(left_period, alphabet_size, "left period", false);
    check_word(right_period, alphabet_size, "right period", false);
    check_word(core, alphabet_size, "core", true);

    const Word lp = primitive_root(left_period);
    const Word rp = primitive_root(right_period);
    const Index q = static_cast<Index>(lp.size());
    const Index p = static_cast<Index>(rp.size());
    const Index cs = -offset;
    const Index ce = cs + static_cast<Index>(core.size());

    auto raw = [&](Index i) -> Symbol {
        if (i >= ce) return rp[static_cast<std::size_t>(floor_mod(i - ce, p))];
        if (i >= cs) return core[static_cast<std::size_t>(i - cs)];
        return lp[static_cast<std::size_t>(floor_mod(i - cs, q))];
    };
    auto slice = [&](Index from, Index count) {
        Word w(static_cast<std::size_t>(count));
        for (Index t = 0; t < count; ++t) w[static_cast<std::size_t>(t)] = raw(from + t);
        return w;
    };

    auto data = std::make_shared<Data>();
    data->alphabet = alphabet_size;

    // Earliest start of the right tail.
    Index r = ce;
    bool periodic_everywhere = false;
    while (raw(r - 1) == raw(r - 1 + p)) {
        --r;
        if (r < cs - (q + p)) {
            periodic_everywhere = true;
            break;
        }
    }

    if (periodic_everywhere) {
        Index best = 0;
        Word best_word = slice(0, p);
        for (Index b = 1; b < p; ++b) {
            Word cand = slice(b, p);
            if (cand < best_word) {
                best_word = std::move(cand);
                best = b;
            }
        }
        data->left = best_word;
        data->right = best_word;
        data->purely_periodic = true;
        data_ = std::move(data);
        offset_ = -best;
        return;
    }

    // Latest end of the left tail, not crossing the right tail.
    Index l = std::min(cs - 1, r - 1);
    while (l + 1 < r && raw(l + 1) == raw(l + 1 - q)) ++l;

    data->left = slice(l - q + 1, q);
    data->core = slice(l + 1, r - l - 1);
    data->right = slice(r, p);
    data_ = std::move(data);
    offset_ = -(l + 1);
}

BiInfSeq::BiInfSeq() : BiInfSeq(constant(2, 0)) {}

BiInfSeq BiInfSeq::constant(int alphabet_size, Symbol s)
{
    return BiInfSeq(alphabet_size, Word{s}, Word{}, Word{s}, 0);
}

BiInfSeq BiInfSeq::periodic(int alphabet_size, const Word& period, Index phase)
{
    if (period.empty()) throw DomainError("period must be nonempty");
    const Index n = static_cast<Index>(period.size());
    const Index ph = floor_mod(phase, n);
    // Core starts at coordinate -ph and holds one period.
    return BiInfSeq(alphabet_size, period, period, period, ph);
}

Symbol BiInfSeq::at(Index i) const
{
    const Data& d = *data_;
    const Index cs = -offset_;
    const Index ce = cs + static_cast<Index>(d.core.size());
    if (i >= ce) return d.right[static_cast<std::size_t>(floor_mod(i - ce, static_cast<Index>(d.right.size())))];
    if (i >= cs) return d.core[static_cast<std::size_t>(i - cs)];
    return d.left[static_cast<std::size_t>(floor_mod(i - cs, static_cast<Index>(d.left.size())))];
}

Word BiInfSeq::window(Index from, Index to) const
{
    Word w;
    if (to < from) return w;
    w.reserve(static_cast<std::size_t>(to - from + 1));
    for (Index i = from; i <= to; ++i) w.push_back(at(i));
    return w;
}

BiInfSeq BiInfSeq::shifted(Index n) const
{
    Index off = offset_ + n;
    if (data_->purely_periodic) {
        const Index p = static_cast<Index>(data_->right.size());
        off = -floor_mod(-off, p);
    }
    return BiInfSeq(data_, off);
}

bool operator==(const BiInfSeq& a, const BiInfSeq& b)
{
    if (a.offset_ != b.offset_) return false;
    if (a.data_ == b.data_) return true;
    const auto& x = *a.data_;
    const auto& y = *b.data_;
    return x.alphabet == y.alphabet && x.core == y.core && x.right == y.right && x.left == y.left;
}

std::string BiInfSeq::describe() const
{
    std::ostringstream os;
    os << "(" << word_string(left_period()) << ")^inf " << word_string(core()) << " (" << word_string(right_period())
       << ")^inf @" << offset_;
    return os.str();
}

std::optional<Index> first_disagreement(const BiInfSeq& x, const BiInfSeq& y)
{
    if (x.alphabet_size() != y.alphabet_size()) throw DomainError("sequences over different alphabets");
    if (x == y) return std::nullopt;
    // Distinct canonical forms always differ somewhere within this radius.
    const Index span = std::max({std::abs(x.core_start()), std::abs(x.core_end()), std::abs(y.core_start()),
                                 std::abs(y.core_end())});
    const Index periods = static_cast<Index>(x.left_period().size() * y.left_period().size() +
                                             x.right_period().size() * y.right_period().size());
    const Index limit = span + periods + 2;
    for (Index i = 0; i <= limit; ++i) {
        if (x.at(i) != y.at(i) || x.at(-i) != y.at(-i)) return i;
    }
    throw InternalError("distinct canonical sequences agree on the whole scan range");
}

double shift_metric(const BiInfSeq& x, const BiInfSeq& y)
{
    const auto k = first_disagreement(x, y);
    if (!k) return 0.0;
    return std::ldexp(1.0, -static_cast<int>(std::min<Index>(*k, 2000)));
}

SftSystem::SftSystem(std::string name, int alphabet_size, std::vector<std::vector<int>> transitions)
    : name_(std::move(name)), alphabet_(alphabet_size), transitions_(std::move(transitions))
{
    if (alphabet_ < 2 || alphabet_ > max_alphabet) throw ConfigurationError("alphabet size out of range");
    if (static_cast<int>(transitions_.size()) != alphabet_)
        throw ConfigurationError("transition matrix must be " + std::to_string(alphabet_) + " x " +
                                 std::to_string(alphabet_));
    for (const auto& row : transitions_) {
        if (static_cast<int>(row.size()) != alphabet_) throw ConfigurationError("transition matrix is not square");
        for (int v : row) {
            if (v != 0 && v != 1) throw ConfigurationError("transition matrix entries must be 0 or 1");
        }
    }
    for (int a = 0; a < alphabet_; ++a) {
        bool row = false;
        bool col = false;
        for (int b = 0; b < alphabet_; ++b) {
            row = row || transitions_[a][b];
            col = col || transitions_[b][a];
        }
        if (!row || !col)
            throw ConfigurationError("transition matrix has an all-zero row or column at symbol " +
                                     std::to_string(a));
    }
}

bool SftSystem::admissible(const Word& w) const
{
    for (Symbol s : w) {
        if (s >= alphabet_) return false;
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!allowed(w[i], w[i + 1])) return false;
    }
    return true;
}

bool SftSystem::contains(const BiInfSeq& x) const
{
    if (x.alphabet_size() != alphabet_) return false;
    const Word& lp = x.left_period();
    const Word& rp = x.right_period();
    const Word& core = x.core();
    auto cyclic_ok = [&](const Word& w) { return admissible(w) && allowed(w.back(), w.front()); };
    if (!cyclic_ok(lp) || !cyclic_ok(rp) || !admissible(core)) return false;
    const Symbol after_left = core.empty() ? rp.front() : core.front();
    if (!allowed(lp.back(), after_left)) return false;
    if (!core.empty() && !allowed(core.back(), rp.front())) return false;
    return true;
}

BiInfSeq SftSystem::extend(const Word& w, Index first) const
{
    if (w.empty() || !admissible(w)) throw DomainError("cannot extend an inadmissible word");

    auto walk = [&](Symbol start, bool forward) {
        // Returns (prefix, cycle) of the deterministic walk from start.
        std::vector<int> seen(static_cast<std::size_t>(alphabet_), -1);
        Word path;
        Symbol cur = start;
        for (;;) {
            Symbol next = 0;
            bool found = false;
            for (int b = 0; b < alphabet_ && !found; ++b) {
                if (forward ? allowed(cur, static_cast<Symbol>(b)) : allowed(static_cast<Symbol>(b), cur)) {
                    next = static_cast<Symbol>(b);
                    found = true;
                }
            }
            if (seen[next] >= 0) {
                const auto cut = static_cast<std::ptrdiff_t>(seen[next]);
                return std::pair{Word(path.begin(), path.begin() + cut), Word(path.begin() + cut, path.end())};
            }
            seen[next] = static_cast<int>(path.size());
            path.push_back(next);
            cur = next;
        }
    };

    auto [right_prefix, right_cycle] = walk(w.back(), true);
    auto [left_prefix, left_cycle] = walk(w.front(), false);
    // Left walk runs right-to-left.
    std::reverse(left_prefix.begin(), left_prefix.end());
    std::reverse(left_cycle.begin(), left_cycle.end());

    Word core = left_prefix;
    core.insert(core.end(), w.begin(), w.end());
    core.insert(core.end(), right_prefix.begin(), right_prefix.end());
    const Index core_start = first - static_cast<Index>(left_prefix.size());
    return BiInfSeq(alphabet_, left_cycle, core, right_cycle, -core_start);
}

std::vector<Word> SftSystem::admissible_words(int n) const
{
    std::vector<Word> words;
    if (n <= 0) return words;
    for (int a = 0; a < alphabet_; ++a) words.push_back(Word{static_cast<Symbol>(a)});
    for (int len = 1; len < n; ++len) {
        std::vector<Word> next;
        for (const Word& w : words) {
            for (int b = 0; b < alphabet_; ++b) {
                if (allowed(w.back(), static_cast<Symbol>(b))) {
                    Word e = w;
                    e.push_back(static_cast<Symbol>(b));
                    next.push_back(std::move(e));
                }
            }
        }
        words = std::move(next);
    }
    return words;
}

std::uint64_t SftSystem::count_words(int n) const
{
    if (n <= 0) return 0;
    std::vector<std::uint64_t> ending(static_cast<std::size_t>(alphabet_), 1);
    for (int len = 1; len < n; ++len) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(alphabet_), 0);
        for (int a = 0; a < alphabet_; ++a) {
            for (int b = 0; b < alphabet_; ++b) {
                if (transitions_[a][b]) next[b] += ending[a];
            }
        }
        ending = std::move(next);
    }
    return std::accumulate(ending.begin(), ending.end(), std::uint64_t{0});
}

SystemContract<BiInfSeq> SftSystem::contract() const
{
    SystemContract<BiInfSeq> c;
    c.system_id = name_;
    c.forward = [](const BiInfSeq& x) { return x.shifted(1); };
    c.backward = [](const BiInfSeq& x) { return x.shifted(-1); };
    c.metric = [](const BiInfSeq& x, const BiInfSeq& y) { return shift_metric(x, y); };
    c.diameter_bound = 1.0;
    c.expansive_constant = 0.5;
    c.lipschitz_bound = 2.0;
    c.comparison_tolerance = 0.0;
    return c;
}

SftSystem full_shift(int alphabet_size)
{
    std::vector<std::vector<int>> t(static_cast<std::size_t>(alphabet_size),
                                    std::vector<int>(static_cast<std::size_t>(alphabet_size), 1));
    return SftSystem(alphabet_size == 2 ? "fullshift2" : "fullshift" + std::to_string(alphabet_size),
                     alphabet_size, std::move(t));
}

SftSystem golden_mean() { return SftSystem("golden-mean", 2, {{1, 1}, {1, 0}}); }

SftSystem two_fixed_points() { return SftSystem("two-fixed", 2, {{1, 0}, {0, 1}}); }

std::optional<int> dyadic_exponent(double delta)
{
    if (!(delta > 0.0) || delta > 1.0) return std::nullopt;
    int exp = 0;
    const double mant = std::frexp(delta, &exp);
    if (mant != 0.5) return std::nullopt;
    return 1 - exp;
}

double round_down_dyadic(double delta)
{
    if (!(delta > 0.0)) throw DomainError("dyadic rounding needs a positive value");
    if (delta >= 1.0) return 1.0;
    int exp = 0;
    std::frexp(delta, &exp);
    double d = std::ldexp(1.0, exp - 1);
    return d;
}

namespace {

// z on [lo, hi) from three sources, with tails copied from the outer ones.
BiInfSeq splice(int alphabet, const BiInfSeq& left, Index i_min, const Word& middle, Index i_max,
                const BiInfSeq& right)
{
    const Index lo = std::min(i_min, left.core_start());
    const Index hi = std::max(i_max + 1, right.core_end());
    Word core;
    core.reserve(static_cast<std::size_t>(hi - lo));
    for (Index i = lo; i < hi; ++i) {
        if (i < i_min) core.push_back(left.at(i));
        else if (i <= i_max) core.push_back(middle[static_cast<std::size_t>(i - i_min)]);
        else core.push_back(right.at(i));
    }
    const Index q = static_cast<Index>(left.left_period().size());
    const Index p = static_cast<Index>(right.right_period().size());
    return BiInfSeq(alphabet, left.window(lo - q, lo - 1), std::move(core), right.window(hi, hi + p - 1), -lo);
}

} // namespace

SymbolicShadow shadow_sft(const SftSystem& system, const PseudoOrbit<BiInfSeq>& po, double delta, Tails tails)
{
    const auto contract = system.contract();
    require_same_system(contract, po.system_id);
    const auto t = dyadic_exponent(delta);
    if (!t || *t < 2) throw ParameterError("shadowing radius must be 2^-(k+1) with k >= 1");
    if (po.points.empty()) throw DomainError("empty pseudo-orbit");
    if (po.delta > delta) throw ParameterError("pseudo-orbit delta exceeds the shadowing radius");
    for (const auto& w : po.points) {
        if (!system.contains(w)) throw DomainError("pseudo-orbit point outside the subshift");
    }
    if (max_defect(contract, po.points) > delta) throw ParameterError("pseudo-orbit defects exceed delta");

    Word middle;
    middle.reserve(po.points.size());
    for (const auto& w : po.points) middle.push_back(w.at(0));

    std::optional<BiInfSeq> z;
    if (tails.kind == TailKind::periodic) {
        const Index period = tails.period;
        if (period < 1 || period > po.size()) throw DomainError("tail period must fit in the window");
        const auto& first = po.at(po.i_min);
        const auto& last = po.at(po.i_max());
        if (shift_metric(contract.forward(po.at(po.i_min + period - 1)), first) > delta ||
            shift_metric(contract.forward(last), po.at(po.i_max() - period + 1)) > delta)
            throw ParameterError("periodic tail junctions exceed delta");
        Word lp(middle.begin(), middle.begin() + period);
        Word rp(middle.end() - period, middle.end());
        z.emplace(system.alphabet_size(), std::move(lp), middle, std::move(rp), -po.i_min);
    }
    else {
        const auto left = po.at(po.i_min).shifted(-po.i_min);
        const auto right = po.at(po.i_max()).shifted(-po.i_max());
        z.emplace(splice(system.alphabet_size(), left, po.i_min, middle, po.i_max(), right));
    }

    if (!system.contains(*z)) throw InternalError("shadow point violates the transition matrix");
    if (!is_shadowed_by(contract, po, *z, delta)) throw InternalError("shadow point fails the shadowing check");
    return {*z, delta};
}

PseudoOrbit<BiInfSeq> random_pseudo_orbit(const SftSystem& system, int t, std::size_t length, std::uint64_t seed)
{
    if (t < 1) throw ParameterError("pseudo-orbit delta must be 2^-t with t >= 1");
    if (length == 0) throw ParameterError("pseudo-orbit length must be positive");
    std::mt19937_64 rng(seed);
    const int a = system.alphabet_size();
    auto pick = [&](Symbol from, bool forward) {
        std::vector<Symbol> options;
        for (int b = 0; b < a; ++b) {
            const auto s = static_cast<Symbol>(b);
            if (forward ? system.allowed(from, s) : system.allowed(s, from)) options.push_back(s);
        }
        return options[rng() % options.size()];
    };
    PseudoOrbit<BiInfSeq> po{system.name(), 0, {}, std::ldexp(1.0, -t)};
    po.points.reserve(length);
    Word w{static_cast<Symbol>(rng() % static_cast<std::uint64_t>(a))};
    while (static_cast<int>(w.size()) < 2 * t + 1) w.push_back(pick(w.back(), true));
    po.points.push_back(system.extend(w, -t));
    while (po.points.size() < length) {
        Word u = po.points.back().window(-t + 2, t);
        const Symbol right = pick(u.back(), true);
        const Symbol left = pick(u.front(), false);
        u.insert(u.begin(), left);
        u.push_back(right);
        po.points.push_back(system.extend(u, -t));
    }
    return po;
}

double expansive_constant_sft(const SftSystem&) { return 0.5; }

HomoclinicPair homoclinic_pair_fullshift()
{
    const BiInfSeq zero = BiInfSeq::constant(2, 0);
    const BiInfSeq x(2, Word{0}, Word{1}, Word{0}, 0);
    const BiInfSeq y(2, Word{0}, Word{1, 1}, Word{0}, 0);
    return {zero, x, y};
}

} // namespace chaoslab::symbolic
