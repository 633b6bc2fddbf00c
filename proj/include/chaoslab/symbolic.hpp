#pragma once

// Exact two-sided symbolic dynamics over a finite alphabet: eventually
// periodic points, the shift, memory-1 subshifts of finite type, and exact
// shadowing of dyadic pseudo-orbits.

#include "chaoslab/core.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chaoslab::symbolic {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

inline constexpr int max_alphabet = 36;

/// Symbols print as 0-9 then a-z.
char symbol_char(Symbol s);
Symbol parse_symbol(char c, int alphabet_size);
Word parse_word(std::string_view text, int alphabet_size);
std::string word_string(const Word& w);

/// An eventually periodic bi-infinite sequence
///
///     ... L L L  c_0 c_1 ... c_{n-1}  R R R ...
///
/// where coordinate 0 sits at core position `offset` (so the core starts at
/// coordinate -offset). Always held in canonical form: primitive periods,
/// shortest core with the right tail absorbed first, and for purely periodic
/// sequences an empty core whose period is the least rotation. Two values
/// are equal iff they represent the same sequence.
class BiInfSeq {
public:
    /// 0^inf over {0, 1}.
    BiInfSeq();
    BiInfSeq(int alphabet_size, Word left_period, Word core, Word right_period, Index offset);

    static BiInfSeq constant(int alphabet_size, Symbol s);
    /// x_i = period[(i + phase) mod |period|]
    static BiInfSeq periodic(int alphabet_size, const Word& period, Index phase = 0);

    int alphabet_size() const { return data_->alphabet; }
    const Word& left_period() const { return data_->left; }
    const Word& core() const { return data_->core; }
    const Word& right_period() const { return data_->right; }
    Index offset() const { return offset_; }
    bool purely_periodic() const { return data_->purely_periodic; }

    /// Coordinate of core[0] and one past the last core coordinate.
    Index core_start() const { return -offset_; }
    Index core_end() const { return -offset_ + static_cast<Index>(data_->core.size()); }

    Symbol at(Index i) const;
    /// Symbols on coordinates [from, to].
    Word window(Index from, Index to) const;

    /// sigma^n: (sigma^n x)_i = x_{i+n}. Shares storage with *this.
    BiInfSeq shifted(Index n) const;

    friend bool operator==(const BiInfSeq& a, const BiInfSeq& b);
    friend bool operator!=(const BiInfSeq& a, const BiInfSeq& b) { return !(a == b); }

    std::string describe() const;

private:
    struct Data {
        int alphabet = 2;
        Word left;
        Word core;
        Word right;
        bool purely_periodic = false;
    };

    BiInfSeq(std::shared_ptr<const Data> data, Index offset) : data_(std::move(data)), offset_(offset) {}

    std::shared_ptr<const Data> data_;
    Index offset_ = 0;
};

/// Smallest |i| with x_i != y_i, or nothing when x == y.
std::optional<Index> first_disagreement(const BiInfSeq& x, const BiInfSeq& y);

/// 0 if x == y, else 2^-k with k = min{|i| : x_i != y_i}.
double shift_metric(const BiInfSeq& x, const BiInfSeq& y);

/// Memory-1 subshift of finite type (vertex shift).
class SftSystem {
public:
    SftSystem(std::string name, int alphabet_size, std::vector<std::vector<int>> transitions);

    const std::string& name() const { return name_; }
    int alphabet_size() const { return alphabet_; }
    const std::vector<std::vector<int>>& transitions() const { return transitions_; }

    bool allowed(Symbol a, Symbol b) const { return transitions_[a][b] != 0; }
    bool admissible(const Word& w) const;
    bool contains(const BiInfSeq& x) const;

    /// Some admissible point agreeing with w on coordinates
    /// [first, first + |w| - 1]; tails follow least allowed successors and
    /// predecessors. Deterministic.
    BiInfSeq extend(const Word& w, Index first) const;

    /// All admissible words of length n in lexicographic order.
    std::vector<Word> admissible_words(int n) const;
    /// Number of admissible words of length n (matrix powers).
    std::uint64_t count_words(int n) const;

    SystemContract<BiInfSeq> contract() const;

private:
    std::string name_;
    int alphabet_;
    std::vector<std::vector<int>> transitions_;
};

SftSystem full_shift(int alphabet_size = 2);
/// Forbidden word 11.
SftSystem golden_mean();
/// Only 00 and 11 allowed: two fixed points and nothing else.
SftSystem two_fixed_points();

/// t if delta == 2^-t exactly.
std::optional<int> dyadic_exponent(double delta);
/// Largest 2^-t <= delta (t >= 0).
double round_down_dyadic(double delta);

enum class TailKind { true_orbit, periodic };

/// How a finite window continues outside its index range.
struct Tails {
    TailKind kind = TailKind::true_orbit;
    /// For periodic tails: w_i = w_{i+period} left of the window and
    /// w_i = w_{i-period} right of it.
    Index period = 0;
};

struct SymbolicShadow {
    BiInfSeq point;
    double certified_epsilon = 0.0;
};

/// Exact shadowing: delta must be 2^-(k+1) with k >= 1 and the window's
/// defects must not exceed it. Returns z with z_i = (w_i)_0 and epsilon =
/// delta.
SymbolicShadow shadow_sft(const SftSystem& system, const PseudoOrbit<BiInfSeq>& po, double delta,
                          Tails tails = {});

/// Seeded 2^-t-pseudo-orbit on [0, length): each step keeps the shifted
/// point on |i| <= t-1 and redraws coordinates +-t at random.
PseudoOrbit<BiInfSeq> random_pseudo_orbit(const SftSystem& system, int t, std::size_t length, std::uint64_t seed);

/// 1/2: if sup_{|i|<=N} d(sigma^i x, sigma^i y) <= 1/2 then x, y agree on [-N, N].
double expansive_constant_sft(const SftSystem& system);

struct HomoclinicPair {
    BiInfSeq fixed_point;
    BiInfSeq x;
    BiInfSeq y;
};

/// S = {0^inf}, x with a single 1 at coordinate 0, y with 1s at 0 and 1.
HomoclinicPair homoclinic_pair_fullshift();

} // namespace chaoslab::symbolic
