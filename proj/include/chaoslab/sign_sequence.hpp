#pragma once

// Bounded real sequences (a_i), i >= 0, fed to the Bohr certificate.

#include <cstdint>
#include <string>
#include <vector>

namespace chaoslab::bohr {

struct SignSequenceSpec {
    enum class Kind { constant_one, periodic, bernoulli, sparse_squares };

    Kind kind = Kind::constant_one;
    /// Values of one period, each |v| <= bound (periodic only).
    std::vector<double> pattern;
    /// P(a_i = +bound); otherwise -bound (bernoulli only).
    double p = 0.5;
    std::uint64_t seed = 0;
    double bound = 1.0;

    static SignSequenceSpec constant_one(double bound = 1.0);
    static SignSequenceSpec periodic(std::vector<double> pattern);
    static SignSequenceSpec bernoulli(double p, std::uint64_t seed, double bound = 1.0);
    static SignSequenceSpec sparse_squares(double bound = 1.0);

    /// "constant_one", "periodic:1,0,0", "bernoulli:p=0.5,seed=7", "sparse_squares",
    /// with an optional "bound=b" argument ("sparse_squares:bound=2").
    static SignSequenceSpec parse(const std::string& text);
    std::string str() const;

    void validate() const;
};

/// a_0, ..., a_{n-1}. Deterministic in the spec.
std::vector<double> generate(const SignSequenceSpec& spec, std::size_t n);

struct DensityPoint {
    std::size_t n = 0;
    double average = 0.0;
};

/// (1/n) sum_{i<n} |a_i| for n = 10, 100, ... and n = values.size().
std::vector<DensityPoint> density_report(const std::vector<double>& values);

} // namespace chaoslab::bohr
