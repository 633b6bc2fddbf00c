#include "chaoslab/sign_sequence.hpp"

#include "chaoslab/errors.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace chaoslab::bohr {

namespace {

double parse_number(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    }
    catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigurationError("malformed " + what + " '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

bool is_square(std::size_t i)
{
    const auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(i)));
    for (std::size_t c = r > 0 ? r - 1 : 0; c <= r + 1; ++c) {
        if (c * c == i) return true;
    }
    return false;
}

} // namespace

SignSequenceSpec SignSequenceSpec::constant_one(double bound)
{
    SignSequenceSpec s;
    s.bound = bound;
    return s;
}

SignSequenceSpec SignSequenceSpec::periodic(std::vector<double> pattern)
{
    SignSequenceSpec s;
    s.kind = Kind::periodic;
    s.bound = 0.0;
    for (double v : pattern) s.bound = std::max(s.bound, std::fabs(v));
    s.pattern = std::move(pattern);
    return s;
}

SignSequenceSpec SignSequenceSpec::bernoulli(double p, std::uint64_t seed, double bound)
{
    SignSequenceSpec s;
    s.kind = Kind::bernoulli;
    s.p = p;
    s.seed = seed;
    s.bound = bound;
    return s;
}

SignSequenceSpec SignSequenceSpec::sparse_squares(double bound)
{
    SignSequenceSpec s;
    s.kind = Kind::sparse_squares;
    s.bound = bound;
    return s;
}

SignSequenceSpec SignSequenceSpec::parse(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::vector<std::string> args = colon == std::string::npos ? std::vector<std::string>{}
                                                                      : split(text.substr(colon + 1), ',');
    SignSequenceSpec s;
    std::vector<double> pattern;
    bool bound_given = false;
    for (const auto& a : args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) {
            if (head != "periodic") throw ConfigurationError("unexpected sequence argument '" + a + "'");
            pattern.push_back(parse_number(a, "pattern value"));
            continue;
        }
        const std::string key = a.substr(0, eq);
        const std::string value = a.substr(eq + 1);
        if (key == "bound") {
            s.bound = parse_number(value, "bound");
            bound_given = true;
        }
        else if (key == "p" && head == "bernoulli") {
            s.p = parse_number(value, "probability");
        }
        else if (key == "seed" && head == "bernoulli") {
            try {
                std::size_t used = 0;
                s.seed = std::stoull(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            }
            catch (const std::exception&) {
                throw ConfigurationError("malformed seed '" + value + "'");
            }
        }
        else {
            throw ConfigurationError("unknown sequence parameter '" + key + "' for " + head);
        }
    }
    if (head == "constant_one") s.kind = Kind::constant_one;
    else if (head == "bernoulli") s.kind = Kind::bernoulli;
    else if (head == "sparse_squares") s.kind = Kind::sparse_squares;
    else if (head == "periodic") {
        const double bound = s.bound;
        s = periodic(pattern);
        if (bound_given) s.bound = bound;
    }
    else {
        throw ConfigurationError("unknown sequence kind '" + head + "'");
    }
    s.validate();
    return s;
}

std::string SignSequenceSpec::str() const
{
    std::string out;
    switch (kind) {
    case Kind::constant_one:
        out = "constant_one";
        break;
    case Kind::sparse_squares:
        out = "sparse_squares";
        break;
    case Kind::bernoulli:
        out = "bernoulli:p=" + format_number(p) + ",seed=" + std::to_string(seed);
        break;
    case Kind::periodic:
        out = "periodic:";
        for (std::size_t i = 0; i < pattern.size(); ++i) out += (i ? "," : "") + format_number(pattern[i]);
        break;
    }
    out += std::string(kind == Kind::constant_one || kind == Kind::sparse_squares ? ":" : ",") +
           "bound=" + format_number(bound);
    return out;
}

void SignSequenceSpec::validate() const
{
    if (!(bound > 0.0) || !std::isfinite(bound)) throw ConfigurationError("sequence bound must be positive");
    if (kind == Kind::periodic) {
        if (pattern.empty()) throw ConfigurationError("periodic sequence needs a nonempty pattern");
        for (double v : pattern) {
            if (!std::isfinite(v) || std::fabs(v) > bound) throw ConfigurationError("pattern value exceeds bound");
        }
    }
    if (kind == Kind::bernoulli && !(p >= 0.0 && p <= 1.0))
        throw ConfigurationError("bernoulli probability must lie in [0, 1]");
}

std::vector<double> generate(const SignSequenceSpec& spec, std::size_t n)
{
    spec.validate();
    std::vector<double> a(n, 0.0);
    switch (spec.kind) {
    case SignSequenceSpec::Kind::constant_one:
        std::fill(a.begin(), a.end(), spec.bound);
        break;
    case SignSequenceSpec::Kind::periodic:
        for (std::size_t i = 0; i < n; ++i) a[i] = spec.pattern[i % spec.pattern.size()];
        break;
    case SignSequenceSpec::Kind::bernoulli: {
        std::mt19937_64 rng(spec.seed);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            a[i] = u < spec.p ? spec.bound : -spec.bound;
        }
        break;
    }
    case SignSequenceSpec::Kind::sparse_squares:
        for (std::size_t i = 0; i < n; ++i) a[i] = is_square(i) ? spec.bound : 0.0;
        break;
    }
    return a;
}

std::vector<DensityPoint> density_report(const std::vector<double>& values)
{
    std::vector<DensityPoint> out;
    double sum = 0.0;
    std::size_t next = 10;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += std::fabs(values[i]);
        if (i + 1 == next && next < values.size()) {
            out.push_back({next, sum / static_cast<double>(next)});
            next *= 10;
        }
    }
    if (!values.empty()) out.push_back({values.size(), sum / static_cast<double>(values.size())});
    return out;
}

} // namespace chaoslab::bohr
