#pragma once

#include "chaoslab/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace chaoslab {

using Rational = boost::multiprecision::cpp_rational;

/// a + b*sqrt(d) with rational a, b and a fixed squarefree-free positive d
/// that is not a perfect square. Mixed-d arithmetic is rejected.
class QuadraticNumber {
public:
    QuadraticNumber() = default;
    QuadraticNumber(Rational a, Rational b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {}
    static QuadraticNumber rational(Rational a, std::int64_t d) { return {std::move(a), 0, d}; }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    std::int64_t d() const { return d_; }

    QuadraticNumber conjugate() const { return {a_, -b_, d_}; }
    /// a^2 - d b^2
    Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

    int sign() const;
    bool is_zero() const { return a_ == 0 && b_ == 0; }
    double to_double() const;
    /// Exact floor.
    Rational floor() const;

    QuadraticNumber operator-() const { return {-a_, -b_, d_}; }
    friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y);
    friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y);
    friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
    }
    friend bool operator!=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(x == y); }

    std::string str() const;

private:
    Rational a_ = 0;
    Rational b_ = 0;
    std::int64_t d_ = 1;
};

} // namespace chaoslab
