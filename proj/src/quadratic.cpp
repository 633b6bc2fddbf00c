#include "chaoslab/quadratic.hpp"

#include <cmath>
#include <sstream>

namespace chaoslab {

namespace {

int rational_sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

std::int64_t common_d(const QuadraticNumber& x, const QuadraticNumber& y)
{
    if (x.b() == 0) return y.d();
    if (y.b() == 0) return x.d();
    if (x.d() != y.d()) throw DomainError("quadratic numbers from different fields");
    return x.d();
}

} // namespace

int QuadraticNumber::sign() const
{
    const int sa = rational_sign(a_);
    const int sb = rational_sign(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    const Rational lhs = a_ * a_;
    const Rational rhs = Rational(d_) * b_ * b_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
}

double QuadraticNumber::to_double() const
{
    const double root = std::sqrt(static_cast<double>(d_));
    const double a = static_cast<double>(a_);
    const double b = static_cast<double>(b_);
    if (rational_sign(a_) * rational_sign(b_) >= 0) return a + b * root;
    // Opposite signs: divide the norm by the conjugate to avoid cancellation.
    return static_cast<double>(norm()) / (a - b * root);
}

Rational QuadraticNumber::floor() const
{
    using boost::multiprecision::cpp_int;
    Rational f = Rational(cpp_int(static_cast<long long>(std::floor(to_double()))));
    const QuadraticNumber& self = *this;
    while ((self - rational(f, d_)).sign() < 0) f -= 1;
    while ((self - rational(f + 1, d_)).sign() >= 0) f += 1;
    return f;
}

QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y)
{
    return {x.a_ + y.a_, x.b_ + y.b_, common_d(x, y)};
}

QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y)
{
    return {x.a_ - y.a_, x.b_ - y.b_, common_d(x, y)};
}

QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y)
{
    const std::int64_t d = common_d(x, y);
    return {x.a_ * y.a_ + Rational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d};
}

QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y)
{
    const Rational n = y.norm();
    if (n == 0) throw DomainError("division by zero in quadratic field");
    QuadraticNumber num = x * y.conjugate();
    return {num.a_ / n, num.b_ / n, num.d_};
}

std::string QuadraticNumber::str() const
{
    std::ostringstream os;
    os << a_ << " + " << b_ << "*sqrt(" << d_ << ")";
    return os.str();
}

} // namespace chaoslab
