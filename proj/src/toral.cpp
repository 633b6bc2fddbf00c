#include "chaoslab/toral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace chaoslab::toral {

double reduce_mod1(double v)
{
    double r = v - std::floor(v);
    if (r >= 1.0) r = 0.0;
    return r;
}

TorusPoint::TorusPoint(double x_, double y_) : x(reduce_mod1(x_)), y(reduce_mod1(y_)) {}

Eigen::Vector2d lift(const Eigen::Vector2d& v)
{
    Eigen::Vector2d out;
    for (int k = 0; k < 2; ++k) {
        double r = v[k] - std::floor(v[k] + 0.5);
        if (r >= 0.5) r -= 1.0;
        out[k] = r;
    }
    return out;
}

double torus_distance(const TorusPoint& p, const TorusPoint& q)
{
    auto wrap = [](double a, double b) {
        double d = std::fabs(a - b);
        d -= std::floor(d);
        return std::min(d, 1.0 - d);
    };
    return std::max(wrap(p.x, q.x), wrap(p.y, q.y));
}

ToralMap::ToralMap(std::string name, const IntMatrix& m) : name_(std::move(name)), matrix_(m)
{
    det_ = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const long trace = m[0][0] + m[1][1];
    if (det_ != 1 && det_ != -1) throw ConstructionError("toral matrix must have determinant +-1");
    if (std::labs(trace) <= 2) throw ConstructionError("toral matrix is not hyperbolic (|trace| <= 2)");
    inverse_ = {{{det_ * m[1][1], -det_ * m[0][1]}, {-det_ * m[1][0], det_ * m[0][0]}}};
    disc_ = static_cast<std::int64_t>(trace) * trace - 4 * det_;

    const Rational half_trace(Rational(trace) / 2);
    const Rational half(Rational(1) / 2);
    const QuadraticNumber plus(half_trace, half, disc_);
    const QuadraticNumber minus(half_trace, -half, disc_);
    lambda_u_ = trace > 0 ? plus : minus;
    lambda_s_ = trace > 0 ? minus : plus;

    // b != 0 for every hyperbolic determinant +-1 matrix, so (b, lambda - a)
    // is a nonzero eigenvector.
    auto eigvec = [&](const QuadraticNumber& lambda) {
        return ExactVector{QuadraticNumber::rational(Rational(m[0][1]), disc_),
                           lambda - QuadraticNumber::rational(Rational(m[0][0]), disc_)};
    };
    v_u_ = eigvec(lambda_u_);
    v_s_ = eigvec(lambda_s_);
    if (!eigen_identity_holds()) throw InternalError("eigen identity failed");

    lu_ = lambda_u_.to_double();
    ls_ = lambda_s_.to_double();
    auto normalized = [](const ExactVector& v) {
        Eigen::Vector2d d(v.x.to_double(), v.y.to_double());
        return Eigen::Vector2d(d / d.cwiseAbs().maxCoeff());
    };
    eu_ = normalized(v_u_);
    es_ = normalized(v_s_);
    Eigen::Matrix2d basis;
    basis.col(0) = eu_;
    basis.col(1) = es_;
    basis_inverse_ = basis.inverse();
    kappa_ = basis_inverse_.cwiseAbs().rowwise().sum().maxCoeff();
    const double mu = std::fabs(lu_);
    shadowing_constant_ = kappa_ * (mu + 1.0) / (mu - 1.0);
    norm_ = std::max(std::fabs(m[0][0]) + std::fabs(m[0][1]), std::fabs(m[1][0]) + std::fabs(m[1][1]));
}

bool ToralMap::eigen_identity_holds() const
{
    auto check = [&](const QuadraticNumber& lambda, const ExactVector& v) {
        auto q = [&](long c) { return QuadraticNumber::rational(Rational(c), disc_); };
        const QuadraticNumber ax = q(matrix_[0][0]) * v.x + q(matrix_[0][1]) * v.y;
        const QuadraticNumber ay = q(matrix_[1][0]) * v.x + q(matrix_[1][1]) * v.y;
        return (ax - lambda * v.x).is_zero() && (ay - lambda * v.y).is_zero();
    };
    return check(lambda_u_, v_u_) && check(lambda_s_, v_s_);
}

Eigen::Vector2d ToralMap::linear(const Eigen::Vector2d& v) const
{
    return {matrix_[0][0] * v[0] + matrix_[0][1] * v[1], matrix_[1][0] * v[0] + matrix_[1][1] * v[1]};
}

Eigen::Vector2d ToralMap::linear_inverse(const Eigen::Vector2d& v) const
{
    return {inverse_[0][0] * v[0] + inverse_[0][1] * v[1], inverse_[1][0] * v[0] + inverse_[1][1] * v[1]};
}

TorusPoint ToralMap::apply(const TorusPoint& p) const
{
    const Eigen::Vector2d v = linear(p.vec());
    return {v[0], v[1]};
}

TorusPoint ToralMap::apply_inverse(const TorusPoint& p) const
{
    const Eigen::Vector2d v = linear_inverse(p.vec());
    return {v[0], v[1]};
}

SystemContract<TorusPoint> ToralMap::contract() const
{
    SystemContract<TorusPoint> c;
    c.system_id = name_;
    const ToralMap self = *this;
    c.forward = [self](const TorusPoint& p) { return self.apply(p); };
    c.backward = [self](const TorusPoint& p) { return self.apply_inverse(p); };
    c.metric = [](const TorusPoint& p, const TorusPoint& q) { return torus_distance(p, q); };
    c.diameter_bound = 0.5;
    c.expansive_constant = expansive_constant();
    c.lipschitz_bound = norm_;
    c.comparison_tolerance = orbit_step_tolerance;
    return c;
}

ToralMap cat_map() { return ToralMap("cat", {{{2, 1}, {1, 1}}}); }

ToralShadow shadow_toral(const ToralMap& map, const PseudoOrbit<TorusPoint>& po, Tails tails)
{
    if (po.system_id != map.name()) throw ConfigurationError("unknown system id '" + po.system_id + "'");
    if (po.points.empty()) throw DomainError("empty pseudo-orbit");
    const double c = map.shadowing_constant();
    if (!(c * po.delta < 0.25)) throw DomainError("hyperbolicity margin exceeded: C*delta >= 1/4");

    const std::size_t n = po.points.size();
    auto defect = [&](const TorusPoint& from, const TorusPoint& to) {
        return lift(map.linear(from.vec()) - to.vec());
    };
    std::vector<Eigen::Vector2d> coords(n > 0 ? n - 1 : 0);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Eigen::Vector2d e = defect(po.points[i], po.points[i + 1]);
        worst = std::max(worst, e.cwiseAbs().maxCoeff());
        coords[i] = map.eigen_coordinates(e);
    }

    const double lu = map.lambda_u_value();
    const double ls = map.lambda_s_value();
    double sigma_start = 0.0;
    double tau_end = 0.0;

    if (tails.kind == TailKind::periodic) {
        const auto m = static_cast<std::size_t>(tails.period);
        if (m < 1 || m > n) throw DomainError("tail period must fit in the window");
        // Periodic defect blocks continuing the window on each side.
        std::vector<Eigen::Vector2d> left(m), right(m);
        for (std::size_t t = 0; t + 1 < m; ++t) {
            left[t] = coords[t];
            right[t + 1] = coords[n - m + t];
        }
        const Eigen::Vector2d e_left = defect(po.points[m - 1], po.points[0]);
        const Eigen::Vector2d e_right = defect(po.points[n - 1], po.points[n - m]);
        worst = std::max({worst, e_left.cwiseAbs().maxCoeff(), e_right.cwiseAbs().maxCoeff()});
        left[m - 1] = map.eigen_coordinates(e_left);
        right[0] = map.eigen_coordinates(e_right);

        double acc = 0.0;
        for (std::size_t t = 0; t < m; ++t) acc = ls * acc + left[t][1];
        sigma_start = acc / (1.0 - std::pow(ls, static_cast<double>(m)));
        acc = 0.0;
        for (std::size_t t = m; t-- > 0;) acc = (acc + right[t][0]) / lu;
        tau_end = -acc / (1.0 - std::pow(lu, -static_cast<double>(m)));
    }
    if (worst > po.delta + orbit_step_tolerance) throw ParameterError("pseudo-orbit defects exceed delta");

    std::vector<double> sigma(n), tau(n);
    sigma[0] = sigma_start;
    for (std::size_t i = 0; i + 1 < n; ++i) sigma[i + 1] = ls * sigma[i] + coords[i][1];
    tau[n - 1] = tau_end;
    for (std::size_t i = n - 1; i-- > 0;) tau[i] = (tau[i + 1] - coords[i][0]) / lu;

    ToralShadow out;
    out.orbit = PseudoOrbit<TorusPoint>{po.system_id, po.i_min, {}, 0.0};
    out.orbit.points.reserve(n);
    out.corrections.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d u = sigma[i] * map.stable_direction() + tau[i] * map.unstable_direction();
        out.corrections.push_back(u);
        out.max_correction = std::max(out.max_correction, u.cwiseAbs().maxCoeff());
        const Eigen::Vector2d corrected = po.points[i].vec() + u;
        out.orbit.points.emplace_back(corrected[0], corrected[1]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        out.max_step_error =
            std::max(out.max_step_error, torus_distance(map.apply(out.orbit.points[i]), out.orbit.points[i + 1]));
    }
    out.base = out.orbit.at(0 < po.i_min || 0 > po.i_max() ? po.i_min : 0);
    out.certified_epsilon = c * po.delta;

    if (out.max_step_error > orbit_step_tolerance) throw InternalError("corrected window is not a true orbit");
    if (out.max_correction > out.certified_epsilon * (1.0 + 1e-12) + 1e-15)
        throw InternalError("correction exceeds the shadowing bound");
    return out;
}

PseudoOrbit<TorusPoint> random_pseudo_orbit(const ToralMap& map, std::size_t length, double delta, std::uint64_t seed)
{
    if (!(delta >= 0.0)) throw ParameterError("delta must be nonnegative");
    if (length == 0) throw ParameterError("pseudo-orbit length must be positive");
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    PseudoOrbit<TorusPoint> po{map.name(), 0, {}, delta};
    po.points.reserve(length);
    po.points.emplace_back(unit(), unit());
    while (po.points.size() < length) {
        const Eigen::Vector2d v = map.linear(po.points.back().vec());
        const double ex = (2.0 * unit() - 1.0) * delta;
        const double ey = (2.0 * unit() - 1.0) * delta;
        po.points.emplace_back(v[0] + ex, v[1] + ey);
    }
    return po;
}

HomoclinicPoint::HomoclinicPoint(const ToralMap& map, std::array<long, 2> n) : n_(n)
{
    if (n[0] == 0 && n[1] == 0) throw DomainError("lattice vector must be nonzero");
    const std::int64_t d = map.discriminant();
    const ExactVector& vu = map.v_u();
    const ExactVector& vs = map.v_s();
    const QuadraticNumber nx = QuadraticNumber::rational(Rational(n[0]), d);
    const QuadraticNumber ny = QuadraticNumber::rational(Rational(n[1]), d);
    // [v_u, -v_s] (alpha, beta)^T = n
    const QuadraticNumber det = vs.x * vu.y - vu.x * vs.y;
    alpha_ = (vs.x * ny - nx * vs.y) / det;
    beta_ = (vu.x * ny - vu.y * nx) / det;

    auto reduce = [&](const QuadraticNumber& v) {
        return v - QuadraticNumber::rational(v.floor(), d);
    };
    exact_ = ExactVector{reduce(alpha_ * vu.x), reduce(alpha_ * vu.y)};
    point_ = TorusPoint(exact_.x.to_double(), exact_.y.to_double());

    alpha_d_ = alpha_.to_double();
    beta_d_ = beta_.to_double();
    lu_ = map.lambda_u_value();
    ls_ = map.lambda_s_value();
    vu_ = Eigen::Vector2d(vu.x.to_double(), vu.y.to_double());
    vs_ = Eigen::Vector2d(vs.x.to_double(), vs.y.to_double());
}

TorusPoint HomoclinicPoint::orbit(Index i) const
{
    if (i == 0) return point_;
    Eigen::Vector2d v = i > 0 ? Eigen::Vector2d(beta_d_ * std::pow(ls_, static_cast<double>(i)) * vs_)
                              : Eigen::Vector2d(alpha_d_ * std::pow(lu_, static_cast<double>(i)) * vu_);
    return {v[0], v[1]};
}

Separation expansive_separation_toral(const ToralMap& map, const TorusPoint& p, const TorusPoint& q, double e,
                                      Index n)
{
    Separation out;
    if (p == q) return out;
    TorusPoint fp = p, fq = q, bp = p, bq = q;
    out.distance = torus_distance(p, q);
    if (out.distance > e) {
        out.separated = true;
        out.witness = 0;
        return out;
    }
    for (Index i = 1; i <= n; ++i) {
        fp = map.apply(fp);
        fq = map.apply(fq);
        if (double d = torus_distance(fp, fq); d > e) return {true, i, d};
        bp = map.apply_inverse(bp);
        bq = map.apply_inverse(bq);
        if (double d = torus_distance(bp, bq); d > e) return {true, -i, d};
    }
    return out;
}

} // namespace chaoslab::toral
