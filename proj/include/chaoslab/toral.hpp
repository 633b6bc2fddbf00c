#pragma once

// Hyperbolic automorphisms of the 2-torus: exact eigen-splitting in the
// quadratic field, a linear shadowing solver with a certified constant, and
// closed-form homoclinic points of the fixed point 0.

#include "chaoslab/core.hpp"
#include "chaoslab/quadratic.hpp"
#include "chaoslab/symbolic.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace chaoslab::toral {

using symbolic::TailKind;
using symbolic::Tails;

/// A point of R^2 / Z^2, coordinates reduced to [0, 1).
struct TorusPoint {
    double x = 0.0;
    double y = 0.0;

    TorusPoint() = default;
    TorusPoint(double x_, double y_);

    Eigen::Vector2d vec() const { return {x, y}; }
    friend bool operator==(const TorusPoint& a, const TorusPoint& b) { return a.x == b.x && a.y == b.y; }
};

double reduce_mod1(double v);

/// Representative of v mod Z^2 in [-1/2, 1/2)^2.
Eigen::Vector2d lift(const Eigen::Vector2d& v);

/// Quotient of the sup-norm metric on R^2.
double torus_distance(const TorusPoint& p, const TorusPoint& q);

using IntMatrix = std::array<std::array<long, 2>, 2>;

struct ExactVector {
    QuadraticNumber x;
    QuadraticNumber y;
};

class ToralMap {
public:
    /// Requires det = +-1 and |trace| > 2.
    ToralMap(std::string name, const IntMatrix& matrix);

    const std::string& name() const { return name_; }
    const IntMatrix& matrix() const { return matrix_; }
    const IntMatrix& inverse_matrix() const { return inverse_; }
    long determinant() const { return det_; }
    std::int64_t discriminant() const { return disc_; }

    const QuadraticNumber& lambda_u() const { return lambda_u_; }
    const QuadraticNumber& lambda_s() const { return lambda_s_; }
    const ExactVector& v_u() const { return v_u_; }
    const ExactVector& v_s() const { return v_s_; }

    double lambda_u_value() const { return lu_; }
    double lambda_s_value() const { return ls_; }
    /// Eigenvectors scaled to unit sup-norm.
    const Eigen::Vector2d& unstable_direction() const { return eu_; }
    const Eigen::Vector2d& stable_direction() const { return es_; }

    /// Sup-norm row bound of the inverse eigenbasis change.
    double condition_factor() const { return kappa_; }
    /// kappa (|lambda_u| + 1) / (|lambda_u| - 1).
    double shadowing_constant() const { return shadowing_constant_; }
    /// Operator sup-norm of the matrix.
    double operator_norm() const { return norm_; }
    /// 1 / (2 ||A||): distinct orbits separate beyond it.
    double expansive_constant() const { return 0.5 / norm_; }

    /// Coordinates (unstable, stable) of v in the eigenbasis.
    Eigen::Vector2d eigen_coordinates(const Eigen::Vector2d& v) const { return basis_inverse_ * v; }

    Eigen::Vector2d linear(const Eigen::Vector2d& v) const;
    Eigen::Vector2d linear_inverse(const Eigen::Vector2d& v) const;

    TorusPoint apply(const TorusPoint& p) const;
    TorusPoint apply_inverse(const TorusPoint& p) const;

    /// A v - lambda v == 0 in the quadratic field, for both eigenpairs.
    bool eigen_identity_holds() const;

    SystemContract<TorusPoint> contract() const;

private:
    std::string name_;
    IntMatrix matrix_;
    IntMatrix inverse_;
    long det_ = 1;
    std::int64_t disc_ = 0;
    QuadraticNumber lambda_u_, lambda_s_;
    ExactVector v_u_, v_s_;
    double lu_ = 0, ls_ = 0;
    Eigen::Vector2d eu_, es_;
    Eigen::Matrix2d basis_inverse_;
    double kappa_ = 0, shadowing_constant_ = 0, norm_ = 0;
};

ToralMap cat_map();

inline TorusPoint apply_toral(const ToralMap& map, const TorusPoint& p) { return map.apply(p); }
inline TorusPoint apply_toral_inverse(const ToralMap& map, const TorusPoint& p) { return map.apply_inverse(p); }

struct ToralShadow {
    TorusPoint base;
    /// Corrected window w_i + u_i; a true orbit to 1e-12 per step.
    PseudoOrbit<TorusPoint> orbit;
    std::vector<Eigen::Vector2d> corrections;
    double certified_epsilon = 0.0;
    double max_correction = 0.0;
    double max_step_error = 0.0;
};

inline constexpr double orbit_step_tolerance = 1e-12;

/// Unique bounded solution of u_{i+1} = A u_i + e_i with the tail defects
/// given by `tails` (zero for true-orbit tails). Refuses when
/// C * delta >= 1/4.
ToralShadow shadow_toral(const ToralMap& map, const PseudoOrbit<TorusPoint>& po, Tails tails = {});

/// Seeded delta-pseudo-orbit on [0, length) with defects uniform in the
/// sup-norm ball of radius delta.
PseudoOrbit<TorusPoint> random_pseudo_orbit(const ToralMap& map, std::size_t length, double delta, std::uint64_t seed);

/// The point alpha v_u with alpha v_u - beta v_s = n, on both invariant
/// lines through 0.
class HomoclinicPoint {
public:
    HomoclinicPoint(const ToralMap& map, std::array<long, 2> lattice_vector);

    const TorusPoint& point() const { return point_; }
    const ExactVector& exact() const { return exact_; }
    const QuadraticNumber& alpha() const { return alpha_; }
    const QuadraticNumber& beta() const { return beta_; }
    std::array<long, 2> lattice_vector() const { return n_; }

    /// f^i(q), from the closed forms beta lambda_s^i v_s (i >= 0) and
    /// alpha lambda_u^i v_u (i < 0); accurate for every i.
    TorusPoint orbit(Index i) const;

private:
    std::array<long, 2> n_;
    QuadraticNumber alpha_, beta_;
    ExactVector exact_;
    TorusPoint point_;
    double alpha_d_, beta_d_, lu_, ls_;
    Eigen::Vector2d vu_, vs_;
};

inline HomoclinicPoint homoclinic_point_toral(const ToralMap& map, std::array<long, 2> lattice_vector)
{
    return HomoclinicPoint(map, lattice_vector);
}

struct Separation {
    bool separated = false;
    std::optional<Index> witness;
    double distance = 0.0;
};

/// max_{|i|<=N} d(f^i p, f^i q) > e, scanning i = 0, 1, -1, 2, -2, ...
Separation expansive_separation_toral(const ToralMap& map, const TorusPoint& p, const TorusPoint& q, double e,
                                      Index n);

} // namespace chaoslab::toral
