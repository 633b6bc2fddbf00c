#include "chaoslab/core.hpp"

#include <cmath>

namespace chaoslab {

double bump(double t, double epsilon)
{
    if (!(epsilon > 0.0)) throw DomainError("bump radius must be positive");
    if (t < 0.0 || std::isnan(t)) throw DomainError("bump argument must be nonnegative");
    if (t <= epsilon) return 1.0;
    if (t >= 2.0 * epsilon) return 0.0;
    return (2.0 * epsilon - t) / epsilon;
}

} // namespace chaoslab
