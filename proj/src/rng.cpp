#include "rsde/rng.hpp"

#include <cmath>

namespace rsde {

double NormalSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - rng_.uniform01();
    const double u2 = rng_.uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace rsde
