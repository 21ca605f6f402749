#include "tsecon/rng.hpp"

#include "tsecon/distributions.hpp"
#include "tsecon/errors.hpp"

#include <cmath>

namespace tsecon {

double Rng::uniform() {
    // 53 random bits -> double in [0,1); shift away from 0 for quantile safety.
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0 && u < 1.0) return u;
    }
}

double Rng::normal() { return dist::norm_quantile(uniform()); }

double Rng::student_t(double df) { return dist::t_quantile(uniform(), df); }

double Rng::std_t(double df) {
    if (df <= 2.0) throw EstimationError("Rng::std_t: df must exceed 2");
    return student_t(df) * std::sqrt((df - 2.0) / df);
}

} // namespace tsecon
