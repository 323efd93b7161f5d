#include "melosc/numerics.hpp"

#include <cmath>
#include <limits>

namespace melosc {

double loglog_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) {
        throw DegenerateInput("loglog_slope: need at least 3 (h, err) pairs");
    }
    for (const auto& [h, err] : pairs) {
        if (!(h > 0.0) || err < 0.0 || !std::isfinite(h) || !std::isfinite(err)) {
            throw DegenerateInput("loglog_slope: pairs must be positive and finite");
        }
        if (err == 0.0) return std::numeric_limits<double>::infinity();
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(pairs.size());
    for (const auto& [h, err] : pairs) {
        const double lx = std::log(h);
        const double ly = std::log(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw DegenerateInput("loglog_slope: all h values identical");
    }
    return (n * sxy - sx * sy) / denom;
}

} // namespace melosc
