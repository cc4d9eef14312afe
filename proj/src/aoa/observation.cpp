#include "rover/aoa/observation.hpp"

#include <cmath>
#include <stdexcept>

#include "rover/core/angles.hpp"

namespace rover::aoa {

double correct_aoa(double measured, double heading) {
    if (!std::isfinite(measured) || !std::isfinite(heading)) {
        throw std::invalid_argument("correct_aoa: inputs must be finite");
    }
    return wrap_2pi(measured + heading);
}

}  // namespace rover::aoa
