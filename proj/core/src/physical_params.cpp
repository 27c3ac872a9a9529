#include "kinlab/physical_params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kinlab {

namespace {

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw std::invalid_argument(std::string("physics.") + name + " must be finite and > 0");
}

}  // namespace

void PhysicalParams::validate() const {
    require_positive(test_mass, "M");
    require_positive(gas_mass, "m");
    require_positive(inv_temperature, "beta");
    require_positive(density, "n");
    if (!std::isfinite(hbar) || hbar < 0.0) throw std::invalid_argument("physics.hbar must be finite and >= 0");
}

void PhysicalParams::validate_quantum() const {
    validate();
    if (hbar == 0.0) throw std::invalid_argument("physics.hbar must be > 0 for a quantum evolution");
}

}  // namespace kinlab
