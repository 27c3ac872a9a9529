#pragma once

namespace kinlab {

/// Physical parameters of the test particle + gas system, in dimensionless
/// internal units. hbar is a free parameter so semiclassical limits can be
/// taken by parameter variation.
struct PhysicalParams {
    double test_mass = 1.0;        ///< M
    double gas_mass = 0.1;         ///< m
    double inv_temperature = 1.0;  ///< beta
    double density = 1.0;          ///< n
    double hbar = 1.0;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// As validate(), and additionally rejects hbar == 0.
    void validate_quantum() const;

    double mass_ratio() const noexcept { return gas_mass / test_mass; }
    /// M / beta
    double thermal_momentum_sq() const noexcept { return test_mass / inv_temperature; }
    /// beta hbar^2 / (4 M)
    double thermal_length_sq() const noexcept {
        return inv_temperature * hbar * hbar / (4.0 * test_mass);
    }

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

}  // namespace kinlab
