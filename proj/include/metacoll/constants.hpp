#ifndef METACOLL_CONSTANTS_HPP
#define METACOLL_CONSTANTS_HPP

// CODATA 2018 values, SI units.

namespace metacoll::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double k_B = 1.380649e-23;          // J/K (exact)
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double amu = 1.66053906660e-27;     // kg
inline constexpr double a0 = 5.29177210903e-11;      // m, Bohr radius
inline constexpr double hartree = 4.3597447222071e-18;  // J

// Atomic unit of the C6 dispersion coefficient, E_h a0^6.
inline constexpr double hartree_a0_6 =
    hartree * a0 * a0 * a0 * a0 * a0 * a0;

// Convenience scales used at the I/O boundary.
inline constexpr double microkelvin = 1e-6;
inline constexpr double cm3 = 1e-6;  // m^3

}  // namespace metacoll::constants

#endif
