#pragma once

namespace vfatt::tol {

// Exact algebraic identities (products, rotations, skew identities).
inline constexpr double kAlgebra = 1e-12;
// Unit-norm constraint on quaternions and orthonormality of rotations.
inline constexpr double kUnit = 1e-9;
// Below this norm a quaternion cannot be renormalized.
inline constexpr double kMinNorm = 1e-6;
// Relative sine of the angle below which two vectors count as collinear.
inline constexpr double kCollinear = 1e-9;
// Largest accepted condition number of the inertia matrix.
inline constexpr double kMaxInertiaCondition = 1e12;
// Symmetry check for matrices handed to the eigensolver.
inline constexpr double kSymmetric = 1e-9;
// Sign tolerance on dV/dt in exact-arithmetic checks.
inline constexpr double kVdotExact = 1e-12;
// Per-step tolerance on V increase along integrated trajectories.
inline constexpr double kVdotTrajectory = 1e-7;

} // namespace vfatt::tol
