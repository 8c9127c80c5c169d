#pragma once

#include <array>
#include <tuple>

#include "aklt/types.hpp"

namespace aklt {

// Basis convention throughout: |M> with M = S, S-1, ..., -S; index 0 <-> M = S.

/// Angular-momentum matrices (Sx, Sy, Sz) for a spin-S particle.
std::array<Matrix, 3> spin_operators(Spin s);

Matrix spin_operator(Spin s, Axis axis);

/// Unit eigenvector of S^axis with eigenvalue +S (sign=+1) or -S (sign=-1).
/// Phase convention: |±S>_x = exp(-i π/2 Sy)|±S>_z, |±S>_y = exp(+i π/2 Sx)|±S>_z.
Vector extremal_state(Spin s, Axis axis, int sign);

/// Rank-2 projector onto span{|S>_axis, |-S>_axis}. Identity for S = 1/2.
Matrix pc_projector(Spin s, Axis axis);

/// Deformation D(delta) = (1-delta) P^axis + delta I, with 0 <= delta <= 1.
Matrix deformation(Spin s, Axis axis, double delta);

/// Condon-Shortley Clebsch-Gordan coefficient <S1 m1, S2 m2 | J M>.
/// All quantum numbers are passed doubled (twice their value) so they stay exact.
double clebsch_gordan(Spin s1, Spin s2, Spin j, int twice_m, int twice_m1, int twice_m2);

/// Orthonormal coupled basis |J M> for M = J..-J, as columns in the product
/// basis of (s1, s2); column m corresponds to M = J - m.
Matrix coupled_basis(Spin s1, Spin s2, Spin j);

/// Orthogonal projector onto the spin-J irrep of two particles (rank 2J+1).
Matrix total_spin_projector(Spin s1, Spin s2, Spin j);

/// Z(theta) = diag(1, e^{i theta}) acting on a logical qubit basis.
Matrix z_rotation(double theta);

}  // namespace aklt
