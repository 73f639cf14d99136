#pragma once

#include "ginv/types.hpp"

#include <map>
#include <optional>
#include <string>

namespace ginv {

/// Deterministic instance with whatever closed-form companions the family
/// provides: a known optimal or block solution, dual objects, and named
/// scalar values (norms, counts, ratio limits).
struct FamilyInstance {
    std::string name;
    Matrix A;
    std::optional<Matrix> known_H;
    std::optional<Matrix> known_W;
    std::optional<Matrix> known_V;
    std::map<std::string, double> known_values;
    std::map<std::string, double> params;
};

/// Worked 3x3 symmetric instance with A^2 = 9A: H = A/81 has 1-norm 34/81
/// and the three principal block inverses have 1-norms {2, 17/36, 17/36}.
FamilyInstance sym_3x3();

/// Worked rank-2 instance whose best ah-symmetric reflexive generalized
/// inverse (1-norm 9/8) beats every column block ({31/24, 31/24, 7/6}).
FamilyInstance ah_3x3();

enum class ToeplitzCase { General, Symmetric, Ah };

/// Worst-case families built from the Toeplitz inverse with parameters
/// delta_L, delta_U: the seed block is a determinant local maximizer while
/// an escape block is a factor ~r (ah) or ~r^2 (general/symmetric) better.
FamilyInstance toeplitz_family(Index r, double delta_L, double delta_U, ToeplitzCase kind);

/// 2 x 4 instance [I | k k; I | k -k] on which 1-norm local search stalls at
/// ratio k.
FamilyInstance no_const_rank2(double k);

/// [I_r | k*M_r(-1,1)] analogue for r >= 3.
FamilyInstance no_const_general(Index r, double k);

/// A = [Ahat, Ahat*1] with Ahat = (J + rI)^{-1}: every r x r block inverse
/// has 1-norm 2r^2 while the LP optimum is r(r+1), ratio exactly 2r/(r+1).
FamilyInstance tight_ratio_r_plus_1(Index r);

/// (r+2) x (r+2) symmetric rank-r instance whose symmetric 1-norm LP has a
/// unique optimal vertex with r^2 + r nonzeros (value r^2 + r).
FamilyInstance p1sym_sharp(Index r);

/// m x r^2 rank-r instance whose P123 LP has a unique optimal vertex with
/// r^2 + r^2(m - r) nonzeros.
FamilyInstance p123_sharp(Index m, Index r);

/// The matrix with all entries b except a on the diagonal; det and inverse
/// have closed forms used across the worst-case families.
Matrix uniform_plus_diag(Index n, double a, double b);

/// The (m+n) x (m+n) symmetric embedding [[0, A], [A^T, 0]].
Matrix sym_embedding(const Matrix& A);

/// Registry lookup for the CLI: name in {sym_3x3, ah_3x3, toeplitz_general,
/// toeplitz_symmetric, toeplitz_ah, no_const_rank2, no_const_general,
/// tight_ratio, p1sym_sharp, p123_sharp}, with parameters r, m, k,
/// delta_l, delta_u as applicable.
FamilyInstance make_family(const std::string& name,
                           const std::map<std::string, double>& params);

}  // namespace ginv
