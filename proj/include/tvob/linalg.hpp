#pragma once

#include <optional>

#include "tvob/rational.hpp"

namespace tvob {

// Dense exact linear algebra over Q. Matrices are row-major vectors of rows.

struct Echelon {
  RatMat rows;                 // reduced row echelon form (zero rows dropped)
  std::vector<size_t> pivots;  // pivot column per row
};

Echelon rref(RatMat m, size_t cols);
size_t rank(const RatMat& m, size_t cols);
Rat determinant(RatMat m);

/// Basis of {x : m x = 0}, one vector per free column (x_free = 1).
RatMat nullspace(const RatMat& m, size_t cols);

struct LinearSolution {
  RatVec particular;
  RatMat kernel;
};

/// Solves m x = rhs. Returns nullopt when inconsistent.
std::optional<LinearSolution> solve(const RatMat& m, const RatVec& rhs, size_t cols);

RatMat transpose(const RatMat& m, size_t cols);
RatVec apply(const RatMat& m, const RatVec& x);

/// gcd of all maximal minors of an integral k x n matrix with k <= n.
Int maximal_minor_gcd(const RatMat& m, size_t cols);

}  // namespace tvob
