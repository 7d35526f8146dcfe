#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscint/linalg.hpp"
#include "oscint/poly.hpp"

namespace oscint {

struct NewtonData {
  std::vector<MultiIndex> support;
  Rational delta;
  /// Convex weights on `support` with sum_i w_i p_i <= delta componentwise.
  std::vector<Rational> weights;
};

/// Exact Newton distance via a rational LP. Throws DomainError on zero input.
NewtonData newton_distance(const PhasePoly& s);

/// Whether (t, ..., t) lies in the Newton polyhedron of s.
bool diagonal_in_polyhedron(const PhasePoly& s, const Rational& t);

struct ModifiedNewtonResult {
  Rational delta;       // certified lower bound, exact when `exact`
  bool exact = false;
  RatMatrix a, b;       // achieving transforms: delta = delta(S(Ax, Bz))
  std::string method;   // "identity", "structured", "random", "pencil"
  int candidates = 0;   // number of transforms evaluated
};

/// Lower bound for the sup of delta(S(Ax, Bz)) over invertible A, B.
/// Tries the identity, axis permutations, transforms aligned with
/// directions S does not depend on or with rational linear factors of its
/// coefficient forms, and `samples` random rational transforms drawn with
/// per-index seeds. Pencil phases get the exact value. Deterministic for a
/// given (samples, seed) regardless of `threads`.
ModifiedNewtonResult modified_newton_distance(const PhasePoly& s, int samples,
                                              std::uint64_t seed, int threads = 0);

/// Random invertible rational n x n matrix with entries in [-1, 1] (grid
/// step 1/64) and |det| > 1/10, drawn from the given stream index.
RatMatrix random_gl(int n, std::uint64_t seed, std::uint64_t index);

}  // namespace oscint
