#pragma once

// Finite shadow over Gamma = GL_2(F_q): principal series Ind_B chi, the
// operators S_s = sum_l l^s g_l with g_l = (l 1; 1 0), unipotent invariants,
// spinning, irreducibility and socles. The lab hosts the mechanism of the
// s(chi) statement on principal series; it does not build D_0(rho).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nonadm/linalg.hpp"

namespace nonadm::lab {

using gf::Code;
using gf::FieldPtr;
using linalg::Matrix;
using linalg::Subspace;
using linalg::Vec;

/// 2x2 matrix (a b; c d) over F_q.
struct Mat2 {
  Code a = 1, b = 0, c = 0, d = 1;
  bool operator==(const Mat2&) const = default;
};

struct GammaContext {
  FieldPtr field;
  Code generator = 0;  // of F_q^x
  Mat2 w;              // antidiagonal (0 1; 1 0)
  std::vector<Mat2> generators;  // diag(g,1), w, (1 1; 0 1)
  std::vector<Mat2> u_generators;  // (1 x^t; 0 1), t < f
  Mat2 torus_a, torus_d;           // diag(g,1), diag(1,g)

  static GammaContext make(std::uint32_t p, std::uint32_t f);
  std::uint32_t q() const { return field->size(); }
  Mat2 mul(const Mat2& x, const Mat2& y) const;
  Mat2 inv(const Mat2& x) const;
  Code det(const Mat2& x) const;
  Mat2 g_lambda(Code l) const { return {l, 1, 1, 0}; }
  /// Discrete log to the fixed generator; throws ZeroInverse on 0.
  std::uint32_t log(Code x) const;

  std::vector<std::uint32_t> logs;  // by code, entry 0 unused
};

/// A finite-dimensional left module given by generator matrices.
struct Module {
  FieldPtr field;
  std::size_t dim = 0;
  std::vector<Matrix> gens;
  std::vector<Matrix> u_gens;
  Matrix torus_a, torus_d;
  Code generator = 0;  // of F_q^x, for eigencharacter exponents

  /// Action on the span of `sub`, in its pivot coordinates.
  Module restrict(const Subspace& sub) const;
};

Module natural_module(const GammaContext& ctx);
Module zero_module(const GammaContext& ctx);

/// Ind_B chi by right translation on functions with phi(bg) = chi(b) phi(g),
/// chi(b) = b11^ea b22^ed. Basis phi_x, x = 0..q-1 for the cosets of
/// (1 0; t 1) with t the element of code x, and x = q for the coset of w.
struct PrincipalSeries {
  Module module;
  std::uint32_t ea = 0, ed = 0;
  const GammaContext* ctx = nullptr;

  /// Monomial action of any element: (g phi)_x = chi(b) phi_y with rep_x g = b rep_y.
  Vec act(const Mat2& g, const Vec& v) const;
  /// The U-invariant chi-eigenvector supported on B.
  Vec f_chi() const;
  std::size_t dim() const { return module.dim; }
};

PrincipalSeries build_principal_series(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed);

/// sum over l in F_q of l^s (g_l v). `zero_pow_one` selects 0^0 = 1.
Vec apply_S_s(const PrincipalSeries& ps, const Vec& v, std::uint32_t s, bool zero_pow_one = true);

struct UEigen {
  std::uint32_t ea = 0, ed = 0;  // t = diag(x, y) acts by x^ea y^ed
  std::vector<Vec> basis;        // of the eigenspace inside the U-fixed space
};

/// U-fixed subspace split into simultaneous torus eigenspaces.
std::vector<UEigen> u_invariants(const Module& m);

Subspace spin(const Module& m, const Vec& v);

/// Every submodule meets the U-fixed space in a torus eigenvector, so it is
/// enough to spin eigenvectors; lines of eigenspaces of dimension > 1 are
/// enumerated while there are at most `line_budget` of them.
bool is_irreducible(const Module& m, std::size_t line_budget = 4096);

/// Sum of the irreducible submodules generated by U-fixed eigenvectors.
Subspace socle(const Module& m, std::size_t line_budget = 4096);

struct FindS {
  std::uint32_t ea = 0, ed = 0;
  bool zero_pow_one = true;
  std::vector<std::uint32_t> candidates;
  std::optional<std::uint32_t> s;  // set when unique
  Vec witness;
  std::size_t spin_dim = 0;
  std::size_t socle_dim = 0;
  /// Exponents s with S_s f nonzero, before the socle and U tests.
  std::vector<std::uint32_t> nonzero;
};

/// Exhaustive sweep of s in [0, q-1] for f_chi: keeps s with S_s f nonzero,
/// U-invariant, and inside soc(spin(f)). PreconditionViolation if chi = chi^s.
FindS find_s_candidates(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed, bool zero_pow_one = true);
/// As above but throws NotUnique unless there is exactly one candidate.
FindS find_s(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed, bool zero_pow_one = true);

struct Sweep {
  std::uint32_t q = 0;
  bool zero_pow_one = true;
  std::vector<FindS> entries;  // swap-unfixed characters, by (ea, ed)
  std::size_t swap_fixed = 0;
  std::size_t not_unique = 0;
};

Sweep sweep(const GammaContext& ctx, bool zero_pow_one = true);

}  // namespace nonadm::lab
