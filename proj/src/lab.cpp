#include "nonadm/lab.hpp"

#include <deque>

#include "nonadm/error.hpp"

namespace nonadm::lab {

GammaContext GammaContext::make(std::uint32_t p, std::uint32_t f) {
  GammaContext ctx;
  ctx.field = gf::make_field(p, f);
  const auto& F = *ctx.field;
  ctx.generator = F.primitive();
  ctx.w = {0, 1, 1, 0};
  ctx.torus_a = {ctx.generator, 0, 0, 1};
  ctx.torus_d = {1, 0, 0, ctx.generator};
  ctx.generators = {ctx.torus_a, ctx.w, Mat2{1, 1, 0, 1}};
  Code basis = 1;  // x^t has code p^t
  for (std::uint32_t t = 0; t < f; ++t, basis *= p) ctx.u_generators.push_back({1, basis, 0, 1});
  ctx.logs.assign(F.size(), 0);
  Code x = 1;
  for (std::uint32_t e = 0; e + 1 < F.size(); ++e, x = F.mul(x, ctx.generator)) ctx.logs[x] = e;
  return ctx;
}

Mat2 GammaContext::mul(const Mat2& x, const Mat2& y) const {
  const auto& F = *field;
  return {F.add(F.mul(x.a, y.a), F.mul(x.b, y.c)), F.add(F.mul(x.a, y.b), F.mul(x.b, y.d)),
          F.add(F.mul(x.c, y.a), F.mul(x.d, y.c)), F.add(F.mul(x.c, y.b), F.mul(x.d, y.d))};
}

Code GammaContext::det(const Mat2& x) const {
  const auto& F = *field;
  return F.sub(F.mul(x.a, x.d), F.mul(x.b, x.c));
}

Mat2 GammaContext::inv(const Mat2& x) const {
  const auto& F = *field;
  const Code di = F.inv(det(x));
  return {F.mul(di, x.d), F.mul(di, F.neg(x.b)), F.mul(di, F.neg(x.c)), F.mul(di, x.a)};
}

std::uint32_t GammaContext::log(Code x) const {
  if (x == 0) throw Error(Errc::ZeroInverse, "log of zero");
  return logs.at(x);
}

namespace {

// Matrix of v -> M v in the basis given by the columns' images.
Matrix restrict_matrix(const Matrix& M, const Subspace& sub) {
  Matrix out(sub.field(), sub.dim(), sub.dim());
  for (std::size_t k = 0; k < sub.dim(); ++k) {
    const Vec c = sub.coordinates(M.apply(sub.basis()[k]));
    for (std::size_t i = 0; i < c.size(); ++i) out.set(i, k, c[i]);
  }
  return out;
}

Matrix from_mat2(const FieldPtr& F, const Mat2& g) {
  Matrix m(F, 2, 2);
  m.set(0, 0, g.a);
  m.set(0, 1, g.b);
  m.set(1, 0, g.c);
  m.set(1, 1, g.d);
  return m;
}

}  // namespace

Module Module::restrict(const Subspace& sub) const {
  Module out;
  out.field = field;
  out.dim = sub.dim();
  out.generator = generator;
  for (const auto& g : gens) out.gens.push_back(restrict_matrix(g, sub));
  for (const auto& u : u_gens) out.u_gens.push_back(restrict_matrix(u, sub));
  out.torus_a = restrict_matrix(torus_a, sub);
  out.torus_d = restrict_matrix(torus_d, sub);
  return out;
}

Module natural_module(const GammaContext& ctx) {
  Module m;
  m.field = ctx.field;
  m.dim = 2;
  m.generator = ctx.generator;
  for (const auto& g : ctx.generators) m.gens.push_back(from_mat2(ctx.field, g));
  for (const auto& u : ctx.u_generators) m.u_gens.push_back(from_mat2(ctx.field, u));
  m.torus_a = from_mat2(ctx.field, ctx.torus_a);
  m.torus_d = from_mat2(ctx.field, ctx.torus_d);
  return m;
}

Module zero_module(const GammaContext& ctx) {
  Module m;
  m.field = ctx.field;
  m.generator = ctx.generator;
  const Matrix empty(ctx.field, 0, 0);
  m.gens.assign(ctx.generators.size(), empty);
  m.u_gens.assign(ctx.u_generators.size(), empty);
  m.torus_a = m.torus_d = empty;
  return m;
}

namespace {

struct CosetStep {
  std::size_t y;
  Code scalar;
};

Mat2 rep(const GammaContext& ctx, std::size_t x) {
  if (x == ctx.q()) return ctx.w;
  return {1, 0, static_cast<Code>(x), 1};
}

// rep_x g = b rep_y; returns y and chi(b).
CosetStep coset_step(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed, std::size_t x, const Mat2& g) {
  const auto& F = *ctx.field;
  const Mat2 m = ctx.mul(rep(ctx, x), g);
  Code b11, b22;
  std::size_t y;
  if (m.d != 0) {
    const Code t = F.mul(m.c, F.inv(m.d));
    y = t;
    b11 = F.sub(m.a, F.mul(m.b, t));
    b22 = m.d;
  } else {
    y = ctx.q();
    b11 = m.b;
    b22 = m.c;
  }
  return {y, F.mul(F.pow(b11, ea), F.pow(b22, ed))};
}

}  // namespace

Vec PrincipalSeries::act(const Mat2& g, const Vec& v) const {
  Vec out(dim(), 0);
  const auto& F = *ctx->field;
  for (std::size_t x = 0; x < dim(); ++x) {
    const auto st = coset_step(*ctx, ea, ed, x, g);
    out[x] = F.mul(st.scalar, v[st.y]);
  }
  return out;
}

Vec PrincipalSeries::f_chi() const {
  Vec v(dim(), 0);
  v[0] = 1;
  return v;
}

PrincipalSeries build_principal_series(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed) {
  PrincipalSeries ps;
  ps.ctx = &ctx;
  const std::uint32_t n = ctx.q() - 1;
  ps.ea = ea % n;
  ps.ed = ed % n;
  auto& m = ps.module;
  m.field = ctx.field;
  m.dim = ctx.q() + 1;
  m.generator = ctx.generator;
  auto matrix_of = [&](const Mat2& g) {
    Matrix M(ctx.field, m.dim, m.dim);
    for (std::size_t x = 0; x < m.dim; ++x) {
      const auto st = coset_step(ctx, ps.ea, ps.ed, x, g);
      M.set(x, st.y, st.scalar);
    }
    return M;
  };
  for (const auto& g : ctx.generators) m.gens.push_back(matrix_of(g));
  for (const auto& u : ctx.u_generators) m.u_gens.push_back(matrix_of(u));
  m.torus_a = matrix_of(ctx.torus_a);
  m.torus_d = matrix_of(ctx.torus_d);
  return ps;
}

Vec apply_S_s(const PrincipalSeries& ps, const Vec& v, std::uint32_t s, bool zero_pow_one) {
  const auto& ctx = *ps.ctx;
  const auto& F = *ctx.field;
  if (s > ctx.q() - 1) {
    throw Error(Errc::SOutOfRange, "s = " + std::to_string(s) + " outside [0, " + std::to_string(ctx.q() - 1) + "]");
  }
  Vec out(ps.dim(), 0);
  for (Code l = 0; l < ctx.q(); ++l) {
    const Code coeff = (l == 0) ? ((s == 0 && zero_pow_one) ? 1 : 0) : F.pow(l, s);
    if (coeff == 0) continue;
    out = linalg::axpy(ctx.field, out, coeff, ps.act(ctx.g_lambda(l), v));
  }
  return out;
}

std::vector<UEigen> u_invariants(const Module& m) {
  std::vector<UEigen> out;
  if (m.dim == 0) return out;
  const auto& F = m.field;
  const std::size_t k = m.u_gens.size();
  Matrix stacked(F, k * m.dim, m.dim);
  const Matrix I = Matrix::identity(F, m.dim);
  for (std::size_t g = 0; g < k; ++g) {
    const Matrix d = m.u_gens[g] - I;
    for (std::size_t i = 0; i < m.dim; ++i)
      for (std::size_t j = 0; j < m.dim; ++j) stacked.set(g * m.dim + i, j, d.at(i, j));
  }
  Subspace fixed(F, m.dim);
  for (const auto& v : stacked.nullspace()) fixed.add(v);
  if (fixed.dim() == 0) return out;

  const Matrix A = restrict_matrix(m.torus_a, fixed);
  const Matrix D = restrict_matrix(m.torus_d, fixed);
  const std::size_t d = fixed.dim();
  const Matrix Id = Matrix::identity(F, d);
  const std::uint32_t n = F->size() - 1;
  auto shifted = [&](const Matrix& M, Code e) {
    Matrix s = M;
    for (std::size_t i = 0; i < d; ++i) s.set(i, i, F->sub(M.at(i, i), e));
    return s;
  };
  Code ga = 1;
  for (std::uint32_t ea = 0; ea < n; ++ea, ga = F->mul(ga, m.generator)) {
    const Matrix As = shifted(A, ga);
    if (As.rank() == d) continue;
    Code gd = 1;
    for (std::uint32_t ed = 0; ed < n; ++ed, gd = F->mul(gd, m.generator)) {
      const Matrix Ds = shifted(D, gd);
      Matrix both(F, 2 * d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          both.set(i, j, As.at(i, j));
          both.set(d + i, j, Ds.at(i, j));
        }
      }
      const auto ker = both.nullspace();
      if (ker.empty()) continue;
      UEigen e{ea, ed, {}};
      Subspace sp(F, m.dim);
      for (const auto& c : ker) sp.add(fixed.combine(c));
      e.basis = sp.basis();
      out.push_back(std::move(e));
    }
  }
  return out;
}

Subspace spin(const Module& m, const Vec& v) {
  Subspace s(m.field, m.dim);
  if (!s.add(v)) return s;
  std::deque<Vec> work{v};
  while (!work.empty()) {
    const Vec cur = std::move(work.front());
    work.pop_front();
    for (const auto& g : m.gens) {
      Vec img = g.apply(cur);
      if (s.add(img)) work.push_back(std::move(img));
    }
  }
  return s;
}

namespace {

// Lines of span(basis), or the basis itself when there are too many lines.
std::vector<Vec> eigen_lines(const FieldPtr& F, const std::vector<Vec>& basis, std::size_t budget) {
  const std::size_t d = basis.size();
  if (d == 1) return basis;
  const std::uint64_t q = F->size();
  std::uint64_t lines = 0, qp = 1;
  for (std::size_t i = 0; i < d; ++i, qp *= q) lines += qp;  // (q^d - 1)/(q - 1)
  if (lines > budget) return basis;
  std::vector<Vec> out;
  // Normalized coordinate vectors: leading coordinate 1 at position `lead`.
  for (std::size_t lead = 0; lead < d; ++lead) {
    const std::size_t tail = d - lead - 1;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < tail; ++i) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Vec v = basis[lead];
      std::uint64_t r = idx;
      for (std::size_t t = 0; t < tail; ++t, r /= q) {
        v = linalg::axpy(F, v, static_cast<Code>(r % q), basis[lead + 1 + t]);
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

bool is_irreducible(const Module& m, std::size_t line_budget) {
  if (m.dim == 0) throw Error(Errc::ZeroModule, "irreducibility of the zero module");
  const auto eig = u_invariants(m);
  if (eig.empty()) throw Error(Errc::PreconditionViolation, "nonzero module with no U-fixed vector");
  for (const auto& e : eig) {
    for (const auto& v : eigen_lines(m.field, e.basis, line_budget)) {
      if (spin(m, v).dim() < m.dim) return false;
    }
  }
  // Basis vectors as a deterministic fallback.
  for (std::size_t i = 0; i < m.dim; ++i) {
    Vec v(m.dim, 0);
    v[i] = 1;
    if (spin(m, v).dim() < m.dim) return false;
  }
  return true;
}

Subspace socle(const Module& m, std::size_t line_budget) {
  Subspace soc(m.field, m.dim);
  if (m.dim == 0) return soc;
  for (const auto& e : u_invariants(m)) {
    for (const auto& v : eigen_lines(m.field, e.basis, line_budget)) {
      if (soc.contains(v)) continue;
      const Subspace n = spin(m, v);
      if (is_irreducible(m.restrict(n), line_budget)) {
        for (const auto& b : n.basis()) soc.add(b);
      }
    }
  }
  return soc;
}

FindS find_s_candidates(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed, bool zero_pow_one) {
  const std::uint32_t n = ctx.q() - 1;
  if (ea % n == ed % n) {
    throw Error(Errc::PreconditionViolation, "chi = chi^s is excluded from the uniqueness statement");
  }
  FindS out;
  out.ea = ea % n;
  out.ed = ed % n;
  out.zero_pow_one = zero_pow_one;
  const auto ps = build_principal_series(ctx, ea, ed);
  const Vec f = ps.f_chi();
  const Subspace generated = spin(ps.module, f);
  out.spin_dim = generated.dim();
  const Subspace local = socle(ps.module.restrict(generated));
  Subspace soc(ctx.field, ps.dim());
  for (const auto& c : local.basis()) soc.add(generated.combine(c));
  out.socle_dim = soc.dim();
  for (std::uint32_t s = 0; s <= n; ++s) {
    const Vec v = apply_S_s(ps, f, s, zero_pow_one);
    if (linalg::is_zero(v)) continue;
    out.nonzero.push_back(s);
    bool fixed = true;
    for (const auto& u : ps.module.u_gens) fixed = fixed && u.apply(v) == v;
    if (fixed && soc.contains(v)) {
      if (out.candidates.empty()) out.witness = v;
      out.candidates.push_back(s);
    }
  }
  if (out.candidates.size() == 1) out.s = out.candidates.front();
  return out;
}

FindS find_s(const GammaContext& ctx, std::uint32_t ea, std::uint32_t ed, bool zero_pow_one) {
  auto r = find_s_candidates(ctx, ea, ed, zero_pow_one);
  if (!r.s) {
    std::string list;
    for (auto s : r.candidates) list += (list.empty() ? "" : ",") + std::to_string(s);
    throw Error(Errc::NotUnique, "chi = (" + std::to_string(r.ea) + "," + std::to_string(r.ed) + "): " +
                                     std::to_string(r.candidates.size()) + " candidates {" + list + "}");
  }
  return r;
}

Sweep sweep(const GammaContext& ctx, bool zero_pow_one) {
  Sweep out;
  out.q = ctx.q();
  out.zero_pow_one = zero_pow_one;
  const std::uint32_t n = ctx.q() - 1;
  for (std::uint32_t ea = 0; ea < n; ++ea) {
    for (std::uint32_t ed = 0; ed < n; ++ed) {
      if (ea == ed) {
        ++out.swap_fixed;
        continue;
      }
      out.entries.push_back(find_s_candidates(ctx, ea, ed, zero_pow_one));
      if (!out.entries.back().s) ++out.not_unique;
    }
  }
  return out;
}

}  // namespace nonadm::lab
