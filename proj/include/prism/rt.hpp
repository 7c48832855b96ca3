#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "burau.hpp"
#include "diagram.hpp"
#include "matrix.hpp"
#include "ring.hpp"

namespace prism {

struct RTError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vector representation of U_q(gl(m|n)); index k (0-based) is odd iff k >= m.
struct SuperDim {
  int m = 1, n = 1;
  int d() const { return m + n; }
  bool odd(int k) const { return k >= m; }
  void validate() const {
    if (m < 1 || n < 1) throw RTError("need m >= 1 and n >= 1");
  }
  std::string str() const { return std::to_string(m) + "|" + std::to_string(n); }
};

// Columns are images of basis vectors; x_i (x) x_j sits at index i*d + j.
struct RMatrixSet {
  SuperDim dim;
  Ctx ctx;
  RingMatrix pos, neg, virt;
  RingMatrix cup_left, cup_right;  // d^2 x 1
  RingMatrix cap_left, cap_right;  // 1 x d^2
  RingMatrix mu;                   // d x d

  // Even indices fixed, odd indices scaled by c^sign.
  RingMatrix omega_action(const std::string& color, int sign) const {
    std::vector<LaurentPoly> diag;
    for (int k = 0; k < dim.d(); ++k)
      diag.push_back(dim.odd(k) ? LaurentPoly::var(ctx, color, sign) : LaurentPoly::one(ctx));
    return RingMatrix::diagonal(ctx, diag);
  }
  // Closing a strand on the left inverts mu.
  LaurentPoly mu_at(int k, char side) const {
    LaurentPoly v = mu.get(k, k);
    return side == 'L' ? v.inverse_monomial() : v;
  }
};

inline RMatrixSet build_rmatrices(const SuperDim& dim, const Ctx& ctx) {
  dim.validate();
  int d = dim.d(), m = dim.m, n = dim.n;
  RMatrixSet s{dim, ctx, RingMatrix(ctx, d * d, d * d), RingMatrix(ctx, d * d, d * d), RingMatrix(ctx, d * d, d * d),
               RingMatrix(ctx, d * d, 1), RingMatrix(ctx, d * d, 1), RingMatrix(ctx, 1, d * d),
               RingMatrix(ctx, 1, d * d), RingMatrix(ctx, d, d)};
  auto qp = [&](int k) { return LaurentPoly::q_pow(ctx, k); };
  LaurentPoly one = LaurentPoly::one(ctx);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      int col = i * d + j, swp = j * d + i;
      LaurentPoly sgn = dim.odd(i) && dim.odd(j) ? -one : one;
      if (i == j) {
        s.pos.set(col, col, dim.odd(i) ? -qp(-1) : qp(1));
        s.neg.set(col, col, dim.odd(i) ? -qp(1) : qp(-1));
      } else if (i < j) {
        s.pos.set(swp, col, sgn);
        s.pos.set(col, col, qp(1) - qp(-1));
        s.neg.set(swp, col, sgn);
      } else {
        s.pos.set(swp, col, sgn);
        s.neg.set(swp, col, sgn);
        s.neg.set(col, col, qp(-1) - qp(1));
      }
      LaurentPoly c = !dim.odd(i) && !dim.odd(j) ? one
                      : dim.odd(i) && !dim.odd(j) ? qp(1)
                      : !dim.odd(i) && dim.odd(j) ? qp(-1)
                                                  : -one;
      s.virt.set(swp, col, c);
    }
  for (int k = 1; k <= d; ++k) {
    int idx = (k - 1) * d + (k - 1);
    s.cup_left.set(idx, 0, one);
    s.cap_left.set(0, idx, one);
    s.cup_right.set(idx, 0, k <= m ? qp(m - n + 1 - 2 * k) : -qp(m - n - 4 * m - 1 + 2 * k));
    s.cap_right.set(0, idx, k <= m ? qp(-m + n - 1 + 2 * k) : -qp(3 * m + n + 1 - 2 * k));
  }
  // mu_k: cap_right after cup_left around a single strand x_k
  for (int k = 0; k < d; ++k) {
    int idx = k * d + k;
    s.mu.set(k, k, s.cap_right.get(0, idx) * s.cup_left.get(idx, 0));
  }
  return s;
}

// ---------------------------------------------------------------- sparse contraction

using StateVec = std::map<std::size_t, LaurentPoly>;

namespace detail {

// Column lists of a square matrix: image of each basis vector.
inline std::vector<std::vector<std::pair<int, LaurentPoly>>> columns(const RingMatrix& a) {
  std::vector<std::vector<std::pair<int, LaurentPoly>>> out(a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (const auto& [c, v] : a.row(r)) out[c].emplace_back(r, v);
  return out;
}

struct LocalOp {
  int slot = 0;  // first slot, 0-based
  int width = 1;
  std::vector<std::vector<std::pair<int, LaurentPoly>>> cols;
};

inline StateVec apply_local(const StateVec& v, const LocalOp& op, int nslots, int d) {
  std::vector<std::size_t> weight(nslots);
  std::size_t w = 1;
  for (int p = nslots - 1; p >= 0; --p) {
    weight[p] = w;
    w *= static_cast<std::size_t>(d);
  }
  StateVec out;
  for (const auto& [idx, coeff] : v) {
    std::size_t local = 0, base = idx;
    for (int k = 0; k < op.width; ++k) {
      std::size_t digit = idx / weight[op.slot + k] % d;
      local = local * d + digit;
      base -= digit * weight[op.slot + k];
    }
    for (const auto& [r, val] : op.cols[local]) {
      std::size_t target = base, rest = static_cast<std::size_t>(r);
      for (int k = op.width - 1; k >= 0; --k) {
        target += rest % d * weight[op.slot + k];
        rest /= d;
      }
      LaurentPoly term = coeff * val;
      auto it = out.find(target);
      if (it == out.end()) {
        out.emplace(target, term);
      } else {
        it->second += term;
        if (it->second.is_zero()) out.erase(it);
      }
    }
  }
  return out;
}

inline std::vector<LocalOp> local_ops(const PrismaticBraidWord& w, const RMatrixSet& s) {
  auto pos = columns(s.pos), neg = columns(s.neg), virt = columns(s.virt);
  std::vector<LocalOp> ops;
  for (const auto& t : w.tokens) {
    LocalOp op;
    op.slot = t.i - 1;
    switch (t.kind) {
      case TokenKind::Sigma:
        op.width = 2;
        op.cols = t.sign > 0 ? pos : neg;
        break;
      case TokenKind::Chi:
        op.width = 2;
        op.cols = virt;
        break;
      case TokenKind::Lambda:
        op.width = 1;
        op.cols = columns(s.omega_action(t.color, t.sign));
        break;
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

}  // namespace detail

// Q(w) applied to a basis vector: tokens act bottom first.
inline StateVec braid_apply(const PrismaticBraidWord& w, const RMatrixSet& s, std::size_t basis) {
  auto ops = detail::local_ops(w, s);
  StateVec v{{basis, LaurentPoly::one(s.ctx)}};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = detail::apply_local(v, *it, w.n, s.dim.d());
  return v;
}

// tr(Q(w) . (mu_side1 (x) ... (x) mu_sideN)) without the writhe factor.
inline LaurentPoly closure_trace(const PrismaticBraidWord& w, const RMatrixSet& s) {
  int d = s.dim.d();
  std::size_t total = 1;
  for (int k = 0; k < w.n; ++k) total *= static_cast<std::size_t>(d);
  std::string sides = w.closure_sides();
  auto ops = detail::local_ops(w, s);
  std::vector<LaurentPoly> part(total, LaurentPoly(s.ctx));
  parallel_for(total, [&](std::size_t b) {
    StateVec v{{b, LaurentPoly::one(s.ctx)}};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) v = detail::apply_local(v, *it, w.n, d);
    auto hit = v.find(b);
    if (hit == v.end()) return;
    LaurentPoly weight = LaurentPoly::one(s.ctx);
    std::size_t rest = b;
    for (int p = w.n - 1; p >= 0; --p) {
      weight *= s.mu_at(static_cast<int>(rest % d), sides[p]);
      rest /= d;
    }
    part[b] = hit->second * weight;
  });
  LaurentPoly sum(s.ctx);
  for (const auto& p : part) sum += p;
  return sum;
}

// Writhe-normalized prismatic polynomial q^{-(m-n) wr} tr(Q(w) mu^{(x)N}).
inline LaurentPoly f_polynomial(const PrismaticBraidWord& w, const SuperDim& dim) {
  w.validate();
  Ctx c = word_context(w);
  RMatrixSet s = build_rmatrices(dim, c);
  return LaurentPoly::q_pow(c, -(dim.m - dim.n) * writhe(w)) * closure_trace(w, s);
}

// ---------------------------------------------------------------- slice evaluation

namespace detail {

inline bool slice_uses(const SliceWord& d, const std::string& color) {
  for (const auto& sl : d.slices)
    for (const auto& p : sl.prims)
      if ((p.kind == Prim::OmegaArc && p.color == color) || (p.kind == Prim::Id && p.sym.color == color)) return true;
  return false;
}

inline RingMatrix primitive_matrix(const Primitive& p, const RMatrixSet& s) {
  int d = s.dim.d();
  switch (p.kind) {
    case Prim::Id: return RingMatrix::identity(s.ctx, p.sym.alpha() ? d : 1);
    case Prim::Pos: return s.pos;
    case Prim::Neg: return s.neg;
    case Prim::Virt: return s.virt;
    case Prim::CupLeft: return s.cup_left;
    case Prim::CupRight: return s.cup_right;
    case Prim::CapLeft: return s.cap_left;
    case Prim::CapRight: return s.cap_right;
    case Prim::OmegaArc: return s.omega_action(p.color, p.sign);
    case Prim::Box: {
      if (static_cast<int>(p.box.size()) != d) throw RTError("box matrix must be " + std::to_string(d) + "x" + std::to_string(d));
      RingMatrix m(s.ctx, d, d);
      for (int i = 0; i < d; ++i) {
        if (static_cast<int>(p.box[i].size()) != d) throw RTError("box matrix row has the wrong length");
        for (int j = 0; j < d; ++j) m.set(i, j, LaurentPoly::parse(s.ctx, p.box[i][j]));
      }
      return m;
    }
  }
  throw RTError("unknown primitive");
}

}  // namespace detail

// Ring for a slice word: q, the palette, and om when present.
inline Ctx slice_context(const SliceWord& d) {
  return standard_context(d.genus, detail::slice_uses(d, kOmega) ? std::vector<std::string>{kOmega}
                                                                   : std::vector<std::string>{});
}

// Product of per-slice tensor products, top slice first. Omega-colored
// boundary strands are one-dimensional.
inline RingMatrix evaluate_slices(const SliceWord& d, const SuperDim& dim, Ctx ctx = nullptr) {
  d.validate();
  if (!ctx) ctx = slice_context(d);
  RMatrixSet s = build_rmatrices(dim, ctx);
  std::optional<RingMatrix> total;
  for (const auto& sl : d.slices) {
    RingMatrix m = RingMatrix::identity(ctx, 1);
    for (const auto& p : sl.prims) m = kron(m, detail::primitive_matrix(p, s));
    total = total ? *total * m : m;
  }
  return total ? *total : RingMatrix::identity(ctx, 1);
}

// Closure of a 1-1 tangle with value M: CapRight over (M (x) id_down) over CupLeft.
inline SliceWord one_one_closure(const std::vector<std::vector<std::string>>& box, int genus = 0) {
  SliceWord d;
  d.genus = genus;
  d.slices.push_back({{Primitive::make(Prim::CapRight)}});
  d.slices.push_back({{Primitive::matrix(box), Primitive::id({false, "a"})}});
  d.slices.push_back({{Primitive::make(Prim::CupLeft)}});
  return d;
}

// ---------------------------------------------------------------- GAP

inline Ctx gap_context() { return RingContext::make({"q", "w"}, 0); }

// (1|1) value of the homology Zh-construction with q -> q^-1 and every
// palette letter (including om) -> w^-1, normalized up to +-q^k w^l.
inline LaurentPoly gap_raw(const PrismaticBraidWord& vb) {
  PrismaticBraidWord zh = homology_zh(vb);
  LaurentPoly f = f_polynomial(zh, SuperDim{1, 1});
  Ctx g = gap_context();
  std::map<std::string, LaurentPoly> phi;
  phi.emplace("q", LaurentPoly::q_pow(g, -1));
  LaurentPoly winv = LaurentPoly::var(g, "w", -1);
  for (const auto& v : f.ctx()->vars())
    if (v != "q") phi.emplace(v, winv);
  return substitute(f, phi, g);
}

inline LaurentPoly gap(const PrismaticBraidWord& vb) {
  LaurentPoly r = gap_raw(vb);
  return canonical_form(r, UnitSpec::all(r.ctx()));
}

// ---------------------------------------------------------------- quantum CSW model

struct QuantumCsw {
  LaurentPoly det_side;  // det(rho - I) at t = q^-2
  LaurentPoly f_side;    // (1|1) value of the strand-reversed word
  std::optional<LaurentPoly> unit;
  bool holds() const { return unit.has_value(); }
};

// det(rho(w) - I) at t = q^-2 against f^{1|1} of w read with strands in the
// opposite order (the identification of the exterior algebra with V^{(x)N}).
inline QuantumCsw quantum_csw_check(const PrismaticBraidWord& w) {
  QuantumCsw r{csw_det(w, TMode::QInv2), f_polynomial(reverse_strands(w), SuperDim{1, 1}), std::nullopt};
  r.unit = eq_up_to_unit(r.f_side, r.det_side, UnitSpec::all(r.det_side.ctx(), true));
  return r;
}

}  // namespace prism
