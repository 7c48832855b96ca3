#pragma once

#include <set>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "ring.hpp"

namespace prism {

struct SymplecticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using IntMatrix = std::vector<std::vector<Int>>;

// <u,v> = sum_i u_{x_i} v_{y_i} - u_{y_i} v_{x_i}
inline long pairing(const H1Vector& u, const H1Vector& v) {
  if (u.g != v.g) throw SymplecticError("pairing of vectors with different genus");
  long s = 0;
  for (int i = 0; i < u.g; ++i) s += u.coords[2 * i] * v.coords[2 * i + 1] - u.coords[2 * i + 1] * v.coords[2 * i];
  return s;
}

namespace detail {

// Row echelon form over Q, fraction free; returns the nonzero rows.
inline IntMatrix echelon_q(IntMatrix a) {
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][c] == 0) continue;
      Int f = a[i][c], piv = a[r][c];
      Int g = 0;
      for (std::size_t j = 0; j < cols; ++j) {
        a[i][j] = a[i][j] * piv - a[r][j] * f;
        g = boost::multiprecision::gcd(g, a[i][j]);
      }
      if (g > 1)
        for (auto& x : a[i]) x /= g;
    }
    ++r;
  }
  a.resize(r);
  return a;
}

inline IntMatrix echelon_mod(IntMatrix a, int p) {
  for (auto& row : a)
    for (auto& x : row) x = ((x % p) + p) % p;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  auto inv = [p](Int v) {
    Int res = 1, b = v, e = p - 2;
    while (e > 0) {
      if (e & 1) res = res * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return res;
  };
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t k = r;
    while (k < rows && a[k][c] == 0) ++k;
    if (k == rows) continue;
    std::swap(a[r], a[k]);
    Int iv = inv(a[r][c]);
    for (auto& x : a[r]) x = x * iv % p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Int f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] = (((a[i][j] - f * a[r][j]) % p) + p) % p;
    }
    ++r;
  }
  a.resize(r);
  return a;
}

inline IntMatrix to_matrix(const std::set<H1Vector>& vs) {
  IntMatrix m;
  for (const auto& v : vs) {
    std::vector<Int> row;
    for (long c : v.coords) row.emplace_back(c);
    m.push_back(row);
  }
  return m;
}

inline IntMatrix gram(const IntMatrix& basis, int g) {
  IntMatrix out(basis.size(), std::vector<Int>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Int s = 0;
      for (int i = 0; i < g; ++i)
        s += basis[a][2 * i] * basis[b][2 * i + 1] - basis[a][2 * i + 1] * basis[b][2 * i];
      out[a][b] = s;
    }
  return out;
}

inline int genus_of(const std::set<H1Vector>& vs) {
  int g = vs.empty() ? 0 : vs.begin()->g;
  for (const auto& v : vs)
    if (v.g != g) throw SymplecticError("vectors of different genus");
  return g;
}

}  // namespace detail

inline int rank_q(const IntMatrix& m) { return static_cast<int>(detail::echelon_q(m).size()); }
inline int rank_mod(const IntMatrix& m, int p) { return static_cast<int>(detail::echelon_mod(m, p).size()); }

// rank of W/(W cap W^perp): the form restricted to a basis of W = span(vs)
inline int symplectic_rank(const std::set<H1Vector>& vs) {
  int g = detail::genus_of(vs);
  return rank_q(detail::gram(detail::echelon_q(detail::to_matrix(vs)), g));
}

inline int z2_symplectic_rank(const std::set<H1Vector>& vs) {
  int g = detail::genus_of(vs);
  return rank_mod(detail::gram(detail::echelon_mod(detail::to_matrix(vs), 2), g), 2);
}

// (x1,y1,...,xg,yg)-exponents of every monomial of p; other variables are ignored.
inline std::set<H1Vector> coefficient_vectors(const LaurentPoly& p, int g) {
  std::set<H1Vector> out;
  if (p.is_zero()) return out;
  const Ctx& c = p.ctx();
  std::vector<int> idx;
  for (int i = 1; i <= g; ++i) {
    idx.push_back(c->find("x" + std::to_string(i)));
    idx.push_back(c->find("y" + std::to_string(i)));
  }
  for (const auto& [e, coeff] : p.terms()) {
    H1Vector v(g);
    for (int k = 0; k < 2 * g; ++k) v.coords[k] = idx[k] < 0 ? 0 : e[idx[k]];
    out.insert(v);
  }
  return out;
}

// Quotients of the coefficient classes: each vector minus the least one.
inline std::set<H1Vector> coefficient_differences(const LaurentPoly& p, int g) {
  auto vs = coefficient_vectors(p, g);
  std::set<H1Vector> out;
  if (vs.empty()) return out;
  const H1Vector& base = *vs.begin();
  for (const auto& v : vs) {
    H1Vector d(g);
    for (int k = 0; k < 2 * g; ++k) d.coords[k] = v.coords[k] - base.coords[k];
    out.insert(d);
  }
  return out;
}

// Rank of the coefficient classes themselves, as used for f~^{m|n}.
inline int polynomial_rank(const LaurentPoly& p, int g) { return symplectic_rank(coefficient_vectors(p, g)); }

// Rank of the quotients of coefficients, as used for the CSW polynomial; unchanged by unit multiples.
inline int quotient_rank(const LaurentPoly& p, int g) { return symplectic_rank(coefficient_differences(p, g)); }

inline int genus_lower_bound(const LaurentPoly& p, int g) { return polynomial_rank(p, g) / 2; }

// ---------------------------------------------------------------- Sp(2g, Z)

using SpMatrix = std::vector<std::vector<long>>;

inline SpMatrix standard_j(int g) {
  SpMatrix j(2 * g, std::vector<long>(2 * g, 0));
  for (int i = 0; i < g; ++i) {
    j[2 * i][2 * i + 1] = 1;
    j[2 * i + 1][2 * i] = -1;
  }
  return j;
}

inline bool is_symplectic(const SpMatrix& m) {
  std::size_t n = m.size();
  if (n % 2) return false;
  for (const auto& r : m)
    if (r.size() != n) return false;
  SpMatrix j = standard_j(static_cast<int>(n / 2));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      long s = 0;
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) s += m[k][a] * j[k][l] * m[l][b];
      if (s != j[a][b]) return false;
    }
  return true;
}

inline H1Vector apply(const SpMatrix& m, const H1Vector& v) {
  H1Vector out(v.g);
  for (int a = 0; a < 2 * v.g; ++a)
    for (int b = 0; b < 2 * v.g; ++b) out.coords[a] += m[a][b] * v.coords[b];
  return out;
}

// Replace every (x,y)-exponent vector v by Mv.
inline LaurentPoly apply_basis_change(const LaurentPoly& p, const SpMatrix& m) {
  if (!is_symplectic(m)) throw SymplecticError("matrix is not in Sp(2g,Z)");
  int g = static_cast<int>(m.size() / 2);
  if (p.is_zero()) return p;
  const Ctx& c = p.ctx();
  std::vector<int> idx;
  for (int i = 1; i <= g; ++i) {
    idx.push_back(c->at("x" + std::to_string(i)));
    idx.push_back(c->at("y" + std::to_string(i)));
  }
  LaurentPoly::Terms t;
  for (const auto& [e, coeff] : p.terms()) {
    LaurentPoly::Exps ne = e;
    for (int a = 0; a < 2 * g; ++a) {
      long s = 0;
      for (int b = 0; b < 2 * g; ++b) s += m[a][b] * e[idx[b]];
      ne[idx[a]] = static_cast<int>(s);
    }
    LaurentPoly::accumulate(t, ne, coeff);
  }
  LaurentPoly out(c);
  for (const auto& [e, coeff] : t) out += LaurentPoly::monomial(c, e, coeff);
  return out;
}

}  // namespace prism
