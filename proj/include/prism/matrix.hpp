#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "ring.hpp"

namespace prism {

// Worker count from PRISM_THREADS, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("PRISM_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? std::min(h, 16u) : 1u;
}

// Runs f(i) for i in [0,n) on up to worker_count() threads. Results must be
// written to per-index slots so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  unsigned w = std::min<std::size_t>(worker_count(), n);
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(w);
  for (unsigned t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += w) f(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

class RingMatrix {
 public:
  using Row = std::map<int, LaurentPoly>;

  RingMatrix() = default;
  RingMatrix(Ctx c, int rows, int cols) : ctx_(std::move(c)), rows_(rows), cols_(cols), data_(rows) {}

  static RingMatrix identity(const Ctx& c, int n) {
    RingMatrix m(c, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, LaurentPoly::one(c));
    return m;
  }
  static RingMatrix diagonal(const Ctx& c, const std::vector<LaurentPoly>& d) {
    RingMatrix m(c, static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m.set(static_cast<int>(i), static_cast<int>(i), d[i]);
    return m;
  }
  static RingMatrix from_rows(const Ctx& c, const std::vector<std::vector<LaurentPoly>>& rows) {
    int r = static_cast<int>(rows.size()), k = r ? static_cast<int>(rows[0].size()) : 0;
    RingMatrix m(c, r, k);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < k; ++j) m.set(i, j, rows[i][j]);
    return m;
  }

  const Ctx& ctx() const { return ctx_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Row& row(int r) const { return data_[r]; }

  LaurentPoly get(int r, int c) const {
    check(r, c);
    auto it = data_[r].find(c);
    return it == data_[r].end() ? LaurentPoly(ctx_) : it->second;
  }
  void set(int r, int c, const LaurentPoly& v) {
    check(r, c);
    if (v.is_zero())
      data_[r].erase(c);
    else
      data_[r][c] = v.ctx() ? v : LaurentPoly(ctx_);
  }
  void add_to(int r, int c, const LaurentPoly& v) {
    check(r, c);
    if (v.is_zero()) return;
    auto it = data_[r].find(c);
    if (it == data_[r].end()) {
      data_[r].emplace(c, v);
    } else {
      it->second += v;
      if (it->second.is_zero()) data_[r].erase(it);
    }
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
  }

  friend RingMatrix operator*(const RingMatrix& a, const RingMatrix& b) {
    if (a.cols_ != b.rows_) throw RingError("matrix shape mismatch in product");
    RingMatrix r(a.ctx_ ? a.ctx_ : b.ctx_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (const auto& [k, aik] : a.data_[i])
        for (const auto& [j, bkj] : b.data_[k]) r.add_to(i, j, aik * bkj);
    return r;
  }
  friend RingMatrix operator+(const RingMatrix& a, const RingMatrix& b) {
    a.same_shape(b);
    RingMatrix r = a;
    for (int i = 0; i < b.rows_; ++i)
      for (const auto& [j, v] : b.data_[i]) r.add_to(i, j, v);
    return r;
  }
  friend RingMatrix operator-(const RingMatrix& a, const RingMatrix& b) {
    a.same_shape(b);
    RingMatrix r = a;
    for (int i = 0; i < b.rows_; ++i)
      for (const auto& [j, v] : b.data_[i]) r.add_to(i, j, -v);
    return r;
  }
  friend RingMatrix operator*(const LaurentPoly& s, const RingMatrix& a) {
    RingMatrix r(a.ctx_, a.rows_, a.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (const auto& [j, v] : a.data_[i]) r.set(i, j, s * v);
    return r;
  }
  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (int i = 0; i < a.rows_; ++i) {
      if (a.data_[i].size() != b.data_[i].size()) return false;
      for (const auto& [j, v] : a.data_[i]) {
        auto it = b.data_[i].find(j);
        if (it == b.data_[i].end() || it->second != v) return false;
      }
    }
    return true;
  }
  friend bool operator!=(const RingMatrix& a, const RingMatrix& b) { return !(a == b); }

  RingMatrix transpose() const {
    RingMatrix r(ctx_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) r.set(j, i, v);
    return r;
  }

  // Kronecker product, row-major: (a ⊗ b)[i*br+k][j*bc+l] = a[i][j] b[k][l]
  friend RingMatrix kron(const RingMatrix& a, const RingMatrix& b) {
    RingMatrix r(a.ctx_ ? a.ctx_ : b.ctx_, a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (const auto& [j, av] : a.data_[i])
        for (int k = 0; k < b.rows_; ++k)
          for (const auto& [l, bv] : b.data_[k]) r.set(i * b.rows_ + k, j * b.cols_ + l, av * bv);
    return r;
  }

  LaurentPoly trace() const {
    LaurentPoly t(ctx_);
    for (int i = 0; i < std::min(rows_, cols_); ++i) {
      auto it = data_[i].find(i);
      if (it != data_[i].end()) t += it->second;
    }
    return t;
  }

  RingMatrix map(const std::function<LaurentPoly(const LaurentPoly&)>& f, const Ctx& target) const {
    RingMatrix r(target, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i]) r.set(i, j, f(v));
    return r;
  }

  bool is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
      for (const auto& [j, v] : data_[i])
        if (i != j) return false;
    return true;
  }

  // Cofactor expansion below dimension 5, fraction-free Bareiss otherwise.
  LaurentPoly determinant() const {
    if (rows_ != cols_) throw RingError("determinant of a non-square matrix");
    if (rows_ == 0) return LaurentPoly::one(ctx_);
    if (rows_ < 5) {
      std::vector<int> cols(rows_);
      for (int i = 0; i < rows_; ++i) cols[i] = i;
      return cofactor(0, cols);
    }
    return bareiss();
  }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? ",\n [" : "[";
      for (int j = 0; j < cols_; ++j) s += (j ? ", " : "") + get(i, j).str();
      s += "]";
    }
    return s + "]";
  }

 private:
  void check(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw RingError("matrix index out of range");
  }
  void same_shape(const RingMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw RingError("matrix shape mismatch");
  }

  LaurentPoly cofactor(int r, const std::vector<int>& cols) const {
    if (r == rows_) return LaurentPoly::one(ctx_);
    LaurentPoly acc(ctx_);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto it = data_[r].find(cols[k]);
      if (it == data_[r].end()) continue;
      std::vector<int> rest = cols;
      rest.erase(rest.begin() + static_cast<long>(k));
      LaurentPoly sub = it->second * cofactor(r + 1, rest);
      if (k % 2)
        acc -= sub;
      else
        acc += sub;
    }
    return acc;
  }

  LaurentPoly bareiss() const {
    int n = rows_;
    std::vector<std::vector<LaurentPoly>> a(n, std::vector<LaurentPoly>(n, LaurentPoly(ctx_)));
    for (int i = 0; i < n; ++i)
      for (const auto& [j, v] : data_[i]) a[i][j] = v;
    LaurentPoly prev = LaurentPoly::one(ctx_);
    bool neg = false;
    for (int k = 0; k < n - 1; ++k) {
      if (a[k][k].is_zero()) {
        int p = k + 1;
        while (p < n && a[p][k].is_zero()) ++p;
        if (p == n) return LaurentPoly(ctx_);
        std::swap(a[k], a[p]);
        neg = !neg;
      }
      for (int i = k + 1; i < n; ++i)
        for (int j = k + 1; j < n; ++j) {
          LaurentPoly num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
          a[i][j] = num.exact_div(prev);
        }
      for (int i = k + 1; i < n; ++i) a[i][k] = LaurentPoly(ctx_);
      prev = a[k][k];
    }
    return neg ? -a[n - 1][n - 1] : a[n - 1][n - 1];
  }

  Ctx ctx_;
  int rows_ = 0, cols_ = 0;
  std::vector<Row> data_;
};

}  // namespace prism
