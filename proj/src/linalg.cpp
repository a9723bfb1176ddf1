#include "tvob/linalg.hpp"

#include <functional>

namespace tvob {

Echelon rref(RatMat m, size_t cols) {
  Echelon e;
  size_t row = 0;
  for (size_t c = 0; c < cols && row < m.size(); ++c) {
    size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rat inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rat f = m[r][c];
      for (size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    e.pivots.push_back(c);
    ++row;
  }
  m.resize(row);
  e.rows = std::move(m);
  return e;
}

size_t rank(const RatMat& m, size_t cols) { return rref(m, cols).pivots.size(); }

Rat determinant(RatMat m) {
  const size_t n = m.size();
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rat f = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

RatMat nullspace(const RatMat& m, size_t cols) {
  Echelon e = rref(m, cols);
  std::vector<bool> is_pivot(cols, false);
  for (size_t p : e.pivots) is_pivot[p] = true;
  RatMat basis;
  for (size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RatVec v(cols, Rat(0));
    v[f] = 1;
    for (size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<LinearSolution> solve(const RatMat& m, const RatVec& rhs, size_t cols) {
  RatMat aug = m;
  for (size_t r = 0; r < aug.size(); ++r) aug[r].push_back(rhs[r]);
  Echelon e = rref(aug, cols + 1);
  for (size_t p : e.pivots)
    if (p == cols) return std::nullopt;
  LinearSolution s;
  s.particular.assign(cols, Rat(0));
  for (size_t r = 0; r < e.rows.size(); ++r) s.particular[e.pivots[r]] = e.rows[r][cols];
  s.kernel = nullspace(m, cols);
  return s;
}

RatMat transpose(const RatMat& m, size_t cols) {
  RatMat t(cols, RatVec(m.size()));
  for (size_t r = 0; r < m.size(); ++r)
    for (size_t c = 0; c < cols; ++c) t[c][r] = m[r][c];
  return t;
}

RatVec apply(const RatMat& m, const RatVec& x) {
  RatVec y(m.size());
  for (size_t r = 0; r < m.size(); ++r) y[r] = dot(m[r], x);
  return y;
}

Int maximal_minor_gcd(const RatMat& m, size_t cols) {
  const size_t k = m.size();
  Int g = 0;
  std::vector<size_t> pick;
  std::function<void(size_t)> rec = [&](size_t start) {
    if (pick.size() == k) {
      RatMat sq(k, RatVec(k));
      for (size_t r = 0; r < k; ++r)
        for (size_t c = 0; c < k; ++c) sq[r][c] = m[r][pick[c]];
      Rat d = determinant(sq);
      Int di = d.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), di.get_mpz_t());
      return;
    }
    for (size_t c = start; c < cols; ++c) {
      pick.push_back(c);
      rec(c + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return g;
}

}  // namespace tvob
