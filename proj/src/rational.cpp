#include "zariskilab/rational.hpp"

#include <cctype>

namespace zar {

std::string rat_to_string(const Rat& r) { return r.str(); }

Rat rat_from_string(const std::string& s) {
  auto fail = [&]() -> Rat {
    throw std::invalid_argument("not a rational: '" + s + "'");
  };
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
  std::size_t num_begin = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos == num_begin) return fail();
  std::string num = s.substr(0, pos);
  if (num[0] == '+') num = num.substr(1);
  if (pos == s.size()) return Rat(boost::multiprecision::mpz_int(num));
  if (s[pos] != '/') return fail();
  ++pos;
  std::size_t den_begin = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
    ++pos;
  if (pos == den_begin || pos != s.size()) return fail();
  boost::multiprecision::mpz_int den(s.substr(den_begin));
  if (den == 0) return fail();
  return Rat(boost::multiprecision::mpz_int(num), den);
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

RatVec mat_vec(const RatMat& m, const RatVec& v) {
  RatVec out(m.size(), Rat(0));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

RatMat mat_mul(const RatMat& a, const RatMat& b) {
  const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  RatMat out(n, RatVec(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
    }
  return out;
}

RatMat mat_transpose(const RatMat& m) {
  const std::size_t r = m.size(), c = r ? m[0].size() : 0;
  RatMat out(c, RatVec(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j][i] = m[i][j];
  return out;
}

RatMat mat_identity(std::size_t n) {
  RatMat out(n, RatVec(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

Rat mat_det(RatMat m) {
  const std::size_t n = m.size();
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return Rat(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::size_t mat_rank(RatMat m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][col] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace zar
