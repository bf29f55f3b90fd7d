#include "zariskilab/zariski_core.hpp"

#include <algorithm>
#include <limits>

namespace zar::core {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// ---------------------------------------------------------------------------
// Exact-rational primal simplex with Bland's rule (anti-cycling).

struct Tableau {
  RatMat a;                        // m x ncols, basis columns kept identity
  RatVec b;                        // m, kept >= 0
  std::vector<std::size_t> basis;  // m, column index of the basic variable
};

void pivot(Tableau& t, std::size_t row, std::size_t col) {
  Rat p = t.a[row][col];
  for (auto& v : t.a[row]) v /= p;
  t.b[row] /= p;
  for (std::size_t r = 0; r < t.a.size(); ++r) {
    if (r == row) continue;
    Rat f = t.a[r][col];
    if (f == 0) continue;
    for (std::size_t c = 0; c < t.a[r].size(); ++c)
      t.a[r][c] -= f * t.a[row][c];
    t.b[r] -= f * t.b[row];
  }
  t.basis[row] = col;
}

// Minimizes c (restricted to the first ncols columns) from the current basic
// feasible solution. The LPs solved here are always bounded.
void run_simplex(Tableau& t, const RatVec& c, std::size_t ncols) {
  while (true) {
    std::size_t enter = kNone;
    for (std::size_t j = 0; j < ncols && enter == kNone; ++j) {
      Rat rj = c[j];
      for (std::size_t i = 0; i < t.basis.size(); ++i) {
        const Rat& cb = c[t.basis[i]];
        if (cb != 0 && t.a[i][j] != 0) rj -= cb * t.a[i][j];
      }
      if (rj < 0) enter = j;  // Bland: first improving index
    }
    if (enter == kNone) return;
    std::size_t leave = kNone;
    Rat best;
    for (std::size_t i = 0; i < t.a.size(); ++i) {
      if (t.a[i][enter] > 0) {
        Rat ratio = t.b[i] / t.a[i][enter];
        if (leave == kNone || ratio < best ||
            (ratio == best && t.basis[i] < t.basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == kNone)
      throw std::logic_error("unbounded LP in zariski_core (cannot happen)");
    pivot(t, leave, enter);
  }
}

// min sum(z) over { z >= 0 : Q z <= rhs }. Returns nullopt when infeasible.
std::optional<RatVec> least_negative_part(const RatMat& q, const RatVec& rhs) {
  const std::size_t n = rhs.size();
  // Columns: [0, n) = z, [n, 2n) = slack, [2n, 3n) = artificial.
  Tableau t;
  t.a.assign(n, RatVec(3 * n, Rat(0)));
  t.b = rhs;
  t.basis.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Rat sign = (rhs[i] < 0) ? Rat(-1) : Rat(1);
    for (std::size_t j = 0; j < n; ++j) t.a[i][j] = sign * q[i][j];
    t.a[i][n + i] = sign;          // slack (flipped with the row)
    t.a[i][2 * n + i] = 1;         // artificial: initial basis
    t.b[i] = sign * rhs[i];
    t.basis[i] = 2 * n + i;
  }
  // Phase 1: drive artificials to zero.
  RatVec c1(3 * n, Rat(0));
  for (std::size_t j = 2 * n; j < 3 * n; ++j) c1[j] = 1;
  run_simplex(t, c1, 3 * n);
  Rat phase1(0);
  for (std::size_t i = 0; i < n; ++i)
    if (t.basis[i] >= 2 * n) phase1 += t.b[i];
  if (phase1 != 0) return std::nullopt;
  // Pivot remaining (degenerate) artificials out, dropping redundant rows.
  for (std::size_t i = 0; i < t.a.size();) {
    if (t.basis[i] < 2 * n) {
      ++i;
      continue;
    }
    std::size_t col = kNone;
    for (std::size_t j = 0; j < 2 * n && col == kNone; ++j)
      if (t.a[i][j] != 0) col = j;
    if (col == kNone) {
      t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i));
      t.b.erase(t.b.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      pivot(t, i, col);
      ++i;
    }
  }
  // Phase 2: minimize sum(z) over the original columns.
  RatVec c2(3 * n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) c2[j] = 1;
  run_simplex(t, c2, 2 * n);
  RatVec z(n, Rat(0));
  for (std::size_t i = 0; i < t.basis.size(); ++i)
    if (t.basis[i] < n) z[t.basis[i]] = t.b[i];
  return z;
}

// Pivot recursion on the support block. Returns (A, B) with A * qk * B = -I, A lower
// triangular, B upper triangular, both with non-negative entries. `stage` is
// 1-based; a non-negative leading diagonal at stage >= 2 means the reduction
// degenerated.
std::pair<RatMat, RatMat> reduce(const RatMat& qk, std::size_t stage) {
  const std::size_t k = qk.size();
  const Rat& q00 = qk[0][0];
  if (q00 >= 0) throw SingularReduction(stage);
  if (k == 1) return {RatMat{{Rat(-1) / q00}}, RatMat{{Rat(1)}}};
  // A1: row 0 = e_0; row i = q_i0 * e_0 + (-q00) * e_i.
  RatMat a1(k, RatVec(k, Rat(0)));
  RatMat b1(k, RatVec(k, Rat(0)));
  a1[0][0] = 1;
  b1[0][0] = 1;
  for (std::size_t i = 1; i < k; ++i) {
    a1[i][0] = qk[i][0];
    a1[i][i] = -q00;
    b1[0][i] = qk[0][i];
    b1[i][i] = -q00;
  }
  // Reduced matrix: q'_{ij} = q00 (q00 q_ij - q_i0 q_0j), 1 <= i, j < k.
  RatMat qn(k - 1, RatVec(k - 1));
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = 1; j < k; ++j)
      qn[i - 1][j - 1] = q00 * (q00 * qk[i][j] - qk[i][0] * qk[0][j]);
  auto [ar, br] = reduce(qn, stage + 1);
  // A = diag(1/(-q00), Ar) * A1;  B = B1 * diag(1, Br).
  RatMat dl(k, RatVec(k, Rat(0)));
  dl[0][0] = Rat(-1) / q00;
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = 1; j < k; ++j) dl[i][j] = ar[i - 1][j - 1];
  RatMat dr(k, RatVec(k, Rat(0)));
  dr[0][0] = 1;
  for (std::size_t i = 1; i < k; ++i)
    for (std::size_t j = 1; j < k; ++j) dr[i][j] = br[i - 1][j - 1];
  return {mat_mul(dl, a1), mat_mul(b1, dr)};
}

RatMat leading_minor(const RatMat& m, std::size_t k) {
  RatMat out(k, RatVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i][j] = m[i][j];
  return out;
}

}  // namespace

std::size_t ZariskiSystem::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return i;
  throw LabelMismatch(label);
}

ZariskiSystem validate_system(const RatMat& q,
                              std::vector<std::string> labels) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("empty system");
  for (const auto& row : q)
    if (row.size() != n) throw std::invalid_argument("matrix not square");
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n)
    throw std::invalid_argument("label count does not match matrix size");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels[i] == labels[j])
        throw std::invalid_argument("duplicate label: " + labels[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && q[i][j] < 0) throw OffDiagonalNegative(i, j);
  return ZariskiSystem{std::move(labels), q};
}

RatVec align(const ZariskiSystem& sys, const BasisVector& v) {
  RatVec out(sys.size(), Rat(0));
  for (const auto& [label, value] : v.coords)
    out[sys.index_of(label)] = value;
  return out;
}

BasisVector to_basis_vector(const ZariskiSystem& sys, const RatVec& coords) {
  if (coords.size() != sys.size())
    throw std::invalid_argument("coordinate count mismatch");
  BasisVector v;
  for (std::size_t i = 0; i < coords.size(); ++i)
    v.coords[sys.labels[i]] = coords[i];
  return v;
}

bool is_nef(const ZariskiSystem& sys, const BasisVector& v) {
  RatVec qv = mat_vec(sys.q, align(sys, v));
  return std::all_of(qv.begin(), qv.end(), [](const Rat& r) { return r >= 0; });
}

BasisVector coordinate_max(const ZariskiSystem& sys,
                           const std::vector<BasisVector>& vs) {
  if (vs.empty()) throw EmptyList();
  RatVec acc = align(sys, vs[0]);
  for (std::size_t k = 1; k < vs.size(); ++k) {
    RatVec cur = align(sys, vs[k]);
    for (std::size_t i = 0; i < acc.size(); ++i)
      if (cur[i] > acc[i]) acc[i] = cur[i];
  }
  return to_basis_vector(sys, acc);
}

NegativityCertificate certify_negative_part(
    const ZariskiSystem& sys, const std::vector<std::string>& support) {
  if (support.empty())
    throw std::invalid_argument("empty support has no certificate");
  std::vector<std::size_t> ids;
  ids.reserve(support.size());
  for (const auto& s : support) ids.push_back(sys.index_of(s));
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw std::invalid_argument("duplicate label in support");
  const std::size_t k = ids.size();
  RatMat qp(k, RatVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) qp[i][j] = sys.q[ids[i]][ids[j]];
  for (std::size_t i = 0; i < k; ++i)
    if (qp[i][i] >= 0) throw NonNegativeDiagonal(sys.labels[ids[i]]);

  auto [a, b] = reduce(qp, 1);

  // The construction guarantees these; verify exactly anyway so every emitted
  // certificate is self-checked.
  RatMat prod = mat_mul(mat_mul(a, qp), b);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (prod[i][j] != (i == j ? Rat(-1) : Rat(0)))
        throw CertificateFailure("A Q' B != -I");
      if (j > i && a[i][j] != 0)
        throw CertificateFailure("A not lower triangular");
      if (i > j && b[i][j] != 0)
        throw CertificateFailure("B not upper triangular");
      if (a[i][j] < 0 || b[i][j] < 0)
        throw CertificateFailure("negative certificate entry");
    }

  NegativityCertificate cert;
  for (std::size_t id : ids) cert.support.push_back(sys.labels[id]);
  cert.lower = std::move(a);
  cert.upper = std::move(b);
  Rat det = mat_det(qp);
  cert.det_sign_ok = ((k % 2 == 0) ? det : -det) > 0;
  if (qp == mat_transpose(qp)) {
    bool negdef = true;
    for (std::size_t j = 1; j <= k && negdef; ++j) {
      Rat minor = mat_det(leading_minor(qp, j));
      negdef = ((j % 2 == 0) ? minor : -minor) > 0;
    }
    cert.symmetric_negdef = negdef;
  }
  return cert;
}

Decomposition solve_decomposition(const ZariskiSystem& sys,
                                  const BasisVector& x) {
  const std::size_t n = sys.size();
  RatVec xv = align(sys, x);
  auto z = least_negative_part(sys.q, mat_vec(sys.q, xv));
  if (!z) throw NoNefBelow();
  RatVec yv(n);
  for (std::size_t i = 0; i < n; ++i) yv[i] = xv[i] - (*z)[i];

  // Exact verification of the defining conditions; any failure is a solver
  // bug, never a tolerance issue.
  RatVec qy = mat_vec(sys.q, yv);
  for (std::size_t i = 0; i < n; ++i) {
    if ((*z)[i] < 0) throw CertificateFailure("negative part not effective");
    if (qy[i] < 0) throw CertificateFailure("positive part not nef");
    if ((*z)[i] != 0 && qy[i] != 0)
      throw CertificateFailure("complementarity violated on the support");
  }

  Decomposition d;
  d.positive = to_basis_vector(sys, yv);
  d.negative = to_basis_vector(sys, *z);
  for (std::size_t i = 0; i < n; ++i)
    if ((*z)[i] != 0) d.support.push_back(sys.labels[i]);
  if (!d.support.empty()) {
    try {
      d.certificate = certify_negative_part(sys, d.support);
    } catch (const NonNegativeDiagonal&) {
      // Impossible for a genuine greatest element (every support label
      // satisfies phi_i(e_i) < 0); reaching here means the solver answer is
      // wrong.
      throw CertificateFailure("support diagonal not negative");
    } catch (const SingularReduction&) {
      throw CertificateFailure("support reduction degenerated");
    }
    if (!d.certificate->det_sign_ok)
      throw CertificateFailure("support determinant sign wrong");
  }
  return d;
}

bool independence_check(const ZariskiSystem& sys,
                        const std::vector<std::string>& support) {
  std::vector<std::size_t> ids;
  for (const auto& s : support) ids.push_back(sys.index_of(s));
  const std::size_t n = sys.size(), k = ids.size();
  RatMat cols(n, RatVec(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) cols[i][j] = sys.q[i][ids[j]];
  return mat_rank(std::move(cols)) == k;
}

RatVec clip_iterate(const ZariskiSystem& sys, const RatVec& x, int sweeps) {
  const std::size_t n = sys.size();
  if (x.size() != n) throw std::invalid_argument("coordinate count mismatch");
  RatVec y = x;
  for (int s = 0; s < sweeps; ++s) {
    bool violated = false;
    for (std::size_t l = 0; l < n; ++l) {
      Rat r(0);
      for (std::size_t j = 0; j < n; ++j) r += sys.q[l][j] * y[j];
      if (r < 0) {
        if (sys.q[l][l] >= 0)
          throw std::domain_error(
              "clip step needs a negative diagonal at the violated "
              "coordinate");
        y[l] -= r / sys.q[l][l];
        violated = true;
      }
    }
    if (!violated) break;
  }
  return y;
}

}  // namespace zar::core
