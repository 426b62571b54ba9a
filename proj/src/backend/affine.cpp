#include "arrabs/backend/affine.hpp"

#include <algorithm>

namespace arrabs::backend {

namespace {

using Row = std::vector<Rat>;

/// Reduces rows to RREF over the first `cols` columns; returns pivot columns.
std::vector<std::size_t> rref(std::vector<Row>& rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Rat inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      Rat f = rows[k][c];
      for (std::size_t j = 0; j < rows[k].size(); ++j) rows[k][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Row to_row(std::size_t n, const Linear& e) {
  Row r(n + 1, Rat(0));
  for (const auto& [v, c] : e.terms) r[v] += Rat(c);
  r[n] += Rat(e.constant);
  return r;
}

}  // namespace

AffineEqs AffineEqs::top(std::size_t n) {
  AffineEqs a;
  a.n_ = n;
  return a;
}

AffineEqs AffineEqs::bottom(std::size_t n) {
  AffineEqs a;
  a.n_ = n;
  a.bottom_ = true;
  return a;
}

void AffineEqs::normalize() {
  if (bottom_) return;
  std::vector<std::size_t> piv = rref(rows_, n_);
  std::vector<Row> kept;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    bool zero = std::all_of(rows_[r].begin(), rows_[r].begin() + n_, [](const Rat& x) { return x == 0; });
    if (!zero) {
      kept.push_back(rows_[r]);
    } else if (rows_[r][n_] != 0) {
      bottom_ = true;
      rows_.clear();
      return;
    }
  }
  rows_ = std::move(kept);
}

void AffineEqs::add_equality(const Linear& e) {
  if (bottom_) return;
  rows_.push_back(to_row(n_, e));
  normalize();
}

void AffineEqs::forget(std::size_t v) {
  if (bottom_) return;
  auto it = std::find_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r[v] != 0; });
  if (it == rows_.end()) return;
  Row pivot = *it;
  rows_.erase(it);
  for (auto& r : rows_) {
    if (r[v] == 0) continue;
    Rat f = r[v] / pivot[v];
    for (std::size_t j = 0; j <= n_; ++j) r[j] -= f * pivot[j];
  }
  normalize();
}

void AffineEqs::assign(std::size_t v, const Linear& e) {
  if (bottom_) return;
  Row er = to_row(n_, e);
  Rat a = er[v];
  if (a != 0) {
    // old v = (v' - rest) / a with rest = e - a*v
    for (auto& r : rows_) {
      Rat cv = r[v];
      if (cv == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (j == v) continue;
        r[j] -= cv * er[j] / a;
      }
      r[v] = cv / a;
    }
    normalize();
    return;
  }
  forget(v);
  for (auto& x : er) x = -x;
  er[v] += 1;
  rows_.push_back(er);
  normalize();
}

std::vector<Linear> AffineEqs::equalities() const {
  std::vector<Linear> out;
  for (const auto& r : rows_) {
    Int l = 1;
    for (const auto& x : r) l = lia::lcm(l, boost::multiprecision::denominator(x));
    Linear e;
    for (std::size_t j = 0; j < n_; ++j)
      if (r[j] != 0) e.terms.emplace_back(j, boost::multiprecision::numerator(Rat(r[j] * l)));
    e.constant = boost::multiprecision::numerator(Rat(r[n_] * l));
    out.push_back(std::move(e));
  }
  return out;
}

void AffineEqs::generators(Row& point, std::vector<Row>& dirs) const {
  point.assign(n_, Rat(0));
  dirs.clear();
  std::vector<int> pivot_row(n_, -1);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    std::size_t c = 0;
    while (rows_[r][c] == 0) ++c;
    pivot_row[c] = static_cast<int>(r);
    point[c] = -rows_[r][n_];
  }
  for (std::size_t f = 0; f < n_; ++f) {
    if (pivot_row[f] >= 0) continue;
    Row d(n_, Rat(0));
    d[f] = 1;
    for (std::size_t c = 0; c < n_; ++c)
      if (pivot_row[c] >= 0) d[c] = -rows_[pivot_row[c]][f];
    dirs.push_back(std::move(d));
  }
}

AffineEqs AffineEqs::from_generators(std::size_t n, const Row& point, std::vector<Row> dirs) {
  std::vector<std::size_t> piv = rref(dirs, n);
  dirs.resize(piv.size());
  std::vector<int> pivot_row(n, -1);
  for (std::size_t r = 0; r < piv.size(); ++r) pivot_row[piv[r]] = static_cast<int>(r);
  AffineEqs out = top(n);
  for (std::size_t f = 0; f < n; ++f) {
    if (pivot_row[f] >= 0) continue;
    Row a(n + 1, Rat(0));
    a[f] = 1;
    for (std::size_t c = 0; c < n; ++c)
      if (pivot_row[c] >= 0) a[c] = -dirs[pivot_row[c]][f];
    Rat s = 0;
    for (std::size_t j = 0; j < n; ++j) s += a[j] * point[j];
    a[n] = -s;
    out.rows_.push_back(std::move(a));
  }
  out.normalize();
  return out;
}

AffineEqs join(const AffineEqs& a, const AffineEqs& b) {
  if (a.bottom_) return b;
  if (b.bottom_) return a;
  Row pa, pb;
  std::vector<Row> da, db;
  a.generators(pa, da);
  b.generators(pb, db);
  for (auto& d : db) da.push_back(std::move(d));
  Row diff(a.n_);
  for (std::size_t j = 0; j < a.n_; ++j) diff[j] = pb[j] - pa[j];
  da.push_back(std::move(diff));
  return AffineEqs::from_generators(a.n_, pa, std::move(da));
}

bool leq(const AffineEqs& a, const AffineEqs& b) {
  if (a.bottom_) return true;
  if (b.bottom_) return false;
  Row p;
  std::vector<Row> dirs;
  a.generators(p, dirs);
  for (const auto& r : b.rows_) {
    Rat s = r[b.n_];
    for (std::size_t j = 0; j < b.n_; ++j) s += r[j] * p[j];
    if (s != 0) return false;
    for (const auto& d : dirs) {
      Rat t = 0;
      for (std::size_t j = 0; j < b.n_; ++j) t += r[j] * d[j];
      if (t != 0) return false;
    }
  }
  return true;
}

bool operator==(const AffineEqs& a, const AffineEqs& b) {
  if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
  return a.n_ == b.n_ && a.rows_ == b.rows_;
}

}  // namespace arrabs::backend
