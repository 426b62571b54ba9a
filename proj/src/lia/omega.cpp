#include "omega.hpp"

#include <algorithm>

namespace arrabs::lia::detail {

namespace {

// sum(a[j] * x_j) + c, compared with zero by `eq` (== when true, >= else).
struct Row {
  std::vector<Int> a;
  Int c;
  bool eq = false;
};

using Values = std::vector<Int>;

Int closest_to_zero(const std::optional<Int>& lo, const std::optional<Int>& hi) {
  if (lo && *lo > 0) return *lo;
  if (hi && *hi < 0) return *hi;
  return 0;
}

Int eval_rest(const Row& r, std::size_t skip, const Values& v) {
  Int s = r.c;
  for (std::size_t j = 0; j < r.a.size(); ++j)
    if (j != skip && r.a[j] != 0) s += r.a[j] * v[j];
  return s;
}

// Value for column j satisfying every row in `rows` given the other columns.
Int pick_value(const std::vector<Row>& rows, std::size_t j, const Values& v) {
  std::optional<Int> lo, hi;
  for (const auto& r : rows) {
    const Int& a = r.a[j];
    if (a == 0) continue;
    Int rest = eval_rest(r, j, v);
    if (a > 0) {
      Int b = ceil_div(-rest, a);
      if (!lo || b > *lo) lo = b;
    } else {
      Int b = floor_div(rest, -a);
      if (!hi || b < *hi) hi = b;
    }
  }
  return closest_to_zero(lo, hi);
}

void substitute(Row& r, std::size_t k, const std::vector<Int>& e, const Int& ec) {
  Int ck = r.a[k];
  if (ck == 0) return;
  r.a[k] = 0;
  for (std::size_t j = 0; j < e.size(); ++j)
    if (e[j] != 0) r.a[j] += ck * e[j];
  r.c += ck * ec;
}

class Omega {
 public:
  explicit Omega(Budget& b) : budget_(b) {}

  std::optional<Values> solve(std::vector<Row> rows, std::size_t n) {
    budget_.tick();
    if (!normalize(rows)) return std::nullopt;

    for (std::size_t i = 0; i < rows.size(); ++i)
      if (rows[i].eq) return eliminate_equality(std::move(rows), i, n);

    // Variables bounded on one side only can always be satisfied last.
    std::vector<std::pair<std::size_t, std::vector<Row>>> dropped;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t j = 0; j < n; ++j) {
        int sign = 0;
        bool mixed = false;
        for (const auto& r : rows) {
          if (r.a[j] == 0) continue;
          int s = r.a[j] > 0 ? 1 : -1;
          if (sign == 0) sign = s;
          else if (s != sign) mixed = true;
        }
        if (sign == 0 || mixed) continue;
        std::vector<Row> keep, gone;
        for (auto& r : rows) (r.a[j] != 0 ? gone : keep).push_back(std::move(r));
        rows = std::move(keep);
        dropped.emplace_back(j, std::move(gone));
        changed = true;
      }
    }

    std::optional<Values> v = rows.empty() ? Values(n, 0) : eliminate_inequality(rows, n);
    if (!v) return std::nullopt;
    for (auto it = dropped.rbegin(); it != dropped.rend(); ++it)
      (*v)[it->first] = pick_value(it->second, it->first, *v);
    return v;
  }

 private:
  // Divides rows by their content, merges parallel inequalities and turns
  // opposite tight pairs into equalities. False when a contradiction shows.
  bool normalize(std::vector<Row>& rows) {
    std::vector<Row> eqs;
    std::map<std::vector<Int>, Int> ges;
    for (auto& r : rows) {
      Int g = 0;
      for (const auto& x : r.a)
        if (x != 0) g = gcd(g, x);
      if (g == 0) {
        if (r.eq ? r.c != 0 : r.c < 0) return false;
        continue;
      }
      if (r.eq) {
        if (mod_floor(r.c, g) != 0) return false;
        if (g != 1) {
          for (auto& x : r.a) x /= g;
          r.c /= g;
        }
        eqs.push_back(std::move(r));
      } else {
        if (g != 1) {
          for (auto& x : r.a) x /= g;
          r.c = floor_div(r.c, g);
        }
        auto [it, fresh] = ges.emplace(std::move(r.a), r.c);
        if (!fresh && r.c < it->second) it->second = r.c;
      }
    }
    rows = std::move(eqs);
    std::vector<const std::vector<Int>*> used;
    for (auto it = ges.begin(); it != ges.end(); ++it) {
      std::vector<Int> neg = it->first;
      for (auto& x : neg) x = -x;
      auto op = ges.find(neg);
      if (op != ges.end()) {
        Int s = it->second + op->second;
        if (s < 0) return false;
        if (s == 0) {
          if (it->first < neg) rows.push_back(Row{it->first, it->second, true});
          continue;
        }
      }
      rows.push_back(Row{it->first, it->second, false});
    }
    budget_.tick(rows.size());
    return true;
  }

  std::optional<Values> eliminate_equality(std::vector<Row> rows, std::size_t i,
                                           std::size_t n) {
    // Equality with the smallest coefficient magnitude gives the shortest
    // reduction chain.
    std::size_t best_row = i, k = n;
    Int best;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].eq) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (rows[r].a[j] == 0) continue;
        Int m = abs(rows[r].a[j]);
        if (k == n || m < best) {
          best = m;
          best_row = r;
          k = j;
        }
      }
    }
    Row eq = rows[best_row];
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best_row));
    const Int ak = eq.a[k];

    if (abs(ak) == 1) {
      // x_k = -ak * (rest)
      std::vector<Int> e(n);
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) e[j] = -ak * eq.a[j];
      Int ec = -ak * eq.c;
      for (auto& r : rows) substitute(r, k, e, ec);
      auto v = solve(std::move(rows), n);
      if (!v) return std::nullopt;
      Int x = ec;
      for (std::size_t j = 0; j < n; ++j)
        if (e[j] != 0) x += e[j] * (*v)[j];
      (*v)[k] = x;
      return v;
    }

    // x_k = t - sum(q_j x_j) - q_c with a fresh column t; the equality's
    // coefficients shrink to the remainders modulo ak.
    const std::size_t t = n;
    std::vector<Int> e(n + 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != k && eq.a[j] != 0) e[j] = -floor_div(eq.a[j], ak);
    e[t] = 1;
    Int ec = -floor_div(eq.c, ak);
    rows.push_back(std::move(eq));
    for (auto& r : rows) {
      r.a.push_back(0);
      substitute(r, k, e, ec);
    }
    auto v = solve(std::move(rows), n + 1);
    if (!v) return std::nullopt;
    Int x = ec;
    for (std::size_t j = 0; j <= n; ++j)
      if (e[j] != 0) x += e[j] * (*v)[j];
    (*v)[k] = x;
    v->pop_back();
    return v;
  }

  std::optional<Values> eliminate_inequality(const std::vector<Row>& rows,
                                             std::size_t n) {
    // Choose the column whose elimination is exact, then the cheapest one.
    std::size_t j = n;
    bool best_exact = false;
    std::size_t best_cost = 0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t lo = 0, hi = 0;
      bool lo_unit = true, hi_unit = true;
      for (const auto& r : rows) {
        if (r.a[c] > 0) {
          ++lo;
          lo_unit = lo_unit && r.a[c] == 1;
        } else if (r.a[c] < 0) {
          ++hi;
          hi_unit = hi_unit && r.a[c] == -1;
        }
      }
      if (lo == 0 && hi == 0) continue;
      bool exact = lo_unit || hi_unit;
      std::size_t cost = lo * hi;
      if (j == n || (exact && !best_exact) ||
          (exact == best_exact && cost < best_cost)) {
        j = c;
        best_exact = exact;
        best_cost = cost;
      }
    }

    std::vector<Row> lowers, uppers, shadow;
    for (const auto& r : rows) {
      if (r.a[j] > 0) lowers.push_back(r);
      else if (r.a[j] < 0) uppers.push_back(r);
      else shadow.push_back(r);
    }
    const std::size_t base = shadow.size();
    Int max_upper = 0;
    for (const auto& u : uppers) max_upper = std::max(max_upper, Int(-u.a[j]));

    auto combine = [&](const Row& l, const Row& u, const Int& slack) {
      const Int a = l.a[j];
      const Int b = -u.a[j];
      Row r{std::vector<Int>(n), b * l.c + a * u.c - slack, false};
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) r.a[c] = b * l.a[c] + a * u.a[c];
      return r;
    };
    budget_.tick(lowers.size() * uppers.size());
    for (const auto& l : lowers)
      for (const auto& u : uppers) shadow.push_back(combine(l, u, 0));

    auto v = solve(shadow, n);
    if (best_exact || !v) {
      if (v) (*v)[j] = pick_value(rows, j, *v);
      return v;
    }

    std::vector<Row> dark(shadow.begin(), shadow.begin() + static_cast<std::ptrdiff_t>(base));
    for (const auto& l : lowers)
      for (const auto& u : uppers) {
        Int a = l.a[j], b = -u.a[j];
        dark.push_back(combine(l, u, (a - 1) * (b - 1)));
      }
    v = solve(std::move(dark), n);
    if (v) {
      (*v)[j] = pick_value(rows, j, *v);
      return v;
    }

    for (const auto& l : lowers) {
      const Int a = l.a[j];
      Int imax = floor_div(max_upper * a - a - max_upper, max_upper);
      for (Int i = 0; i <= imax; ++i) {
        std::vector<Row> split = rows;
        Row e = l;
        e.c -= i;
        e.eq = true;
        split.push_back(std::move(e));
        if (auto s = solve(std::move(split), n)) return s;
      }
    }
    return std::nullopt;
  }

  Budget& budget_;
};

}  // namespace

std::optional<std::map<Var, Int>> solve_conjunction(const std::vector<Constraint>& cs,
                                                    Budget& budget) {
  std::map<Var, std::size_t> col;
  for (const auto& c : cs)
    for (const auto& [v, k] : c.expr.terms()) col.emplace(v, 0);
  std::size_t n = 0;
  for (auto& [v, i] : col) i = n++;

  auto row_of = [&](const LinExpr& e) {
    Row r{std::vector<Int>(n), e.constant(), false};
    for (const auto& [v, k] : e.terms()) r.a[col.at(v)] = k;
    return r;
  };

  std::vector<Row> rows;
  std::size_t aux = n;
  auto add_column = [&] {
    for (auto& r : rows) r.a.push_back(0);
    return aux++;
  };
  for (const auto& c : cs) {
    Row r = row_of(c.expr);
    r.a.resize(aux);
    switch (c.kind) {
      case Constraint::Kind::Ge:
        rows.push_back(std::move(r));
        break;
      case Constraint::Kind::Div: {
        // e = m*q
        std::size_t q = add_column();
        r.a.push_back(-c.modulus);
        r.eq = true;
        rows.push_back(std::move(r));
        (void)q;
        break;
      }
      case Constraint::Kind::NotDiv: {
        // e = m*q + s with 1 <= s <= m-1
        std::size_t q = add_column();
        std::size_t s = add_column();
        r.a.resize(aux);
        r.a[q] = -c.modulus;
        r.a[s] = -1;
        r.eq = true;
        rows.push_back(std::move(r));
        Row lo{std::vector<Int>(aux), -1, false};
        lo.a[s] = 1;
        Row hi{std::vector<Int>(aux), c.modulus - 1, false};
        hi.a[s] = -1;
        rows.push_back(std::move(lo));
        rows.push_back(std::move(hi));
        break;
      }
    }
  }
  for (auto& r : rows) r.a.resize(aux);

  Omega omega(budget);
  auto v = omega.solve(std::move(rows), aux);
  if (!v) return std::nullopt;
  std::map<Var, Int> out;
  for (const auto& [var, i] : col) out.emplace(var, (*v)[i]);
  return out;
}

}  // namespace arrabs::lia::detail
