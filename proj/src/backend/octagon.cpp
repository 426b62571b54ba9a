#include "arrabs/backend/octagon.hpp"

#include <algorithm>

namespace arrabs::backend {

namespace {

using Bound = Octagon::Bound;
constexpr Bound kInf = Octagon::kInf;
const Int kLimit = Int(1) << 50;

Bound add(Bound a, Bound b) { return a >= kInf || b >= kInf ? kInf : a + b; }

std::optional<Bound> to_bound(const Int& v) {
  if (v > kLimit || v < -kLimit) return std::nullopt;
  return static_cast<Bound>(v);
}

Bound floor_half(Bound c) { return c >= 0 ? c / 2 : -((-c + 1) / 2); }

std::size_t pos(std::size_t v, int sign) { return sign > 0 ? 2 * v : 2 * v + 1; }

}  // namespace

Octagon Octagon::top(std::size_t n) {
  Octagon o;
  o.n_ = n;
  o.m_.assign(4 * n * n, kInf);
  for (std::size_t p = 0; p < 2 * n; ++p) o.ref(p, p) = 0;
  return o;
}

Octagon Octagon::bottom(std::size_t n) {
  Octagon o = top(n);
  o.bottom_ = true;
  return o;
}

void Octagon::make_bottom() {
  bottom_ = true;
  std::fill(m_.begin(), m_.end(), kInf);
  for (std::size_t p = 0; p < 2 * n_; ++p) ref(p, p) = 0;
}

bool Octagon::set_min(std::size_t p, std::size_t q, Bound c) {
  bool changed = false;
  if (c < at(p, q)) {
    ref(p, q) = c;
    changed = true;
  }
  std::size_t p2 = q ^ 1, q2 = p ^ 1;
  if (c < at(p2, q2)) {
    ref(p2, q2) = c;
    changed = true;
  }
  return changed;
}

void Octagon::close() {
  if (bottom_) return;
  const std::size_t d = 2 * n_;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i) {
      Bound ik = at(i, k);
      if (ik >= kInf) continue;
      for (std::size_t j = 0; j < d; ++j) {
        Bound v = add(ik, at(k, j));
        if (v < at(i, j)) ref(i, j) = v;
      }
    }
  for (std::size_t i = 0; i < d; ++i)
    if (at(i, i) < 0) return make_bottom();
  for (std::size_t i = 0; i < d; ++i) {
    Bound& u = ref(i, i ^ 1);
    if (u < kInf) u = 2 * floor_half(u);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Bound a = at(i, i ^ 1), b = at(j ^ 1, j);
      if (a >= kInf || b >= kInf) continue;
      Bound v = floor_half(a + b);
      if (v < at(i, j)) ref(i, j) = v;
    }
  for (std::size_t i = 0; i < d; ++i) {
    if (at(i, i) < 0) return make_bottom();
    ref(i, i) = 0;
  }
}

void Octagon::forget(std::size_t v) {
  if (bottom_) return;
  for (std::size_t p : {2 * v, 2 * v + 1})
    for (std::size_t q = 0; q < 2 * n_; ++q) {
      ref(p, q) = p == q ? 0 : kInf;
      ref(q, p) = p == q ? 0 : kInf;
    }
}

void Octagon::add_octagonal(const OctConstraint& c) {
  if (bottom_) return;
  auto bound = to_bound(c.bound);
  if (!bound) return;
  if (c.b == 0 || (c.i == c.j && c.a == c.b)) {
    Bound k = c.b == 0 ? 2 * *bound : 2 * floor_half(*bound);
    std::size_t p = pos(c.i, c.a);
    if (!set_min(p, p ^ 1, k)) return;
  } else if (c.i == c.j) {
    if (*bound < 0) return make_bottom();
    return;
  } else {
    std::size_t p = pos(c.i, c.a);
    std::size_t q = pos(c.j, -c.b);
    if (!set_min(p, q, *bound)) return;
  }
  close();
}

std::optional<Int> Octagon::upper(std::size_t v) const {
  Bound b = at(2 * v, 2 * v + 1);
  if (b >= kInf) return std::nullopt;
  return Int(floor_half(b));
}

std::optional<Int> Octagon::lower(std::size_t v) const {
  Bound b = at(2 * v + 1, 2 * v);
  if (b >= kInf) return std::nullopt;
  return Int(-floor_half(b));
}

std::pair<std::optional<Int>, std::optional<Int>> Octagon::range(const Linear& e) const {
  std::vector<std::pair<std::size_t, Int>> t;
  for (const auto& [v, c] : e.terms)
    if (c != 0) t.emplace_back(v, c);
  if (t.size() == 2 && lia::abs(t[0].second) == 1 && lia::abs(t[1].second) == 1 && t[0].first != t[1].first) {
    int a = t[0].second > 0 ? 1 : -1, b = t[1].second > 0 ? 1 : -1;
    // a*x + b*y = V_p - V_q
    std::size_t p = pos(t[0].first, a), q = pos(t[1].first, -b);
    Bound hi = at(p, q), lo = at(q, p);
    std::optional<Int> h, l;
    if (hi < kInf) h = Int(hi) + e.constant;
    if (lo < kInf) l = Int(-lo) + e.constant;
    return {l, h};
  }
  std::optional<Int> lo = e.constant, hi = e.constant;
  for (const auto& [v, c] : t) {
    auto l = lower(v), u = upper(v);
    if (c > 0) {
      lo = lo && l ? std::optional<Int>(*lo + c * *l) : std::nullopt;
      hi = hi && u ? std::optional<Int>(*hi + c * *u) : std::nullopt;
    } else {
      lo = lo && u ? std::optional<Int>(*lo + c * *u) : std::nullopt;
      hi = hi && l ? std::optional<Int>(*hi + c * *l) : std::nullopt;
    }
  }
  return {lo, hi};
}

void Octagon::add_constraint(const Linear& e) {
  if (bottom_) return;
  std::vector<std::pair<std::size_t, Int>> t;
  for (const auto& [v, c] : e.terms) {
    if (c == 0) continue;
    auto it = std::find_if(t.begin(), t.end(), [&](const auto& x) { return x.first == v; });
    if (it != t.end()) {
      it->second += c;
    } else {
      t.emplace_back(v, c);
    }
  }
  t.erase(std::remove_if(t.begin(), t.end(), [](const auto& x) { return x.second == 0; }), t.end());
  // e >= 0 is -sum(c v) <= constant
  if (t.empty()) {
    if (e.constant < 0) make_bottom();
    return;
  }
  bool unit = std::all_of(t.begin(), t.end(), [](const auto& x) { return lia::abs(x.second) == 1; });
  if (unit && t.size() <= 2) {
    OctConstraint c;
    c.i = t[0].first;
    c.a = t[0].second > 0 ? -1 : 1;
    if (t.size() == 2) {
      c.j = t[1].first;
      c.b = t[1].second > 0 ? -1 : 1;
    }
    c.bound = e.constant;
    add_octagonal(c);
    return;
  }
  if (t.size() == 1) {
    auto [v, c] = t[0];
    if (c > 0) {
      add_octagonal({v, -1, 0, 0, lia::floor_div(e.constant, c)});
    } else {
      add_octagonal({v, 1, 0, 0, lia::floor_div(e.constant, -c)});
    }
    return;
  }
  // max of c*v over the current state
  auto term_max = [&](std::size_t k) -> std::optional<Int> {
    auto [v, c] = t[k];
    auto b = c > 0 ? upper(v) : lower(v);
    if (!b) return std::nullopt;
    return c * *b;
  };
  std::vector<std::optional<Int>> mx(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) mx[k] = term_max(k);
  auto rest = [&](std::size_t skip1, std::size_t skip2) -> std::optional<Int> {
    Int s = e.constant;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k == skip1 || k == skip2) continue;
      if (!mx[k]) return std::nullopt;
      s += *mx[k];
    }
    return s;
  };
  std::vector<OctConstraint> found;
  for (std::size_t k = 0; k < t.size(); ++k) {
    auto r = rest(k, k);
    if (!r) continue;
    // c*v + r >= 0
    auto [v, c] = t[k];
    if (c > 0) {
      found.push_back({v, -1, 0, 0, lia::floor_div(*r, c)});
    } else {
      found.push_back({v, 1, 0, 0, lia::floor_div(*r, -c)});
    }
  }
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t l = k + 1; l < t.size(); ++l) {
      if (lia::abs(t[k].second) != 1 || lia::abs(t[l].second) != 1) continue;
      auto r = rest(k, l);
      if (!r) continue;
      found.push_back({t[k].first, t[k].second > 0 ? -1 : 1, t[l].first, t[l].second > 0 ? -1 : 1, *r});
    }
  for (const auto& c : found) {
    add_octagonal(c);
    if (bottom_) return;
  }
}

void Octagon::assign(std::size_t v, const Linear& e) {
  if (bottom_) return;
  Int self = 0;
  Linear rest;
  rest.constant = e.constant;
  for (const auto& [x, c] : e.terms) {
    if (c == 0) continue;
    if (x == v) {
      self += c;
    } else {
      rest.terms.emplace_back(x, c);
    }
  }
  if (self == 1 && rest.terms.empty()) {
    auto shift = to_bound(e.constant);
    if (!shift) return forget(v);
    Bound s = *shift;
    for (std::size_t q = 0; q < 2 * n_; ++q) {
      if (at(2 * v, q) < kInf) ref(2 * v, q) += s;
      if (at(2 * v + 1, q) < kInf) ref(2 * v + 1, q) -= s;
    }
    for (std::size_t p = 0; p < 2 * n_; ++p) {
      if (at(p, 2 * v) < kInf) ref(p, 2 * v) -= s;
      if (at(p, 2 * v + 1) < kInf) ref(p, 2 * v + 1) += s;
    }
    return;
  }
  std::vector<OctConstraint> found;
  auto record = [&](std::size_t j, int b, const std::pair<std::optional<Int>, std::optional<Int>>& r) {
    // v + b*y in [lo, hi]
    if (r.second) found.push_back({v, 1, j, b, *r.second});
    if (r.first) found.push_back({v, -1, j, -b, -*r.first});
  };
  record(0, 0, range(e));
  for (std::size_t y = 0; y < n_; ++y) {
    if (y == v) continue;
    for (int b : {1, -1}) {
      // v' + b*y = e + b*y
      Linear shifted = e;
      shifted.terms.emplace_back(y, Int(b));
      Linear norm;
      norm.constant = shifted.constant;
      for (const auto& [x, c] : shifted.terms) {
        auto it = std::find_if(norm.terms.begin(), norm.terms.end(), [&](const auto& z) { return z.first == x; });
        if (it != norm.terms.end()) {
          it->second += c;
        } else {
          norm.terms.emplace_back(x, c);
        }
      }
      norm.terms.erase(std::remove_if(norm.terms.begin(), norm.terms.end(),
                                      [](const auto& z) { return z.second == 0; }),
                       norm.terms.end());
      record(y, b, range(norm));
    }
  }
  forget(v);
  for (auto& c : found) {
    if (c.b == 0) c.j = 0;
    if (!to_bound(c.bound)) continue;
    std::size_t p = pos(c.i, c.a);
    if (c.b == 0) {
      set_min(p, p ^ 1, 2 * static_cast<Bound>(c.bound));
    } else {
      set_min(p, pos(c.j, -c.b), static_cast<Bound>(c.bound));
    }
  }
  close();
}

std::vector<OctConstraint> Octagon::constraints() const {
  std::vector<OctConstraint> out;
  if (bottom_) return out;
  const std::size_t d = 2 * n_;
  std::vector<char> keep(d * d, 0);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q)
      if (p != q && at(p, q) < kInf && std::make_pair(p, q) <= std::make_pair(q ^ 1, p ^ 1)) keep[p * d + q] = 1;
  auto kept = [&](std::size_t p, std::size_t q) {
    return keep[p * d + q] || keep[(q ^ 1) * d + (p ^ 1)];
  };
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      if (!keep[p * d + q]) continue;
      for (std::size_t k = 0; k < d; ++k) {
        if (k == p || k == q || !kept(p, k) || !kept(k, q)) continue;
        if (add(at(p, k), at(k, q)) <= at(p, q)) {
          keep[p * d + q] = 0;
          break;
        }
      }
    }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q < d; ++q) {
      if (!keep[p * d + q]) continue;
      OctConstraint c;
      c.i = p / 2;
      c.a = p % 2 == 0 ? 1 : -1;
      if (q == (p ^ 1)) {
        c.bound = Int(floor_half(at(p, q)));
      } else {
        c.j = q / 2;
        c.b = q % 2 == 0 ? -1 : 1;
        c.bound = Int(at(p, q));
      }
      out.push_back(c);
    }
  return out;
}

Octagon join(const Octagon& a, const Octagon& b) {
  if (a.bottom_) return b;
  if (b.bottom_) return a;
  Octagon r = a;
  for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = std::max(a.m_[k], b.m_[k]);
  return r;
}

Octagon meet(const Octagon& a, const Octagon& b) {
  if (a.bottom_) return a;
  if (b.bottom_) return b;
  Octagon r = a;
  for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = std::min(a.m_[k], b.m_[k]);
  r.close();
  return r;
}

Octagon widen(const Octagon& a, const Octagon& b) {
  if (a.bottom_) return b;
  if (b.bottom_) return a;
  Octagon r = a;
  for (std::size_t k = 0; k < r.m_.size(); ++k) r.m_[k] = b.m_[k] <= a.m_[k] ? a.m_[k] : kInf;
  return r;
}

bool leq(const Octagon& a, const Octagon& b) {
  if (a.bottom_) return true;
  if (b.bottom_) return false;
  for (std::size_t k = 0; k < a.m_.size(); ++k)
    if (a.m_[k] > b.m_[k]) return false;
  return true;
}

bool operator==(const Octagon& a, const Octagon& b) {
  if (a.bottom_ || b.bottom_) return a.bottom_ == b.bottom_;
  return a.n_ == b.n_ && a.m_ == b.m_;
}

std::string to_string(const OctConstraint& c, const std::vector<std::string>& names) {
  const std::string& x = names[c.i];
  if (c.b == 0) {
    if (c.a > 0) return x + " <= " + lia::to_string(c.bound);
    return x + " >= " + lia::to_string(-c.bound);
  }
  const std::string& y = names[c.j];
  if (c.a > 0 && c.b < 0) return x + " - " + y + " <= " + lia::to_string(c.bound);
  if (c.a < 0 && c.b > 0) return y + " - " + x + " <= " + lia::to_string(c.bound);
  if (c.a > 0) return x + " + " + y + " <= " + lia::to_string(c.bound);
  return x + " + " + y + " >= " + lia::to_string(-c.bound);
}

}  // namespace arrabs::backend
