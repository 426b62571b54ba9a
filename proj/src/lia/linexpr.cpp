#include "arrabs/lia/linexpr.hpp"

#include <algorithm>
#include <sstream>

namespace arrabs::lia {

LinExpr LinExpr::of(Var v, Int coeff) {
  LinExpr e;
  e.add_term(v, coeff);
  return e;
}

Int LinExpr::coeff(Var v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Term& t, Var key) { return t.first < key; });
  if (it != terms_.end() && it->first == v) return it->second;
  return 0;
}

bool LinExpr::contains(Var v) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Term& t, Var key) { return t.first < key; });
  return it != terms_.end() && it->first == v;
}

Int LinExpr::content() const {
  Int g = 0;
  for (const auto& [v, c] : terms_) {
    g = gcd(g, c);
    if (g == 1) break;
  }
  return g;
}

void LinExpr::add_term(Var v, const Int& c) {
  if (c == 0) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Term& t, Var key) { return t.first < key; });
  if (it != terms_.end() && it->first == v) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{v, c});
  }
}

LinExpr LinExpr::operator-() const {
  LinExpr r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  r.constant_ = -r.constant_;
  return r;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first < a->first) {
      merged.push_back(*b++);
    } else {
      Int c = a->second + b->second;
      if (c != 0) merged.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  constant_ += o.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) { return *this += -o; }

LinExpr& LinExpr::operator*=(const Int& k) {
  if (k == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& t : terms_) t.second *= k;
  constant_ *= k;
  return *this;
}

LinExpr LinExpr::substitute(Var v, const LinExpr& e) const {
  Int c = coeff(v);
  if (c == 0) return *this;
  LinExpr r = *this;
  r.add_term(v, -c);
  r += e * c;
  return r;
}

LinExpr LinExpr::exact_div(const Int& d) const {
  LinExpr r = *this;
  for (auto& t : r.terms_) t.second /= d;
  r.constant_ /= d;
  return r;
}

Int LinExpr::evaluate(const std::function<Int(Var)>& value) const {
  Int r = constant_;
  for (const auto& [v, c] : terms_) r += c * value(v);
  return r;
}

std::strong_ordering operator<=>(const LinExpr& a, const LinExpr& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].first <=> b.terms_[i].first; c != 0) return c;
    if (a.terms_[i].second != b.terms_[i].second)
      return a.terms_[i].second < b.terms_[i].second
                 ? std::strong_ordering::less
                 : std::strong_ordering::greater;
  }
  if (a.terms_.size() != b.terms_.size())
    return a.terms_.size() <=> b.terms_.size();
  if (a.constant_ == b.constant_) return std::strong_ordering::equal;
  return a.constant_ < b.constant_ ? std::strong_ordering::less
                                   : std::strong_ordering::greater;
}

std::size_t LinExpr::hash() const {
  auto reduce = [](const Int& c) {
    return static_cast<std::size_t>(
        Int(c % 1000000007).convert_to<long long>());
  };
  std::size_t h = reduce(constant_);
  for (const auto& [v, c] : terms_) {
    h = h * 1000003u ^ v.id();
    h = h * 1000003u ^ reduce(c);
  }
  return h;
}

std::string to_string(const LinExpr& e) {
  auto terms = e.terms();
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return a.first.name() < b.first.name();
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : terms) {
    Int mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag << "*";
    os << v.name();
    first = false;
  }
  const Int& k = e.constant();
  if (first) {
    os << k;
  } else if (k != 0) {
    os << (k < 0 ? " - " : " + ") << abs(k);
  }
  return os.str();
}

}  // namespace arrabs::lia
