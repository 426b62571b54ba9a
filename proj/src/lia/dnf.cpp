#include "arrabs/lia/solver.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace arrabs::lia {

namespace {

void canonicalize(Conjunction& c) {
  std::vector<std::pair<std::string, Formula>> keyed;
  keyed.reserve(c.size());
  for (auto& l : c) keyed.emplace_back(to_string(l), std::move(l));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  c.clear();
  for (auto& [k, l] : keyed) c.push_back(std::move(l));
}

// False when the conjunction contains a literal and its complement.
bool merge_into(Conjunction& dst, const Conjunction& src) {
  std::unordered_set<Formula> have(dst.begin(), dst.end());
  for (const auto& l : src) {
    if (have.contains(l)) continue;
    if (have.contains(f_not(l))) return false;
    have.insert(l);
    dst.push_back(l);
  }
  return true;
}

Dnf build(const Formula& f, const Limits& limits) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return {{}};
    case K::False:
      return {};
    case K::Or: {
      Dnf out;
      for (const auto& k : f.children()) {
        Dnf part = build(k, limits);
        out.insert(out.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
        if (out.size() > limits.dnf_cap) throw BudgetExceeded("DNF disjunct cap exceeded");
      }
      return out;
    }
    case K::And: {
      Dnf acc{{}};
      for (const auto& k : f.children()) {
        Dnf part = build(k, limits);
        Dnf next;
        for (const auto& a : acc)
          for (const auto& b : part) {
            Conjunction c = a;
            if (merge_into(c, b)) next.push_back(std::move(c));
            if (next.size() > limits.dnf_cap)
              throw BudgetExceeded("DNF disjunct cap exceeded");
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
    case K::Exists:
    case K::Forall:
      throw std::invalid_argument("to_dnf: quantified formula");
    default:
      return {{f}};
  }
}

}  // namespace

Dnf to_dnf(const Formula& f, const Limits& limits) {
  Dnf d = build(nnf(f), limits);
  std::vector<std::pair<std::vector<std::string>, Conjunction>> keyed;
  std::set<std::vector<std::string>> seen;
  for (auto& c : d) {
    canonicalize(c);
    std::vector<std::string> key;
    for (const auto& l : c) key.push_back(to_string(l));
    if (seen.insert(key).second) keyed.emplace_back(std::move(key), std::move(c));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Dnf out;
  for (auto& [k, c] : keyed) out.push_back(std::move(c));
  return out;
}

Formula from_conjunction(const Conjunction& c) { return f_and(c); }

Formula from_dnf(const Dnf& d) {
  std::vector<Formula> parts;
  for (const auto& c : d) parts.push_back(f_and(c));
  return f_or(std::move(parts));
}

}  // namespace arrabs::lia
