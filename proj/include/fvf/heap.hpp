#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fvf/ast.hpp"

namespace fvf {

// Total map from variable names to values; unbound variables read as V{}.
template <class V>
class Store {
 public:
  const V& get(const std::string& x) const {
    static const V kDefault{};
    auto it = entries_.find(x);
    return it == entries_.end() ? kDefault : it->second;
  }
  void set(const std::string& x, V v) { entries_.insert_or_assign(x, std::move(v)); }
  const std::map<std::string, V>& entries() const { return entries_; }

  // Equality as total functions: explicit default bindings don't matter.
  bool operator==(const Store& o) const { return covers(o) && o.covers(*this); }

 private:
  bool covers(const Store& o) const {
    for (const auto& [k, v] : entries_)
      if (!(o.get(k) == v)) return false;
    return true;
  }
  std::map<std::string, V> entries_;
};

template <class V>
struct Chunk {
  Pred pred;
  std::vector<V> args;
  bool operator==(const Chunk&) const = default;
  auto operator<=>(const Chunk& o) const {
    if (auto c = pred <=> o.pred; c != 0) return c;
    return args <=> o.args;
  }
};

// Finite multiset of chunks, iterated in canonical order.
template <class V>
class Heap {
 public:
  using Set = std::multiset<Chunk<V>>;
  using const_iterator = typename Set::const_iterator;

  void add(Chunk<V> c) { chunks_.insert(std::move(c)); }
  void erase(const_iterator it) { chunks_.erase(it); }
  void clear() { chunks_.clear(); }
  bool empty() const { return chunks_.empty(); }
  std::size_t size() const { return chunks_.size(); }
  const_iterator begin() const { return chunks_.begin(); }
  const_iterator end() const { return chunks_.end(); }

  bool operator==(const Heap&) const = default;

 private:
  Set chunks_;
};

// "a |-> b" for points-to, "p(a, b)" otherwise.
template <class V, class F>
std::string chunk_string(const Chunk<V>& c, F show) {
  if (c.pred.is_points_to() && c.args.size() == 2) return show(c.args[0]) + " |-> " + show(c.args[1]);
  std::string out = c.pred.name() + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) out += (i ? ", " : "") + show(c.args[i]);
  return out + ")";
}

// "{[c1, c2]}", or the empty-heap symbol.
template <class V, class F>
std::string heap_string(const Heap<V>& h, F show) {
  if (h.empty()) return "\xF0\x9D\x9F\x8E";  // U+1D7CE
  std::string out = "{[";
  bool first = true;
  for (const auto& c : h) {
    out += (first ? "" : ", ") + chunk_string(c, show);
    first = false;
  }
  return out + "]}";
}

template <class V, class F>
std::string store_string(const Store<V>& s, F show, const char* sep) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : s.entries()) {
    out += (first ? "" : sep) + k + ":" + show(v);
    first = false;
  }
  return out + "}";
}

}  // namespace fvf
