#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace air {

// A set of unique content terms, stored sorted so that iteration order (and
// therefore every downstream ranking, trace, and file) is deterministic.
class TermSet {
 public:
  TermSet() = default;

  explicit TermSet(std::vector<std::string> terms) : terms_(std::move(terms)) {
    std::sort(terms_.begin(), terms_.end());
    terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  }

  static TermSet of(std::initializer_list<const char*> terms) {
    std::vector<std::string> v(terms.begin(), terms.end());
    return TermSet(std::move(v));
  }

  bool contains(std::string_view term) const {
    return std::binary_search(terms_.begin(), terms_.end(), term);
  }

  void insert(std::string term) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) terms_.insert(it, std::move(term));
  }

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  const std::vector<std::string>& items() const { return terms_; }

  TermSet set_union(const TermSet& other) const {
    std::vector<std::string> out;
    out.reserve(terms_.size() + other.terms_.size());
    std::set_union(terms_.begin(), terms_.end(), other.terms_.begin(),
                   other.terms_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  TermSet set_minus(const TermSet& other) const {
    std::vector<std::string> out;
    std::set_difference(terms_.begin(), terms_.end(), other.terms_.begin(),
                        other.terms_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  TermSet set_intersect(const TermSet& other) const {
    std::vector<std::string> out;
    std::set_intersection(terms_.begin(), terms_.end(), other.terms_.begin(),
                          other.terms_.end(), std::back_inserter(out));
    return from_sorted(std::move(out));
  }

  bool is_subset_of(const TermSet& other) const {
    return std::includes(other.terms_.begin(), other.terms_.end(),
                         terms_.begin(), terms_.end());
  }

  bool operator==(const TermSet&) const = default;

 private:
  static TermSet from_sorted(std::vector<std::string> sorted) {
    TermSet s;
    s.terms_ = std::move(sorted);
    return s;
  }

  std::vector<std::string> terms_;
};

}  // namespace air
