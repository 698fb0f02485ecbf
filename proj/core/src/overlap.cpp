#include "recur/overlap.hpp"

#include <algorithm>

#include "recur/error.hpp"

namespace recur {

namespace {

void require_equal_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::length_mismatch, std::string(what) + ": lengths differ (" +
                                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

std::vector<std::size_t> chain_from(std::size_t start, std::span<const std::size_t> fail) {
  std::vector<std::size_t> out;
  for (std::size_t j = start; j > 0; j = fail[j - 1]) out.push_back(j);
  std::reverse(out.begin(), out.end());
  return out;
}

/// Longest suffix of `text` that is a proper prefix of `pattern` (length < n).
std::size_t longest_overlap(std::span<const Symbol> pattern, std::span<const std::size_t> fail,
                            std::span<const Symbol> text) {
  const std::size_t n = pattern.size();
  std::size_t q = 0;
  for (Symbol c : text) {
    if (q == n) q = fail[n - 1];
    while (q > 0 && pattern[q] != c) q = fail[q - 1];
    if (pattern[q] == c) ++q;
  }
  return q == n ? fail[n - 1] : q;
}

}  // namespace

std::vector<std::size_t> failure_function(std::span<const Symbol> w) {
  std::vector<std::size_t> fail(w.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k - 1];
    if (w[i] == w[k]) ++k;
    fail[i] = k;
  }
  return fail;
}

bool BorderProfile::contains(std::size_t j) const noexcept {
  return std::binary_search(borders.begin(), borders.end(), j);
}

bool CrossOverlapProfile::contains(std::size_t j) const noexcept {
  return std::binary_search(overlaps.begin(), overlaps.end(), j);
}

BorderProfile border_profile(std::span<const Symbol> w) {
  BorderProfile out;
  out.length = w.size();
  if (w.empty()) return out;
  const auto fail = failure_function(w);
  out.borders = chain_from(fail.back(), fail);
  return out;
}

BorderProfile border_profile(const Word& w) { return border_profile(w.symbols()); }

CrossOverlapProfile cross_overlaps(std::span<const Symbol> x, std::span<const Symbol> y) {
  require_equal_length(x.size(), y.size(), "cross_overlaps");
  CrossOverlapProfile out;
  out.length = x.size();
  if (x.empty()) return out;
  const auto fail = failure_function(x);
  out.overlaps = chain_from(longest_overlap(x, fail, y), fail);
  return out;
}

CrossOverlapProfile cross_overlaps(const Word& x, const Word& y) {
  require_same_alphabet(x.alphabet(), y.alphabet(), "cross_overlaps");
  return cross_overlaps(x.symbols(), y.symbols());
}

std::size_t shortest_path(std::span<const Symbol> x, std::span<const Symbol> y) {
  require_equal_length(x.size(), y.size(), "shortest_path");
  if (x.empty()) throw Error(ErrorKind::usage, "shortest_path: words must be non-empty");
  const auto fail = failure_function(x);
  return x.size() - longest_overlap(x, fail, y);
}

std::size_t shortest_path(const Word& x, const Word& y) {
  require_same_alphabet(x.alphabet(), y.alphabet(), "shortest_path");
  return shortest_path(x.symbols(), y.symbols());
}

std::size_t shortest_return(const Word& w) {
  if (w.empty()) throw Error(ErrorKind::usage, "shortest_return: word must be non-empty");
  return w.size() - border_profile(w).longest();
}

std::optional<std::size_t> waiting_time(std::span<const Symbol> x, std::span<const Symbol> stream) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorKind::usage, "waiting_time: pattern must be non-empty");
  if (stream.size() < n) {
    throw Error(ErrorKind::length_mismatch, "waiting_time: stream shorter than pattern");
  }
  const auto fail = failure_function(x);
  std::size_t q = 0;
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (q == n) q = fail[n - 1];
    while (q > 0 && x[q] != stream[i]) q = fail[q - 1];
    if (x[q] == stream[i]) ++q;
    if (q == n) return i + 1 - n;
  }
  return std::nullopt;
}

std::optional<std::size_t> waiting_time(const Word& x, const Word& stream) {
  require_same_alphabet(x.alphabet(), stream.alphabet(), "waiting_time");
  return waiting_time(x.symbols(), stream.symbols());
}

std::optional<std::vector<Symbol>> find_gap_filling(std::span<const Symbol> head,
                                                    std::span<const Symbol> tail, std::size_t g,
                                                    std::size_t alphabet,
                                                    const AdmissibilityOracle& oracle,
                                                    const Limits& limits) {
  checked_word_count(alphabet, g, limits, "gap enumeration");
  std::vector<Symbol> word(head.begin(), head.end());
  if (!oracle(word)) return std::nullopt;
  auto search = [&](auto&& self, std::size_t left) -> bool {
    if (left == 0) {
      const std::size_t mark = word.size();
      word.insert(word.end(), tail.begin(), tail.end());
      const bool ok = oracle(word);
      word.resize(mark);
      return ok;
    }
    for (Symbol a = 0; a < alphabet; ++a) {
      word.push_back(a);
      if (oracle(word) && self(self, left - 1)) return true;
      word.pop_back();
    }
    return false;
  };
  if (!search(search, g)) return std::nullopt;
  return std::vector<Symbol>(word.begin() + static_cast<std::ptrdiff_t>(head.size()), word.end());
}

std::optional<std::size_t> shortest_path_constrained(const Word& x, const Word& y,
                                                     const AdmissibilityOracle& oracle,
                                                     std::size_t k_max, const Limits& limits) {
  require_same_alphabet(x.alphabet(), y.alphabet(), "shortest_path_constrained");
  require_equal_length(x.size(), y.size(), "shortest_path_constrained");
  const std::size_t n = x.size();
  if (n == 0) throw Error(ErrorKind::usage, "shortest_path_constrained: words must be non-empty");
  const auto xs = x.symbols();
  const auto ys = y.symbols();
  std::vector<Symbol> fused;
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (k < n) {
      if (!std::equal(ys.begin() + static_cast<std::ptrdiff_t>(k), ys.end(), xs.begin())) continue;
      fused.assign(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(k));
      fused.insert(fused.end(), xs.begin(), xs.end());
      if (oracle(fused)) return k;
    } else if (find_gap_filling(ys, xs, k - n, x.alphabet().size(), oracle, limits)) {
      return k;
    }
  }
  return std::nullopt;
}

}  // namespace recur
