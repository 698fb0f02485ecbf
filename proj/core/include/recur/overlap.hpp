#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "recur/alphabet.hpp"
#include "recur/limits.hpp"

namespace recur {

/// fail[i] is the length of the longest proper border of w[0..i].
std::vector<std::size_t> failure_function(std::span<const Symbol> w);

/// Self-overlap lengths of a word, ascending.
struct BorderProfile {
  std::size_t length = 0;
  std::vector<std::size_t> borders;

  [[nodiscard]] bool contains(std::size_t j) const noexcept;
  [[nodiscard]] std::size_t longest() const noexcept { return borders.empty() ? 0 : borders.back(); }
};

BorderProfile border_profile(const Word& w);
BorderProfile border_profile(std::span<const Symbol> w);

/// Lengths j in [1, n-1] where the last j symbols of y equal the first j of x.
struct CrossOverlapProfile {
  std::size_t length = 0;
  std::vector<std::size_t> overlaps;

  [[nodiscard]] bool contains(std::size_t j) const noexcept;
  [[nodiscard]] std::size_t longest() const noexcept {
    return overlaps.empty() ? 0 : overlaps.back();
  }
};

/// Throws length_mismatch or alphabet_mismatch.
CrossOverlapProfile cross_overlaps(const Word& x, const Word& y);
CrossOverlapProfile cross_overlaps(std::span<const Symbol> x, std::span<const Symbol> y);

/// Full-shift shortest path: n minus the longest cross overlap.
std::size_t shortest_path(const Word& x, const Word& y);
std::size_t shortest_path(std::span<const Symbol> x, std::span<const Symbol> y);

/// n minus the longest border.
std::size_t shortest_return(const Word& w);

/// First k >= 1 with stream[k, k+n) == x, if any.
std::optional<std::size_t> waiting_time(const Word& x, const Word& stream);
std::optional<std::size_t> waiting_time(std::span<const Symbol> x, std::span<const Symbol> stream);

/// Support membership test on finite words. Must be consistent: admissible
/// words have admissible prefixes and suffixes.
using AdmissibilityOracle = std::function<bool(std::span<const Symbol>)>;

/// Some gap word of length g with head + gap + tail admissible, found by
/// depth-first search pruned on admissibility of head + partial gap.
/// Throws cap_exceeded when alphabet^g exceeds the cap.
std::optional<std::vector<Symbol>> find_gap_filling(std::span<const Symbol> head,
                                                    std::span<const Symbol> tail, std::size_t g,
                                                    std::size_t alphabet,
                                                    const AdmissibilityOracle& oracle,
                                                    const Limits& limits = {});

/// Smallest k in [1, k_max] for which the cylinder of y and the k-shifted
/// cylinder of x intersect inside the support described by `oracle`.
std::optional<std::size_t> shortest_path_constrained(const Word& x, const Word& y,
                                                     const AdmissibilityOracle& oracle,
                                                     std::size_t k_max, const Limits& limits = {});

}  // namespace recur
