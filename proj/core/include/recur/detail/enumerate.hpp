#pragma once

// Depth-first enumeration of words, partitioned into prefix chunks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "recur/alphabet.hpp"
#include "recur/limits.hpp"
#include "recur/parallel.hpp"

namespace recur::detail {

/// Chunk layout for words up to `max_depth`: chunks are the alphabet^depth
/// prefixes of length `depth`, in lexicographic order.
struct ChunkLayout {
  std::size_t depth = 0;
  std::uint64_t count = 1;
};

inline ChunkLayout chunk_layout(std::size_t alphabet, std::size_t max_depth) {
  constexpr std::uint64_t kTargetChunks = 64;
  ChunkLayout layout;
  while (alphabet > 1 && layout.count < kTargetChunks && layout.depth < max_depth) {
    layout.count *= alphabet;
    ++layout.depth;
  }
  return layout;
}

// Visitor requirements:
//   bool push(Symbol)        extend the word; false prunes the subtree
//   void pop()               undo the last push (called even after a prune)
//   void node(std::span<const Symbol> word)
//                            every kept word of length 1..max_depth
template <class Visitor>
void extend_words(std::size_t alphabet, std::size_t max_depth, std::vector<Symbol>& word,
                  Visitor& visitor) {
  if (word.size() == max_depth) return;
  for (Symbol s = 0; s < alphabet; ++s) {
    word.push_back(s);
    if (visitor.push(s)) {
      visitor.node(std::span<const Symbol>(word));
      extend_words(alphabet, max_depth, word, visitor);
    }
    visitor.pop();
    word.pop_back();
  }
}

/// Visits the subtree of one chunk. A word shorter than the chunk depth is
/// visited by the chunk whose remaining prefix digits are all zero, so every
/// word is visited exactly once across chunks.
template <class Visitor>
void walk_chunk(std::size_t alphabet, std::size_t max_depth, const ChunkLayout& layout,
                std::uint64_t chunk, Visitor& visitor) {
  std::vector<Symbol> digits(layout.depth);
  for (std::size_t d = layout.depth; d-- > 0;) {
    digits[d] = static_cast<Symbol>(chunk % alphabet);
    chunk /= alphabet;
  }
  std::vector<Symbol> word;
  word.reserve(max_depth);
  std::size_t pushed = 0;
  bool kept = true;
  for (std::size_t d = 0; d < layout.depth; ++d) {
    word.push_back(digits[d]);
    ++pushed;
    if (!visitor.push(digits[d])) {
      kept = false;
      break;
    }
    bool trailing_zero = true;
    for (std::size_t e = d + 1; e < layout.depth; ++e) trailing_zero = trailing_zero && digits[e] == 0;
    if (trailing_zero) visitor.node(std::span<const Symbol>(word));
  }
  if (kept) extend_words(alphabet, max_depth, word, visitor);
  for (std::size_t d = 0; d < pushed; ++d) visitor.pop();
}

/// Walks all words of length 1..max_depth, one visitor per chunk, and
/// returns the visitors in chunk order for a fixed-order reduction.
template <class MakeVisitor>
auto walk_words(std::size_t alphabet, std::size_t max_depth, const Limits& limits,
                MakeVisitor&& make) {
  const ChunkLayout layout = chunk_layout(alphabet, max_depth);
  using Visitor = decltype(make());
  std::vector<Visitor> visitors;
  visitors.reserve(layout.count);
  for (std::uint64_t c = 0; c < layout.count; ++c) visitors.push_back(make());
  for_each_chunk(layout.count, limits.workers, [&](std::size_t c) {
    walk_chunk(alphabet, max_depth, layout, c, visitors[c]);
  });
  return visitors;
}

}  // namespace recur::detail
