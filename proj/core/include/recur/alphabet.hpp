#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace recur {

using Symbol = std::uint32_t;

/// Ordered set of distinct symbol labels. Copies share storage.
class Alphabet {
 public:
  /// Throws parse on an empty list or duplicate labels.
  explicit Alphabet(std::vector<std::string> labels);

  /// {"0", "1"}.
  static Alphabet binary();
  /// One label per character of `chars`, in order.
  static Alphabet from_chars(std::string_view chars);
  /// Labels "0".."size-1".
  static Alphabet numbered(std::size_t size);

  [[nodiscard]] std::size_t size() const noexcept { return labels_->size(); }
  [[nodiscard]] const std::string& label(Symbol s) const { return (*labels_)[s]; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return *labels_; }
  [[nodiscard]] std::optional<Symbol> find(std::string_view label) const noexcept;
  /// Throws parse for an unknown label.
  [[nodiscard]] Symbol index_of(std::string_view label) const;
  /// Every label is exactly one character, so words may be written bare.
  [[nodiscard]] bool single_char() const noexcept;

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept;

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Throws alphabet_mismatch unless a == b.
void require_same_alphabet(const Alphabet& a, const Alphabet& b, std::string_view context);

/// Splits text into symbol labels: on commas/whitespace when present,
/// otherwise one label per character.
std::vector<std::string> split_labels(std::string_view text);

/// A finite string over an alphabet.
class Word {
 public:
  /// Throws parse if any index is out of range.
  Word(Alphabet alphabet, std::vector<Symbol> symbols);

  /// Parses bare ("ABRA") or separated ("a1,b2") text against an alphabet.
  static Word parse(const Alphabet& alphabet, std::string_view text);

  [[nodiscard]] const Alphabet& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] std::span<const Symbol> symbols() const noexcept { return symbols_; }
  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
  [[nodiscard]] bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }

  /// First min(n, size()) symbols.
  [[nodiscard]] Word prefix(std::size_t n) const;
  /// Bare string when every label is one character, else comma-separated.
  [[nodiscard]] std::string str() const;

  friend bool operator==(const Word& a, const Word& b) noexcept {
    return a.alphabet_ == b.alphabet_ && a.symbols_ == b.symbols_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

/// Alphabet of the sorted distinct labels occurring in the given texts.
Alphabet alphabet_of_texts(std::span<const std::string_view> texts);

}  // namespace recur
