#include "recur/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "recur/error.hpp"

namespace recur {

Alphabet::Alphabet(std::vector<std::string> labels) {
  if (labels.empty()) throw Error(ErrorKind::parse, "alphabet must contain at least one symbol");
  std::set<std::string_view> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw Error(ErrorKind::parse, "alphabet labels must be non-empty");
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::parse, "duplicate alphabet label '" + label + "'");
    }
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

Alphabet Alphabet::binary() { return Alphabet({"0", "1"}); }

Alphabet Alphabet::from_chars(std::string_view chars) {
  std::vector<std::string> labels;
  labels.reserve(chars.size());
  for (char c : chars) labels.emplace_back(1, c);
  return Alphabet(std::move(labels));
}

Alphabet Alphabet::numbered(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 0; i < size; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(labels));
}

std::optional<Symbol> Alphabet::find(std::string_view label) const noexcept {
  const auto& l = *labels_;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i] == label) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

Symbol Alphabet::index_of(std::string_view label) const {
  if (auto s = find(label)) return *s;
  throw Error(ErrorKind::parse, "symbol '" + std::string(label) + "' is not in the alphabet");
}

bool Alphabet::single_char() const noexcept {
  return std::all_of(labels_->begin(), labels_->end(),
                     [](const std::string& l) { return l.size() == 1; });
}

bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
  return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b, std::string_view context) {
  if (!(a == b)) {
    throw Error(ErrorKind::alphabet_mismatch,
                std::string(context) + ": operands are defined over different alphabets");
  }
}

std::vector<std::string> split_labels(std::string_view text) {
  const bool separated = text.find_first_of(", \t\r\n") != std::string_view::npos;
  std::vector<std::string> labels;
  if (!separated) {
    for (char c : text) labels.emplace_back(1, c);
    return labels;
  }
  std::string current;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) labels.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) labels.push_back(std::move(current));
  return labels;
}

Word::Word(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
  for (Symbol s : symbols_) {
    if (s >= alphabet_.size()) {
      throw Error(ErrorKind::parse, "symbol index " + std::to_string(s) +
                                        " out of range for alphabet of size " +
                                        std::to_string(alphabet_.size()));
    }
  }
}

Word Word::parse(const Alphabet& alphabet, std::string_view text) {
  std::vector<Symbol> symbols;
  for (const auto& label : split_labels(text)) symbols.push_back(alphabet.index_of(label));
  return Word(alphabet, std::move(symbols));
}

Word Word::prefix(std::size_t n) const {
  const auto len = std::min(n, symbols_.size());
  return Word(alphabet_, std::vector<Symbol>(symbols_.begin(), symbols_.begin() + len));
}

std::string Word::str() const {
  std::string out;
  const bool bare = alphabet_.single_char();
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!bare && i > 0) out.push_back(',');
    out += alphabet_.label(symbols_[i]);
  }
  return out;
}

Alphabet alphabet_of_texts(std::span<const std::string_view> texts) {
  std::set<std::string> labels;
  for (auto text : texts) {
    for (auto& label : split_labels(text)) labels.insert(std::move(label));
  }
  return Alphabet(std::vector<std::string>(labels.begin(), labels.end()));
}

}  // namespace recur
