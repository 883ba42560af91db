#ifndef INFLECT_VOCAB_H_
#define INFLECT_VOCAB_H_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "inflect/corpus.h"

namespace inflect {

// Dense symbol <-> index bijection. Reserved symbols come first, in the order
// given; the rest are sorted so the table is reproducible from its symbols.
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(std::vector<std::string> reserved, std::vector<std::string> symbols,
              std::optional<std::string> unknown);
  // Rebuilds a table from a symbol list already in index order.
  static SymbolTable FromList(std::vector<std::string> symbols, std::optional<std::string> unknown);

  size_t size() const { return symbols_.size(); }
  const std::string& Symbol(size_t index) const { return symbols_.at(index); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<size_t> Find(const std::string& symbol) const;
  // Falls back to the unknown symbol; throws DomainError if there is none.
  size_t Index(const std::string& symbol) const;
  std::optional<size_t> unknown() const { return unknown_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) {
    return a.symbols_ == b.symbols_ && a.unknown_ == b.unknown_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, size_t> index_;
  std::optional<size_t> unknown_;
};

inline constexpr const char* kPad = "<pad>";
inline constexpr const char* kUnk = "<unk>";
inline constexpr const char* kBow = "<w>";
inline constexpr const char* kEow = "</w>";
inline constexpr const char* kStartTag = "<s>";

// Every vocabulary the model needs, built from training data only.
struct Vocab {
  SymbolTable words;     // lemma and visible-form types, plus <unk>
  SymbolTable chars;     // <pad> <unk> <w> </w> then characters
  SymbolTable tags;      // <s> (the start label, never predicted) then tags
  SymbolTable features;  // <unk> then "Attr=Val" symbols incl. "POS=..."

  // CRF label for tag-table index i is i - 1.
  size_t NumLabels() const { return tags.size() - 1; }
  std::optional<size_t> LabelOf(const MorphTag& tag) const;
  MorphTag TagOfLabel(size_t label) const;

  friend bool operator==(const Vocab&, const Vocab&) = default;
};

// Throws DataError on an empty corpus.
Vocab BuildVocab(const Corpus& corpus);

}  // namespace inflect

#endif  // INFLECT_VOCAB_H_
