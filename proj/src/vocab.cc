#include "inflect/vocab.h"

#include <algorithm>
#include <set>

#include "inflect/errors.h"
#include "inflect/text.h"

namespace inflect {

SymbolTable::SymbolTable(std::vector<std::string> reserved, std::vector<std::string> symbols,
                         std::optional<std::string> unknown) {
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  for (std::string& s : reserved) {
    if (!index_.count(s)) {
      index_.emplace(s, symbols_.size());
      symbols_.push_back(std::move(s));
    }
  }
  for (std::string& s : symbols) {
    if (!index_.count(s)) {
      index_.emplace(s, symbols_.size());
      symbols_.push_back(std::move(s));
    }
  }
  if (unknown) unknown_ = Find(*unknown);
}

SymbolTable SymbolTable::FromList(std::vector<std::string> symbols,
                                  std::optional<std::string> unknown) {
  SymbolTable table;
  for (std::string& s : symbols) {
    if (table.index_.count(s)) throw CorruptError("duplicate symbol " + s);
    table.index_.emplace(s, table.symbols_.size());
    table.symbols_.push_back(std::move(s));
  }
  if (unknown) table.unknown_ = table.Find(*unknown);
  return table;
}

std::optional<size_t> SymbolTable::Find(const std::string& symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

size_t SymbolTable::Index(const std::string& symbol) const {
  if (auto found = Find(symbol)) return *found;
  if (unknown_) return *unknown_;
  throw DomainError("symbol '" + symbol + "' not in a table without <unk>");
}

std::optional<size_t> Vocab::LabelOf(const MorphTag& tag) const {
  auto index = tags.Find(tag.ToString());
  if (!index || *index == 0) return std::nullopt;
  return *index - 1;
}

MorphTag Vocab::TagOfLabel(size_t label) const { return ParseTagString(tags.Symbol(label + 1)); }

Vocab BuildVocab(const Corpus& corpus) {
  if (corpus.empty()) throw DataError("cannot build vocabularies from an empty corpus");
  std::vector<std::string> words, chars, tags, features;
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) {
      words.push_back(t.lemma);
      words.push_back(t.form);
      for (const std::string* text : {&t.lemma, &t.form}) {
        for (std::string& c : SplitCodePoints(*text)) chars.push_back(std::move(c));
      }
      if (t.tag) {
        tags.push_back(t.tag->ToString());
        for (std::string& f : t.tag->Symbols()) features.push_back(std::move(f));
      }
    }
  }
  Vocab v;
  v.words = SymbolTable({kUnk}, std::move(words), kUnk);
  v.chars = SymbolTable({kPad, kUnk, kBow, kEow}, std::move(chars), kUnk);
  v.tags = SymbolTable({kStartTag}, std::move(tags), std::nullopt);
  v.features = SymbolTable({kUnk}, std::move(features), kUnk);
  return v;
}

}  // namespace inflect
