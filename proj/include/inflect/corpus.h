#ifndef INFLECT_CORPUS_H_
#define INFLECT_CORPUS_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace inflect {

// A part of speech plus attribute-value pairs, kept sorted by attribute.
class MorphTag {
 public:
  using Feature = std::pair<std::string, std::string>;

  MorphTag() = default;
  // Throws DomainError on a repeated attribute.
  MorphTag(std::string pos, std::vector<Feature> features);

  const std::string& pos() const { return pos_; }
  const std::vector<Feature>& features() const { return features_; }
  std::optional<std::string> Get(std::string_view attribute) const;

  // True for the `_`/`_` analysis of tokens that carry no annotation.
  bool IsEmpty() const { return pos_ == "_" && features_.empty(); }

  // "POS=NOUN|Case=Nom|Number=Plur".
  std::string ToString() const;
  // Individual symbols: "POS=NOUN", "Case=Nom", "Number=Plur".
  std::vector<std::string> Symbols() const;
  // Columns 4 and 6 of a CoNLL-U token line.
  std::string UposColumn() const { return pos_; }
  std::string FeatsColumn() const;

  friend bool operator==(const MorphTag&, const MorphTag&) = default;
  friend auto operator<=>(const MorphTag&, const MorphTag&) = default;

 private:
  std::string pos_ = "_";
  std::vector<Feature> features_;
};

// Parses the UPOS and FEATS columns. feats is `_` or `Attr=Val|Attr=Val`.
// Throws ParseError (reported at `line`) on a pair without `=`.
MorphTag ParseFeats(std::string_view upos, std::string_view feats, size_t line = 0);
// Inverse of MorphTag::ToString.
MorphTag ParseTagString(std::string_view canonical);

struct Token {
  std::string form;
  std::string lemma;
  std::optional<MorphTag> tag;
  bool is_slot = false;  // MISC column carries Slot=Yes
  std::string misc = "_";
  size_t line = 0;       // 1-based source line, 0 when synthesized
};

struct Sentence {
  std::vector<Token> tokens;

  size_t size() const { return tokens.size(); }
};

using Corpus = std::vector<Sentence>;

// Reads CoNLL-U. Comment lines, multiword ranges (`1-2`) and empty nodes
// (`1.1`) are skipped; CRLF line ends are accepted; strings are NFC
// normalized. A LEMMA of `_` falls back to the FORM. Throws ParseError with
// the line number when a token line does not have ten columns.
Corpus ParseConllu(std::istream& in);
Corpus ParseConlluString(std::string_view text);
Corpus ReadConlluFile(const std::string& path);

// One token line per token, blank line after each sentence.
std::string FormatConllu(const Corpus& corpus);

}  // namespace inflect

#endif  // INFLECT_CORPUS_H_
