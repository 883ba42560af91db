#include "inflect/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "inflect/errors.h"
#include "inflect/text.h"

namespace inflect {

MorphTag::MorphTag(std::string pos, std::vector<Feature> features)
    : pos_(std::move(pos)), features_(std::move(features)) {
  std::sort(features_.begin(), features_.end());
  for (size_t i = 1; i < features_.size(); ++i) {
    if (features_[i].first == features_[i - 1].first) {
      throw DomainError("attribute " + features_[i].first + " repeated in tag");
    }
  }
}

std::optional<std::string> MorphTag::Get(std::string_view attribute) const {
  if (attribute == "POS") return pos_;
  for (const auto& [name, value] : features_) {
    if (name == attribute) return value;
  }
  return std::nullopt;
}

std::string MorphTag::ToString() const {
  std::string out = "POS=" + pos_;
  for (const auto& [name, value] : features_) out += "|" + name + "=" + value;
  return out;
}

std::vector<std::string> MorphTag::Symbols() const {
  std::vector<std::string> out{"POS=" + pos_};
  for (const auto& [name, value] : features_) out.push_back(name + "=" + value);
  return out;
}

std::string MorphTag::FeatsColumn() const {
  if (features_.empty()) return "_";
  std::string out;
  for (const auto& [name, value] : features_) {
    if (!out.empty()) out += "|";
    out += name + "=" + value;
  }
  return out;
}

MorphTag ParseFeats(std::string_view upos, std::string_view feats, size_t line) {
  std::vector<MorphTag::Feature> features;
  if (feats != "_" && !feats.empty()) {
    for (const std::string& pair : SplitString(feats, '|')) {
      const size_t eq = pair.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError("malformed feature '" + pair + "'", line);
      }
      features.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
    }
  }
  try {
    return MorphTag(std::string(upos.empty() ? "_" : upos), std::move(features));
  } catch (const DomainError& e) {
    throw ParseError(e.what(), line);
  }
}

MorphTag ParseTagString(std::string_view canonical) {
  std::vector<std::string> parts = SplitString(canonical, '|');
  if (parts.empty() || parts[0].rfind("POS=", 0) != 0) {
    throw ParseError("tag string must start with POS=: " + std::string(canonical), 0);
  }
  std::string pos = parts[0].substr(4);
  std::string feats;
  for (size_t i = 1; i < parts.size(); ++i) {
    if (!feats.empty()) feats += "|";
    feats += parts[i];
  }
  return ParseFeats(pos, feats.empty() ? "_" : feats);
}

namespace {

bool IsRangeOrEmptyNode(std::string_view id) {
  return id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos;
}

bool MiscMarksSlot(std::string_view misc) {
  for (const std::string& item : SplitString(misc, '|')) {
    if (item == "Slot=Yes") return true;
  }
  return false;
}

}  // namespace

Corpus ParseConllu(std::istream& in) {
  Corpus corpus;
  Sentence current;
  std::string raw;
  size_t line_no = 0;
  auto flush = [&] {
    if (!current.tokens.empty()) corpus.push_back(std::move(current));
    current = Sentence{};
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = StripLineEnd(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    std::vector<std::string> cols = SplitString(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no);
    }
    if (IsRangeOrEmptyNode(cols[0])) continue;
    Token token;
    token.form = NormalizeNfc(cols[1]);
    token.lemma = NormalizeNfc(cols[2]);
    if (token.lemma == "_" && token.form != "_") token.lemma = token.form;
    if (token.form.empty() || token.lemma.empty()) {
      throw ParseError("empty FORM or LEMMA", line_no);
    }
    token.tag = ParseFeats(cols[3], cols[5], line_no);
    token.misc = cols[9];
    token.is_slot = MiscMarksSlot(cols[9]);
    token.line = line_no;
    current.tokens.push_back(std::move(token));
  }
  flush();
  return corpus;
}

Corpus ParseConlluString(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseConllu(in);
}

Corpus ReadConlluFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return ParseConllu(in);
}

namespace {

// MISC with the Slot=Yes item matching the token's flag.
std::string MiscColumn(const Token& t) {
  std::string misc;
  if (t.misc != "_") {
    for (const std::string& item : SplitString(t.misc, '|')) {
      if (item.empty() || item == "Slot=Yes") continue;
      misc += (misc.empty() ? "" : "|") + item;
    }
  }
  if (t.is_slot) misc += misc.empty() ? "Slot=Yes" : "|Slot=Yes";
  return misc.empty() ? "_" : misc;
}

}  // namespace

std::string FormatConllu(const Corpus& corpus) {
  std::ostringstream out;
  for (const Sentence& s : corpus) {
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      const Token& t = s.tokens[i];
      const MorphTag tag = t.tag.value_or(MorphTag{});
      out << (i + 1) << '\t' << t.form << '\t' << t.lemma << '\t' << tag.UposColumn() << "\t_\t"
          << tag.FeatsColumn() << "\t_\t_\t_\t" << MiscColumn(t) << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace inflect
