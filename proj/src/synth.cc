#include "inflect/synth.h"

#include <array>
#include <map>
#include <set>
#include <vector>

#include "inflect/parameters.h"

namespace inflect {

namespace {

struct NounEntry {
  const char* lemma;
  const char* gender;
};

constexpr std::array<NounEntry, 28> kNouns = {{
    {"gato", "Masc"},   {"perro", "Masc"},  {"libro", "Masc"},  {"niño", "Masc"},
    {"vaso", "Masc"},   {"carro", "Masc"},  {"plato", "Masc"},  {"pájaro", "Masc"},
    {"toro", "Masc"},   {"mono", "Masc"},   {"casa", "Fem"},    {"mesa", "Fem"},
    {"niña", "Fem"},    {"gata", "Fem"},    {"silla", "Fem"},   {"puerta", "Fem"},
    {"vaca", "Fem"},    {"rosa", "Fem"},    {"taza", "Fem"},    {"luna", "Fem"},
    {"flor", "Fem"},    {"papel", "Masc"},  {"árbol", "Masc"},  {"ciudad", "Fem"},
    {"mujer", "Fem"},   {"tren", "Masc"},   {"reloj", "Masc"},  {"pared", "Fem"},
}};

// o-adjectives inflect for gender and number, the rest for number only.
constexpr std::array<const char*, 14> kAdjectives = {
    "rojo", "alto", "nuevo", "bonito", "pequeño", "blanco", "negro", "viejo",
    "grande", "verde", "fuerte", "azul", "feliz", "joven"};

constexpr std::array<const char*, 14> kVerbs = {
    "cantar", "hablar", "caminar", "saltar", "mirar", "bailar", "nadar",
    "cocinar", "trabajar", "comer", "beber", "correr", "ser", "tener"};

constexpr std::array<const char*, 4> kNumerals = {"dos", "tres", "cuatro", "cinco"};

struct Cue {
  const char* lemma;
  const char* tense;
};
constexpr std::array<Cue, 5> kCues = {{
    {"ayer", "Past"}, {"anoche", "Past"}, {"hoy", "Pres"}, {"ahora", "Pres"}, {"siempre", "Pres"}}};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string DropLast(const std::string& s, size_t bytes) { return s.substr(0, s.size() - bytes); }

bool IsVowelFinal(const std::string& s) {
  const char c = s.back();
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::string Pluralize(const std::string& word) {
  if (IsVowelFinal(word)) return word + "s";
  if (EndsWith(word, "z")) return DropLast(word, 1) + "ces";
  if (word == "joven") return "jóvenes";
  return word + "es";
}

// Open-class words: the hand-written entries first, then regular words built
// from syllables by a fixed generator. Sampling is Zipfian over this order,
// so the generated words form a long tail of rare types.
struct Lexicon {
  std::vector<std::pair<std::string, std::string>> nouns;  // lemma, gender
  std::vector<std::string> adjectives;
  std::vector<std::string> verbs;
  std::map<std::string, std::string> noun_gender;
  std::set<std::string> adjective_set;
  std::set<std::string> verb_set;
};

constexpr size_t kGeneratedNouns = 260;
constexpr size_t kGeneratedAdjectives = 80;
constexpr size_t kGeneratedVerbs = 120;

Lexicon BuildLexicon() {
  Lexicon lex;
  std::set<std::string> used;
  for (const NounEntry& n : kNouns) used.insert(n.lemma);
  for (const char* w : kAdjectives) used.insert(w);
  for (const char* w : kVerbs) used.insert(w);
  for (const char* w : kNumerals) used.insert(w);
  for (const Cue& c : kCues) used.insert(c.lemma);
  for (const char* w : {"uno", "mucho", "este"}) used.insert(w);

  Rng rng(0x5EED);
  const std::string consonants = "bdfglmnprstv";
  const std::string vowels = "aeiou";
  auto fresh = [&](const std::string& suffix) {
    while (true) {
      std::string w;
      const size_t syllables = 2 + rng.UniformInt(2);
      for (size_t i = 0; i < syllables; ++i) {
        w += consonants[rng.UniformInt(consonants.size())];
        w += vowels[rng.UniformInt(vowels.size())];
      }
      w += consonants[rng.UniformInt(consonants.size())];
      w += suffix;
      if (used.insert(w).second) return w;
    }
  };
  for (const NounEntry& n : kNouns) lex.nouns.emplace_back(n.lemma, n.gender);
  for (size_t i = 0; i < kGeneratedNouns; ++i) {
    const bool masc = rng.Uniform() < 0.5;
    lex.nouns.emplace_back(fresh(masc ? "o" : "a"), masc ? "Masc" : "Fem");
  }
  lex.adjectives.assign(kAdjectives.begin(), kAdjectives.end());
  for (size_t i = 0; i < kGeneratedAdjectives; ++i) {
    lex.adjectives.push_back(fresh(rng.Uniform() < 0.7 ? "o" : "e"));
  }
  lex.verbs.assign(kVerbs.begin(), kVerbs.end());
  for (size_t i = 0; i < kGeneratedVerbs; ++i) lex.verbs.push_back(fresh(rng.Uniform() < 0.6 ? "ar" : "er"));
  for (const auto& [lemma, gender] : lex.nouns) lex.noun_gender[lemma] = gender;
  lex.adjective_set.insert(lex.adjectives.begin(), lex.adjectives.end());
  lex.verb_set.insert(lex.verbs.begin(), lex.verbs.end());
  return lex;
}

const Lexicon& GetLexicon() {
  static const Lexicon lexicon = BuildLexicon();
  return lexicon;
}

// Index in [0, n) with probability proportional to 1 / (index + 1).
size_t Zipf(Rng& rng, size_t n) {
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += 1.0 / static_cast<double>(i + 1);
  double u = rng.Uniform() * total;
  for (size_t i = 0; i + 1 < n; ++i) {
    u -= 1.0 / static_cast<double>(i + 1);
    if (u < 0.0) return i;
  }
  return n - 1;
}

std::optional<std::string> NounGender(const std::string& lemma) {
  const auto& genders = GetLexicon().noun_gender;
  auto it = genders.find(lemma);
  if (it == genders.end()) return std::nullopt;
  return it->second;
}

template <size_t N>
bool Contains(const std::array<const char*, N>& list, const std::string& word) {
  for (const char* w : list) {
    if (word == w) return true;
  }
  return false;
}

std::optional<std::string> RealizeVerb(const std::string& lemma, const std::string& tense,
                                       const std::string& number) {
  const bool plural = number == "Plur";
  const bool past = tense == "Past";
  if (lemma == "ser") return past ? (plural ? "fueron" : "fue") : (plural ? "son" : "es");
  if (lemma == "tener") return past ? (plural ? "tuvieron" : "tuvo") : (plural ? "tienen" : "tiene");
  if (GetLexicon().verb_set.count(lemma) == 0) return std::nullopt;
  const std::string stem = DropLast(lemma, 2);
  if (EndsWith(lemma, "ar")) {
    return past ? stem + (plural ? "aron" : "ó") : stem + (plural ? "an" : "a");
  }
  return past ? stem + (plural ? "ieron" : "ió") : stem + (plural ? "en" : "e");
}

MorphTag NounTag(const std::string& gender, const std::string& number) {
  return MorphTag("NOUN", {{"Gender", gender}, {"Number", number}});
}

}  // namespace

std::optional<std::string> RealizeSynthetic(const std::string& lemma, const MorphTag& tag) {
  const std::string gender = tag.Get("Gender").value_or("");
  const std::string number = tag.Get("Number").value_or("");
  const bool plural = number == "Plur";
  const std::string& pos = tag.pos();
  if (pos == "NOUN") {
    if (!NounGender(lemma)) return std::nullopt;
    return plural ? Pluralize(lemma) : lemma;
  }
  if (pos == "ADJ") {
    if (GetLexicon().adjective_set.count(lemma) == 0) return std::nullopt;
    if (EndsWith(lemma, "o")) {
      const std::string base = DropLast(lemma, 1) + (gender == "Fem" ? "a" : "o");
      return plural ? base + "s" : base;
    }
    return plural ? Pluralize(lemma) : lemma;
  }
  if (pos == "DET") {
    if (lemma == "uno") return gender == "Fem" ? "una" : "un";
    if (lemma == "mucho") return gender == "Fem" ? "muchas" : "muchos";
    if (lemma == "este") {
      if (plural) return gender == "Fem" ? "estas" : "estos";
      return gender == "Fem" ? "esta" : "este";
    }
    return std::nullopt;
  }
  if (pos == "NUM") return Contains(kNumerals, lemma) ? std::optional(lemma) : std::nullopt;
  if (pos == "VERB") return RealizeVerb(lemma, tag.Get("Tense").value_or(""), number);
  if (pos == "ADV") {
    for (const Cue& c : kCues) {
      if (lemma == c.lemma) return lemma;
    }
  }
  return std::nullopt;
}

namespace {

class SentenceBuilder {
 public:
  SentenceBuilder(Rng& rng, const SynthOptions& options) : rng_(rng), options_(options) {}

  void Add(const std::string& lemma, MorphTag tag) {
    Token t;
    t.lemma = lemma;
    t.form = *RealizeSynthetic(lemma, tag);
    t.tag = std::move(tag);
    if (options_.mark_slots && rng_.Uniform() < 0.5) {
      t.is_slot = true;
      t.misc = "Slot=Yes";
    }
    sentence_.tokens.push_back(std::move(t));
  }

  // Returns the noun phrase's number.
  std::string NounPhrase() {
    const auto& nouns = GetLexicon().nouns;
    const auto& [lemma, gender] = nouns[Zipf(rng_, nouns.size())];
    std::string number;
    const size_t det = rng_.UniformInt(3);
    if (det == 0) {
      number = "Sing";
      Add("uno", MorphTag("DET", {{"Definite", "Ind"}, {"Gender", gender}, {"Number", number},
                                  {"PronType", "Art"}}));
    } else if (det == 1) {
      number = "Plur";
      Add("mucho", MorphTag("DET", {{"Gender", gender}, {"Number", number}, {"PronType", "Ind"}}));
    } else {
      number = "Plur";
      if (rng_.Uniform() < 0.3) {
        Add("este", MorphTag("DET", {{"Gender", gender}, {"Number", number}, {"PronType", "Dem"}}));
      }
      Add(kNumerals[rng_.UniformInt(kNumerals.size())], MorphTag("NUM", {{"NumType", "Card"}}));
    }
    Add(lemma, NounTag(gender, number));
    if (rng_.Uniform() < options_.adjective) {
      const auto& adjectives = GetLexicon().adjectives;
      Add(adjectives[Zipf(rng_, adjectives.size())],
          MorphTag("ADJ", {{"Gender", gender}, {"Number", number}}));
    }
    return number;
  }

  Sentence Build() {
    const bool cue = rng_.Uniform() >= options_.no_tense_cue;
    const Cue& adverb = kCues[rng_.UniformInt(kCues.size())];
    const std::string tense = cue ? adverb.tense : (rng_.Uniform() < 0.5 ? "Past" : "Pres");
    const bool adverb_first = rng_.Uniform() < 0.5;
    if (cue && adverb_first) Add(adverb.lemma, MorphTag("ADV", {}));
    const std::string number = NounPhrase();
    const auto& verbs = GetLexicon().verbs;
    Add(verbs[Zipf(rng_, verbs.size())],
        MorphTag("VERB", {{"Mood", "Ind"}, {"Number", number}, {"Person", "3"}, {"Tense", tense},
                          {"VerbForm", "Fin"}}));
    if (rng_.Uniform() < options_.object) NounPhrase();
    if (cue && !adverb_first) Add(adverb.lemma, MorphTag("ADV", {}));
    return std::move(sentence_);
  }

 private:
  Rng& rng_;
  const SynthOptions& options_;
  Sentence sentence_;
};

}  // namespace

Corpus GenerateSyntheticCorpus(size_t sentences, uint64_t seed, const SynthOptions& options) {
  Rng rng(seed);
  Corpus corpus;
  corpus.reserve(sentences);
  for (size_t s = 0; s < sentences; ++s) corpus.push_back(SentenceBuilder(rng, options).Build());
  return corpus;
}

std::optional<std::string> CheckSyntheticSentence(const Sentence& sentence) {
  std::optional<std::string> cue_tense;
  std::optional<std::string> verb_tense, verb_number, subject_number;
  const auto& tokens = sentence.tokens;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (!t.tag) return "token " + std::to_string(i + 1) + " has no tag";
    const MorphTag& tag = *t.tag;
    const auto form = RealizeSynthetic(t.lemma, tag);
    if (!form || *form != t.form) {
      return "token " + std::to_string(i + 1) + " '" + t.form + "' does not realize " + t.lemma + " " +
             tag.ToString();
    }
    if (tag.pos() == "ADV") {
      for (const Cue& c : kCues) {
        if (t.lemma == c.lemma) cue_tense = c.tense;
      }
    } else if (tag.pos() == "VERB") {
      verb_tense = tag.Get("Tense");
      verb_number = tag.Get("Number");
    } else if (tag.pos() == "NOUN") {
      if (!subject_number) subject_number = tag.Get("Number");
      if (tag.Get("Gender") != NounGender(t.lemma)) return "noun " + t.lemma + " has the wrong gender";
      // Determiners and numerals to the left, an adjective to the right.
      for (size_t j = i; j-- > 0;) {
        const MorphTag& left = *tokens[j].tag;
        if (left.pos() != "DET" && left.pos() != "NUM") break;
        for (const char* attr : {"Gender", "Number"}) {
          if (left.Get(attr) && left.Get(attr) != tag.Get(attr)) {
            return "determiner '" + tokens[j].form + "' disagrees with " + t.form;
          }
        }
        if (left.pos() == "NUM" && tag.Get("Number") != "Plur") return "numeral with a singular noun";
      }
      if (i + 1 < tokens.size() && tokens[i + 1].tag->pos() == "ADJ") {
        const MorphTag& adj = *tokens[i + 1].tag;
        if (adj.Get("Gender") != tag.Get("Gender") || adj.Get("Number") != tag.Get("Number")) {
          return "adjective '" + tokens[i + 1].form + "' disagrees with " + t.form;
        }
      }
    }
  }
  if (!verb_number || !subject_number) return "sentence lacks a subject or verb";
  if (verb_number != subject_number) return "verb disagrees with its subject in number";
  if (cue_tense && verb_tense != cue_tense) return "verb tense contradicts the adverb";
  return std::nullopt;
}

}  // namespace inflect
