#include <doctest.h>

#include <set>
#include <sstream>

#include "inflect/corpus.h"
#include "inflect/embeddings.h"
#include "inflect/errors.h"
#include "inflect/parameters.h"
#include "inflect/synth.h"
#include "inflect/task.h"
#include "inflect/text.h"
#include "inflect/vocab.h"

namespace inflect {
namespace {

std::string Row(const std::string& id, const std::string& form, const std::string& lemma,
                const std::string& upos, const std::string& feats, const std::string& misc = "_") {
  return id + "\t" + form + "\t" + lemma + "\t" + upos + "\t_\t" + feats + "\t_\t_\t_\t" + misc + "\n";
}

const char* kTwoCats =
    "# text = two cats were sitting\n"
    "1\ttwo\ttwo\tNUM\t_\t_\t0\troot\t_\t_\n"
    "2\tcats\tcat\tNOUN\t_\tNumber=Plur\t1\tdep\t_\t_\n"
    "3\twere\tbe\tAUX\t_\tMood=Ind|Tense=Past\t1\tdep\t_\t_\n"
    "4\tsitting\tsit\tVERB\t_\tVerbForm=Ger\t1\tdep\t_\t_\n"
    "\n";

TEST_CASE("parse a two-token block") {
  const Corpus corpus = ParseConlluString(Row("1", "two", "two", "NUM", "_") +
                                          Row("2", "cats", "cat", "NOUN", "Number=Plur") + "\n");
  REQUIRE(corpus.size() == 1);
  REQUIRE(corpus[0].size() == 2);
  const Token& cats = corpus[0].tokens[1];
  CHECK(cats.form == "cats");
  CHECK(cats.lemma == "cat");
  REQUIRE(cats.tag.has_value());
  CHECK(cats.tag->ToString() == "POS=NOUN|Number=Plur");
  CHECK(cats.line == 2);
  CHECK(corpus[0].tokens[0].tag->ToString() == "POS=NUM");
}

TEST_CASE("comments only and empty input give an empty corpus") {
  CHECK(ParseConlluString("# sent_id = 1\n# text = hi\n").empty());
  CHECK(ParseConlluString("").empty());
  CHECK(ParseConlluString("\n\n").empty());
}

TEST_CASE("multiword ranges and empty nodes are skipped") {
  const Corpus corpus = ParseConlluString("1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n" +
                                          Row("1", "de", "de", "ADP", "_") +
                                          Row("2", "el", "el", "DET", "Definite=Def") +
                                          "2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n" +
                                          Row("3", "gato", "gato", "NOUN", "Gender=Masc") + "\n");
  REQUIRE(corpus.size() == 1);
  REQUIRE(corpus[0].size() == 3);
  CHECK(corpus[0].tokens[0].form == "de");
  CHECK(corpus[0].tokens[1].form == "el");
  CHECK(corpus[0].tokens[2].form == "gato");
}

TEST_CASE("wrong column count reports the line") {
  const std::string text = Row("1", "a", "a", "X", "_") + "2\tb\tb\tX\n";
  try {
    ParseConlluString(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("CRLF line ends, missing final blank line, lemma fallback, slot flag") {
  const Corpus corpus = ParseConlluString(
      "1\tgatos\t_\tNOUN\t_\tNumber=Plur\t_\t_\t_\tSlot=Yes\r\n"
      "2\tcomen\tcomer\tVERB\t_\t_\t_\t_\t_\tSpaceAfter=No|Slot=Yes\r\n"
      "3\t.\t.\tPUNCT\t_\t_\t_\t_\t_\t_\r\n");
  REQUIRE(corpus.size() == 1);
  const auto& tokens = corpus[0].tokens;
  CHECK(tokens[0].lemma == "gatos");
  CHECK(tokens[0].is_slot);
  CHECK(tokens[1].is_slot);
  CHECK_FALSE(tokens[2].is_slot);
  CHECK(tokens[2].form == ".");
}

TEST_CASE("NFC normalization at ingestion") {
  // "e" + combining acute accent becomes the precomposed code point.
  const Corpus corpus = ParseConlluString(Row("1", "cafe\xCC\x81", "cafe\xCC\x81", "NOUN", "_") + "\n");
  CHECK(corpus[0].tokens[0].form == "caf\xC3\xA9");
  CHECK(SplitCodePoints(corpus[0].tokens[0].form).size() == 4);
}

TEST_CASE("parse_feats") {
  CHECK(ParseFeats("NOUN", "Number=Plur").ToString() == "POS=NOUN|Number=Plur");
  const MorphTag num = ParseFeats("NUM", "_");
  CHECK(num.pos() == "NUM");
  CHECK(num.features().empty());
  CHECK(ParseFeats("NOUN", "Case=Nom|Number=Plur") == ParseFeats("NOUN", "Number=Plur|Case=Nom"));
  CHECK(ParseFeats("NOUN", "Number=Plur|Case=Nom").ToString() == "POS=NOUN|Case=Nom|Number=Plur");
  CHECK_THROWS_AS(ParseFeats("NOUN", "Number"), ParseError);
  CHECK_THROWS_AS(ParseFeats("NOUN", "Number=Plur|Number=Sing"), ParseError);
  CHECK_THROWS_AS(MorphTag("NOUN", {{"Number", "Plur"}, {"Number", "Sing"}}), DomainError);
  CHECK(ParseFeats("_", "_").IsEmpty());

  const MorphTag tag = ParseFeats("VERB", "Tense=Past|Mood=Ind");
  CHECK(tag.Get("POS") == "VERB");
  CHECK(tag.Get("Tense") == "Past");
  CHECK_FALSE(tag.Get("Case").has_value());
  CHECK(tag.Symbols() == std::vector<std::string>{"POS=VERB", "Mood=Ind", "Tense=Past"});
  CHECK(ParseTagString(tag.ToString()) == tag);
  CHECK(ParseTagString("POS=NUM") == num);
}

TEST_CASE("build_vocabs") {
  const Corpus corpus = ParseConlluString(Row("1", "a", "a", "NOUN", "Number=Sing") +
                                          Row("2", "bb", "b", "VERB", "_") +
                                          Row("3", "a", "a", "NOUN", "Number=Sing") + "\n");
  const Vocab vocab = BuildVocab(corpus);
  CHECK(vocab.tags.size() == 3);
  CHECK(vocab.NumLabels() == 2);
  CHECK(vocab.tags.Symbol(0) == kStartTag);
  CHECK(vocab.LabelOf(ParseFeats("NOUN", "Number=Sing")).has_value());
  CHECK_FALSE(vocab.LabelOf(ParseFeats("ADJ", "_")).has_value());
  for (size_t label = 0; label < vocab.NumLabels(); ++label) {
    CHECK(vocab.LabelOf(vocab.TagOfLabel(label)) == label);
  }
  CHECK(vocab.chars.Index("zzz-unseen") == *vocab.chars.unknown());
  CHECK(vocab.words.Index("unseen") == *vocab.words.unknown());
  CHECK(vocab.features.Index("Case=Gen") == *vocab.features.unknown());
  CHECK_THROWS_AS(BuildVocab(Corpus{}), DataError);
}

TEST_CASE("vocab covers every character and is a bijection") {
  const Corpus corpus = GenerateSyntheticCorpus(100, 4, {});
  const Vocab vocab = BuildVocab(corpus);
  for (const Sentence& s : corpus) {
    for (const Token& t : s.tokens) {
      for (const std::string& c : SplitCodePoints(t.form)) CHECK(vocab.chars.Find(c).has_value());
      for (const std::string& c : SplitCodePoints(t.lemma)) CHECK(vocab.chars.Find(c).has_value());
      CHECK(vocab.LabelOf(*t.tag).has_value());
    }
  }
  for (const SymbolTable* table : {&vocab.words, &vocab.chars, &vocab.tags, &vocab.features}) {
    std::set<std::string> seen;
    for (size_t i = 0; i < table->size(); ++i) {
      CHECK(table->Find(table->Symbol(i)) == i);
      seen.insert(table->Symbol(i));
    }
    CHECK(seen.size() == table->size());
    CHECK(SymbolTable::FromList(table->symbols(), table->unknown()
                                                       ? std::optional<std::string>(table->Symbol(*table->unknown()))
                                                       : std::nullopt) == *table);
  }
}

TEST_CASE("load_embeddings") {
  {
    std::istringstream in("2 3\ncat 0.1 0.2 0.3\ndog -1 0 1e-2\n");
    const EmbeddingTable table = LoadEmbeddings(in, 3);
    CHECK(table.size() == 2);
    CHECK(table.dim() == 3);
    REQUIRE(table.Find("dog").has_value());
    CHECK((*table.Find("dog"))[2] == doctest::Approx(0.01));
    CHECK_FALSE(table.Find("bird").has_value());
  }
  {
    std::istringstream in("cat 0.1 0.2 0.3\ndog 1 2 3\n");
    CHECK(LoadEmbeddings(in, 3).size() == 2);
  }
  {
    std::istringstream in("cat 0.1 0.2 0.3\ndog 1 2\n");
    try {
      LoadEmbeddings(in, 3);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("make_task_instance") {
  const Corpus corpus = ParseConlluString(kTwoCats);
  const TaskInstance all = MakeTaskInstance(corpus[0], SlotMode::kAllSlots);
  CHECK(all.input == std::vector<std::string>{"two", "cat", "be", "sit"});
  CHECK(all.NumSlots() == 4);

  const TaskInstance given = MakeTaskInstance(corpus[0], SlotMode::kGivenSlots);
  CHECK(given.NumSlots() == 0);
  CHECK(given.input == std::vector<std::string>{"two", "cats", "were", "sitting"});

  const Corpus synth = GenerateSyntheticCorpus(50, 2, {.mark_slots = true});
  for (const Sentence& s : synth) {
    const TaskInstance t = MakeTaskInstance(s, SlotMode::kGivenSlots);
    size_t flags = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      flags += s.tokens[i].is_slot;
      CHECK(t.is_slot[i] == s.tokens[i].is_slot);
      CHECK(t.input[i] == (t.is_slot[i] ? s.tokens[i].lemma : s.tokens[i].form));
    }
    CHECK(t.NumSlots() == flags);
  }
}

TEST_CASE("parse, serialize, parse is the identity") {
  for (uint64_t seed : {1, 2, 3}) {
    const Corpus corpus = GenerateSyntheticCorpus(40, seed, {.mark_slots = true});
    const std::string text = FormatConllu(corpus);
    const Corpus again = ParseConlluString(text);
    REQUIRE(again.size() == corpus.size());
    for (size_t s = 0; s < corpus.size(); ++s) {
      REQUIRE(again[s].size() == corpus[s].size());
      for (size_t i = 0; i < corpus[s].size(); ++i) {
        const Token& a = corpus[s].tokens[i];
        const Token& b = again[s].tokens[i];
        CHECK(a.form == b.form);
        CHECK(a.lemma == b.lemma);
        CHECK(a.tag == b.tag);
        CHECK(a.is_slot == b.is_slot);
      }
    }
    CHECK(FormatConllu(again) == text);
  }
}

}  // namespace
}  // namespace inflect
