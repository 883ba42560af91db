#ifndef INFLECT_SYNTH_H_
#define INFLECT_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>

#include "inflect/corpus.h"

namespace inflect {

// A small Romance-like agreement grammar:
//   [ADV] NP_subj VERB [NP_obj] [ADV]
//   NP := (uno | mucho | [este] NUM) NOUN [ADJ]
// Nouns carry lexical gender and mark number by suffix; determiners and
// adjectives agree with their noun in gender and number, the verb agrees
// with the subject in number. Tense comes from a cue adverb (ayer, hoy, ...);
// sentences without a cue pick a tense at random, which the tagger cannot
// recover from context. Open-class lemmas are drawn from a Zipfian lexicon
// of a few dozen hand-written words followed by several hundred generated
// regular ones, so held-out text contains rare and unseen lemmas.
struct SynthOptions {
  double no_tense_cue = 0.1;  // probability a sentence has no tense adverb
  double object = 0.4;        // probability of an object noun phrase
  double adjective = 0.5;     // per noun phrase
  bool mark_slots = false;    // write Slot=Yes on a random half of tokens
};

Corpus GenerateSyntheticCorpus(size_t sentences, uint64_t seed, const SynthOptions& options = {});

// Surface form of `lemma` under `tag` in the synthetic grammar, or nullopt
// for a lemma outside its lexicon.
std::optional<std::string> RealizeSynthetic(const std::string& lemma, const MorphTag& tag);

// Checks agreement, tense-cue consistency and that every form realizes its
// lemma and tag. Returns a description of the first violation.
std::optional<std::string> CheckSyntheticSentence(const Sentence& sentence);

}  // namespace inflect

#endif  // INFLECT_SYNTH_H_
