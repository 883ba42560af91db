#ifndef INFLECT_ALIGNMENT_H_
#define INFLECT_ALIGNMENT_H_

#include <string>
#include <string_view>
#include <vector>

namespace inflect {

// One transducer action. kWrite emits `symbol`, kStep moves the attention one
// input position right, kEnd closes the word.
struct Action {
  enum class Kind { kWrite, kStep, kEnd };
  Kind kind = Kind::kEnd;
  std::string symbol;

  static Action Write(std::string c) { return {Kind::kWrite, std::move(c)}; }
  static Action Step() { return {Kind::kStep, {}}; }
  static Action End() { return {Kind::kEnd, {}}; }

  friend bool operator==(const Action&, const Action&) = default;
};

using ActionSequence = std::vector<Action>;

// Minimum edit distance alignment (unit costs) of lemma to form, linearized
// for a pointer that starts on the first lemma character:
//   copy or substitution -> WRITE(c) STEP, insertion -> WRITE(c),
//   deletion -> STEP, then END.
// Ties are broken toward copy, then substitution, insertion, deletion.
ActionSequence AlignOracle(std::string_view lemma, std::string_view form);

// Concatenation of the written symbols.
std::string ReplayActions(const ActionSequence& actions);
size_t CountSteps(const ActionSequence& actions);
// "W(t) S W(a) ... W(EOW)" for logs and tests.
std::string FormatActions(const ActionSequence& actions);

}  // namespace inflect

#endif  // INFLECT_ALIGNMENT_H_
