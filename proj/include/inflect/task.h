#ifndef INFLECT_TASK_H_
#define INFLECT_TASK_H_

#include <string>
#include <vector>

#include "inflect/corpus.h"

namespace inflect {

enum class SlotMode { kAllSlots, kGivenSlots };

// What a system sees: lemmas at slot positions, surface forms elsewhere.
struct TaskInstance {
  std::vector<std::string> input;
  std::vector<std::string> lemmas;
  std::vector<bool> is_slot;

  size_t size() const { return input.size(); }
  size_t NumSlots() const;
};

TaskInstance MakeTaskInstance(const Sentence& sentence, SlotMode mode);

}  // namespace inflect

#endif  // INFLECT_TASK_H_
