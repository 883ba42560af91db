#include "inflect/task.h"

#include <algorithm>

namespace inflect {

size_t TaskInstance::NumSlots() const {
  return static_cast<size_t>(std::count(is_slot.begin(), is_slot.end(), true));
}

TaskInstance MakeTaskInstance(const Sentence& sentence, SlotMode mode) {
  TaskInstance task;
  for (const Token& t : sentence.tokens) {
    const bool slot = mode == SlotMode::kAllSlots || t.is_slot;
    task.is_slot.push_back(slot);
    task.lemmas.push_back(t.lemma);
    task.input.push_back(slot ? t.lemma : t.form);
  }
  return task;
}

}  // namespace inflect
