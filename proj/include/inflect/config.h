#ifndef INFLECT_CONFIG_H_
#define INFLECT_CONFIG_H_

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "inflect/task.h"

namespace inflect {

// joint: the inflector reads the tag (predicted or gold). direct: it reads
// only the lemma and the sentence encoder state, never a tag.
enum class ModelMode { kJoint, kDirect };

std::string ToString(ModelMode mode);
ModelMode ParseModelMode(const std::string& text);
std::string ToString(SlotMode mode);
SlotMode ParseSlotMode(const std::string& text);

struct TrainConfig {
  size_t epochs = 20;
  double learning_rate = 0.001;
  uint64_t seed = 1;
  size_t word_dim = 300;
  size_t char_dim = 100;
  size_t hidden_dim = 200;       // per direction
  size_t char_hidden_dim = 100;  // character-level BiLSTMs, per direction
  double clip_norm = 5.0;
  ModelMode mode = ModelMode::kJoint;
  bool freeze_embeddings = false;
  SlotMode slot_mode = SlotMode::kAllSlots;

  // Throws DomainError unless every size and rate is positive.
  void Validate() const;

  nlohmann::json ToJson() const;
  static TrainConfig FromJson(const nlohmann::json& j);
};

}  // namespace inflect

#endif  // INFLECT_CONFIG_H_
