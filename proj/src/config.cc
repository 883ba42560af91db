#include "inflect/config.h"

#include "inflect/errors.h"

namespace inflect {

std::string ToString(ModelMode mode) { return mode == ModelMode::kJoint ? "joint" : "direct"; }

ModelMode ParseModelMode(const std::string& text) {
  if (text == "joint") return ModelMode::kJoint;
  if (text == "direct") return ModelMode::kDirect;
  throw DomainError("unknown mode '" + text + "'");
}

std::string ToString(SlotMode mode) { return mode == SlotMode::kAllSlots ? "all" : "given"; }

SlotMode ParseSlotMode(const std::string& text) {
  if (text == "all") return SlotMode::kAllSlots;
  if (text == "given") return SlotMode::kGivenSlots;
  throw DomainError("unknown slot mode '" + text + "'");
}

void TrainConfig::Validate() const {
  if (epochs == 0 || word_dim == 0 || char_dim == 0 || hidden_dim == 0 || char_hidden_dim == 0) {
    throw DomainError("epochs and dimensions must be positive");
  }
  if (!(learning_rate > 0) || !(clip_norm > 0)) {
    throw DomainError("learning rate and clip norm must be positive");
  }
}

nlohmann::json TrainConfig::ToJson() const {
  return {{"epochs", epochs},
          {"learning_rate", learning_rate},
          {"seed", seed},
          {"word_dim", word_dim},
          {"char_dim", char_dim},
          {"hidden_dim", hidden_dim},
          {"char_hidden_dim", char_hidden_dim},
          {"clip_norm", clip_norm},
          {"mode", ToString(mode)},
          {"freeze_embeddings", freeze_embeddings},
          {"slot_mode", ToString(slot_mode)}};
}

TrainConfig TrainConfig::FromJson(const nlohmann::json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<uint64_t>();
  c.word_dim = j.at("word_dim").get<size_t>();
  c.char_dim = j.at("char_dim").get<size_t>();
  c.hidden_dim = j.at("hidden_dim").get<size_t>();
  c.char_hidden_dim = j.at("char_hidden_dim").get<size_t>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.mode = ParseModelMode(j.at("mode").get<std::string>());
  c.freeze_embeddings = j.at("freeze_embeddings").get<bool>();
  c.slot_mode = ParseSlotMode(j.at("slot_mode").get<std::string>());
  c.Validate();
  return c;
}

}  // namespace inflect
