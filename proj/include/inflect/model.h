#ifndef INFLECT_MODEL_H_
#define INFLECT_MODEL_H_

#include <memory>
#include <string>

#include "inflect/config.h"
#include "inflect/crf.h"
#include "inflect/embeddings.h"
#include "inflect/encoder.h"
#include "inflect/inflector.h"
#include "inflect/parameters.h"
#include "inflect/vocab.h"

namespace inflect {

inline constexpr uint32_t kModelFormatVersion = 1;

// Everything needed to tag and inflect: vocabularies, parameters and the
// configuration they were trained with. Movable; parameters live behind a
// stable pointer so the components' references survive a move.
struct ModelBundle {
  TrainConfig config;
  std::shared_ptr<const Vocab> vocab;
  std::unique_ptr<ParameterStore> store;
  SentenceEncoder encoder;
  CrfTagger crf;
  Inflector inflector;

  // Fresh parameters drawn from a generator seeded with config.seed.
  static ModelBundle Create(Vocab vocab, const TrainConfig& config,
                            const EmbeddingTable* pretrained = nullptr);
  // Wraps loaded parameters; throws ShapeError if any are missing or
  // mis-shaped for the vocabulary and configuration.
  static ModelBundle Bind(Vocab vocab, const TrainConfig& config,
                          std::unique_ptr<ParameterStore> store);
};

// Container layout, all integers little-endian:
//   magic "INFLMODL" | u32 version | u64 metadata bytes | metadata (JSON) |
//   u64 payload bytes | payload | u32 CRC-32 of metadata and payload.
// The metadata lists the configuration, vocabularies in index order and, per
// parameter, its name, shape and payload offset. Values are 64-bit floats
// unless float_bits is 32.
void SaveModel(const ModelBundle& model, std::ostream& out, int float_bits = 64);
void SaveModelFile(const ModelBundle& model, const std::string& path, int float_bits = 64);
// Throws VersionError for an unknown format version and CorruptError for a
// damaged or truncated container.
ModelBundle LoadModel(std::istream& in);
ModelBundle LoadModelFile(const std::string& path);

}  // namespace inflect

#endif  // INFLECT_MODEL_H_
