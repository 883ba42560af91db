#include "inflect/model.h"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "inflect/errors.h"

namespace inflect {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'F', 'L', 'M', 'O', 'D', 'L'};

void PutLe(std::string& out, uint64_t value, size_t bytes) {
  for (size_t i = 0; i < bytes; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

uint64_t GetLe(std::string_view in, size_t bytes) {
  uint64_t value = 0;
  for (size_t i = 0; i < bytes; ++i) value |= static_cast<uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return value;
}

uint32_t Checksum(std::string_view a, std::string_view b) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(a.data()), static_cast<uInt>(a.size()));
  crc = crc32(crc, reinterpret_cast<const Bytef*>(b.data()), static_cast<uInt>(b.size()));
  return static_cast<uint32_t>(crc);
}

nlohmann::json VocabToJson(const Vocab& v) {
  return {{"words", v.words.symbols()},
          {"chars", v.chars.symbols()},
          {"tags", v.tags.symbols()},
          {"features", v.features.symbols()}};
}

Vocab VocabFromJson(const nlohmann::json& j) {
  Vocab v;
  v.words = SymbolTable::FromList(j.at("words").get<std::vector<std::string>>(), kUnk);
  v.chars = SymbolTable::FromList(j.at("chars").get<std::vector<std::string>>(), kUnk);
  v.tags = SymbolTable::FromList(j.at("tags").get<std::vector<std::string>>(), std::nullopt);
  v.features = SymbolTable::FromList(j.at("features").get<std::vector<std::string>>(), kUnk);
  return v;
}

// Reads exactly n bytes or reports truncation.
std::string ReadExactly(std::istream& in, size_t n) {
  std::string buf(n, '\0');
  in.read(buf.data(), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(in.gcount()) != n) throw CorruptError("model file is truncated");
  return buf;
}

ModelBundle Assemble(std::shared_ptr<const Vocab> vocab, const TrainConfig& config,
                     std::unique_ptr<ParameterStore> store, const EmbeddingTable* pretrained) {
  config.Validate();
  Rng rng(config.seed);
  ModelBundle m;
  m.config = config;
  m.vocab = vocab;
  m.encoder = SentenceEncoder::Create(*store, vocab, config, rng, pretrained);
  m.crf = CrfTagger::Create(*store, vocab->NumLabels(), m.encoder.output_dim(), rng);
  m.inflector = Inflector::Create(*store, vocab, config, rng);
  m.store = std::move(store);
  return m;
}

}  // namespace

ModelBundle ModelBundle::Create(Vocab vocab, const TrainConfig& config, const EmbeddingTable* pretrained) {
  return Assemble(std::make_shared<const Vocab>(std::move(vocab)), config,
                  std::make_unique<ParameterStore>(), pretrained);
}

ModelBundle ModelBundle::Bind(Vocab vocab, const TrainConfig& config, std::unique_ptr<ParameterStore> store) {
  const size_t loaded = store->size();
  ModelBundle m = Assemble(std::make_shared<const Vocab>(std::move(vocab)), config, std::move(store), nullptr);
  if (m.store->size() != loaded) {
    throw ShapeError("stored parameters do not cover the model (" + std::to_string(loaded) + " of " +
                     std::to_string(m.store->size()) + ")");
  }
  return m;
}

void SaveModel(const ModelBundle& model, std::ostream& out, int float_bits) {
  if (float_bits != 32 && float_bits != 64) throw DomainError("float_bits must be 32 or 64");
  std::string payload;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& [name, p] : *model.store) {
    params.push_back({{"name", name}, {"shape", p.value.shape()}, {"offset", payload.size()}});
    for (double v : p.value.data()) {
      if (float_bits == 64) {
        PutLe(payload, std::bit_cast<uint64_t>(v), 8);
      } else {
        PutLe(payload, std::bit_cast<uint32_t>(static_cast<float>(v)), 4);
      }
    }
  }
  const nlohmann::json meta = {{"format_version", kModelFormatVersion},
                               {"float_bits", float_bits},
                               {"config", model.config.ToJson()},
                               {"vocab", VocabToJson(*model.vocab)},
                               {"parameters", params}};
  const std::string meta_text = meta.dump();
  std::string blob(kMagic, sizeof(kMagic));
  PutLe(blob, kModelFormatVersion, 4);
  PutLe(blob, meta_text.size(), 8);
  blob += meta_text;
  PutLe(blob, payload.size(), 8);
  blob += payload;
  PutLe(blob, Checksum(meta_text, payload), 4);
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw DataError("failed writing model");
}

void SaveModelFile(const ModelBundle& model, const std::string& path, int float_bits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  SaveModel(model, out, float_bits);
}

ModelBundle LoadModel(std::istream& in) {
  const std::string magic = ReadExactly(in, sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) throw CorruptError("not a model file");
  const uint32_t version = static_cast<uint32_t>(GetLe(ReadExactly(in, 4), 4));
  if (version != kModelFormatVersion) {
    throw VersionError("model format version " + std::to_string(version) + ", this build reads " +
                       std::to_string(kModelFormatVersion));
  }
  const uint64_t meta_size = GetLe(ReadExactly(in, 8), 8);
  if (meta_size > (uint64_t{1} << 34)) throw CorruptError("implausible metadata size");
  const std::string meta_text = ReadExactly(in, meta_size);
  const uint64_t payload_size = GetLe(ReadExactly(in, 8), 8);
  if (payload_size > (uint64_t{1} << 40)) throw CorruptError("implausible payload size");
  const std::string payload = ReadExactly(in, payload_size);
  const uint32_t stored_crc = static_cast<uint32_t>(GetLe(ReadExactly(in, 4), 4));
  if (stored_crc != Checksum(meta_text, payload)) throw CorruptError("checksum mismatch");

  try {
    const nlohmann::json meta = nlohmann::json::parse(meta_text);
    if (meta.at("format_version").get<uint32_t>() != kModelFormatVersion) {
      throw VersionError("metadata format version differs from header");
    }
    const int float_bits = meta.at("float_bits").get<int>();
    const size_t width = float_bits == 32 ? 4 : 8;
    auto store = std::make_unique<ParameterStore>();
    for (const auto& entry : meta.at("parameters")) {
      const Shape shape = entry.at("shape").get<Shape>();
      const size_t offset = entry.at("offset").get<size_t>();
      const size_t count = NumElements(shape);
      if (offset + count * width > payload.size()) throw CorruptError("parameter outside payload");
      std::vector<double> values(count);
      for (size_t i = 0; i < count; ++i) {
        std::string_view bytes(payload.data() + offset + i * width, width);
        values[i] = width == 8 ? std::bit_cast<double>(GetLe(bytes, 8))
                               : static_cast<double>(std::bit_cast<float>(static_cast<uint32_t>(GetLe(bytes, 4))));
      }
      store->Add(entry.at("name").get<std::string>(), Tensor(shape, std::move(values)));
    }
    return ModelBundle::Bind(VocabFromJson(meta.at("vocab")), TrainConfig::FromJson(meta.at("config")),
                             std::move(store));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptError(std::string("bad model metadata: ") + e.what());
  } catch (const ShapeError& e) {
    throw CorruptError(std::string("model parameters do not match metadata: ") + e.what());
  }
}

ModelBundle LoadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return LoadModel(in);
}

}  // namespace inflect
