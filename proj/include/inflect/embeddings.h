#ifndef INFLECT_EMBEDDINGS_H_
#define INFLECT_EMBEDDINGS_H_

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace inflect {

// Pretrained word vectors, all of one dimension.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(size_t dim) : dim_(dim) {}

  size_t dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  void Insert(std::string word, std::vector<double> vector);
  std::optional<std::span<const double>> Find(const std::string& word) const;

 private:
  size_t dim_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

// Text format: an optional "<count> <dim>" header, then one word per line
// followed by its values. Throws FormatError (with line number) when a
// vector's length differs from expected_dim.
EmbeddingTable LoadEmbeddings(std::istream& in, size_t expected_dim);
EmbeddingTable LoadEmbeddingsFile(const std::string& path, size_t expected_dim);

}  // namespace inflect

#endif  // INFLECT_EMBEDDINGS_H_
