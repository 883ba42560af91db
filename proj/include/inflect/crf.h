#ifndef INFLECT_CRF_H_
#define INFLECT_CRF_H_

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "inflect/graph.h"
#include "inflect/parameters.h"

namespace inflect {

// Log-potentials score(i, prev, m) = A[prev, m] + o_m . h_i for a sentence of
// `length` positions over `num_labels` labels. Position 0 only reads the
// start row (prev == kStart); later positions only read real labels.
class ScoreLattice {
 public:
  static constexpr size_t kStart = std::numeric_limits<size_t>::max();

  ScoreLattice() = default;
  ScoreLattice(size_t length, size_t num_labels);
  // emissions is (n x L), transitions ((L + 1) x L) with the start row first.
  static ScoreLattice FromScores(const Tensor& emissions, const Tensor& transitions);

  size_t length() const { return length_; }
  size_t num_labels() const { return num_labels_; }

  double score(size_t i, size_t prev, size_t label) const { return scores_[Offset(i, prev, label)]; }
  void set(size_t i, size_t prev, size_t label, double value) { scores_[Offset(i, prev, label)] = value; }
  // Adds c to every entry.
  void Shift(double c);

 private:
  size_t Offset(size_t i, size_t prev, size_t label) const {
    const size_t row = prev == kStart ? 0 : prev + 1;
    return (i * (num_labels_ + 1) + row) * num_labels_ + label;
  }

  size_t length_ = 0;
  size_t num_labels_ = 0;
  std::vector<double> scores_;
};

struct LabelPath {
  std::vector<size_t> labels;
  double score = 0.0;
};

// Sum of lattice scores along `labels`, accumulated left to right.
double PathScore(const ScoreLattice& lattice, std::span<const size_t> labels);

// Forward algorithm in log space.
double LogPartition(const ScoreLattice& lattice);

// Best path. Every max prefers the lower label index on ties, so among tied
// paths the one whose reversed label sequence is lexicographically smallest
// wins.
LabelPath Viterbi(const ScoreLattice& lattice);

// The k best distinct paths, by descending score with the same tie order as
// Viterbi. Returns fewer when fewer paths exist. Throws DomainError for k == 0.
std::vector<LabelPath> KBestViterbi(const ScoreLattice& lattice, size_t k);

// Transition matrix and tag embeddings of the linear-chain CRF.
class CrfTagger {
 public:
  static CrfTagger Create(ParameterStore& store, size_t num_labels, size_t state_dim, Rng& rng);

  size_t num_labels() const { return num_labels_; }
  Parameter& transitions() const { return *transitions_; }
  Parameter& tag_embeddings() const { return *tag_embeddings_; }

  // (n x L) unary scores o_m . h_i.
  Var Emissions(Graph& g, std::span<const Var> states) const;
  ScoreLattice BuildLattice(std::span<const Tensor> states) const;
  ScoreLattice BuildLattice(std::span<const Var> states) const;

  // log Z - score(gold). Throws LabelError for a label outside the set.
  Var NegLogLikelihood(Graph& g, std::span<const Var> states, std::span<const size_t> gold) const;

 private:
  Parameter* transitions_ = nullptr;     // ((L + 1) x L)
  Parameter* tag_embeddings_ = nullptr;  // (L x state_dim)
  size_t num_labels_ = 0;
};

}  // namespace inflect

#endif  // INFLECT_CRF_H_
