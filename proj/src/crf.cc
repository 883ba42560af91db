#include "inflect/crf.h"

#include <algorithm>
#include <cmath>

#include "inflect/errors.h"
#include "inflect/lstm.h"

namespace inflect {

ScoreLattice::ScoreLattice(size_t length, size_t num_labels)
    : length_(length), num_labels_(num_labels), scores_(length * (num_labels + 1) * num_labels, 0.0) {
  if (length == 0 || num_labels == 0) throw DomainError("empty lattice");
}

ScoreLattice ScoreLattice::FromScores(const Tensor& emissions, const Tensor& transitions) {
  const size_t n = emissions.rows();
  const size_t labels = emissions.cols();
  if (transitions.rows() != labels + 1 || transitions.cols() != labels) {
    throw ShapeError("transitions " + ShapeString(transitions.shape()) + " for " +
                     std::to_string(labels) + " labels");
  }
  ScoreLattice lattice(n, labels);
  for (size_t m = 0; m < labels; ++m) lattice.set(0, kStart, m, transitions.at(0, m) + emissions.at(0, m));
  for (size_t i = 1; i < n; ++i) {
    for (size_t p = 0; p < labels; ++p) {
      for (size_t m = 0; m < labels; ++m) {
        lattice.set(i, p, m, transitions.at(p + 1, m) + emissions.at(i, m));
      }
    }
  }
  return lattice;
}

void ScoreLattice::Shift(double c) {
  for (double& s : scores_) s += c;
}

double PathScore(const ScoreLattice& lattice, std::span<const size_t> labels) {
  if (labels.size() != lattice.length()) throw ShapeError("path length differs from lattice");
  double total = 0.0;
  size_t prev = ScoreLattice::kStart;
  for (size_t i = 0; i < labels.size(); ++i) {
    total += lattice.score(i, prev, labels[i]);
    prev = labels[i];
  }
  return total;
}

double LogPartition(const ScoreLattice& lattice) {
  const size_t n = lattice.length();
  const size_t labels = lattice.num_labels();
  std::vector<double> alpha(labels), next(labels), scratch(labels);
  for (size_t m = 0; m < labels; ++m) alpha[m] = lattice.score(0, ScoreLattice::kStart, m);
  for (size_t i = 1; i < n; ++i) {
    for (size_t m = 0; m < labels; ++m) {
      for (size_t p = 0; p < labels; ++p) scratch[p] = alpha[p] + lattice.score(i, p, m);
      next[m] = LogSumExp(scratch);
    }
    alpha.swap(next);
  }
  return LogSumExp(alpha);
}

LabelPath Viterbi(const ScoreLattice& lattice) {
  const size_t n = lattice.length();
  const size_t labels = lattice.num_labels();
  std::vector<double> best(labels), next(labels);
  std::vector<size_t> back(n * labels, 0);
  for (size_t m = 0; m < labels; ++m) best[m] = lattice.score(0, ScoreLattice::kStart, m);
  for (size_t i = 1; i < n; ++i) {
    for (size_t m = 0; m < labels; ++m) {
      size_t arg = 0;
      double top = best[0] + lattice.score(i, 0, m);
      for (size_t p = 1; p < labels; ++p) {
        const double s = best[p] + lattice.score(i, p, m);
        if (s > top) {
          top = s;
          arg = p;
        }
      }
      next[m] = top;
      back[i * labels + m] = arg;
    }
    best.swap(next);
  }
  LabelPath path;
  path.labels.assign(n, 0);
  size_t last = 0;
  for (size_t m = 1; m < labels; ++m) {
    if (best[m] > best[last]) last = m;
  }
  path.score = best[last];
  path.labels[n - 1] = last;
  for (size_t i = n - 1; i > 0; --i) path.labels[i - 1] = back[i * labels + path.labels[i]];
  return path;
}

std::vector<LabelPath> KBestViterbi(const ScoreLattice& lattice, size_t k) {
  if (k == 0) throw DomainError("k-best decoding needs k >= 1");
  const size_t n = lattice.length();
  const size_t labels = lattice.num_labels();

  // Entry r of cell (i, m) is the r-th best prefix ending in m at position i,
  // remembered by the (label, rank) of its own prefix at i - 1.
  struct Entry {
    double score;
    size_t prev_label;
    size_t prev_rank;
  };
  // Descending score, then lower previous label, then lower previous rank.
  auto before = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.prev_label != b.prev_label) return a.prev_label < b.prev_label;
    return a.prev_rank < b.prev_rank;
  };

  std::vector<std::vector<std::vector<Entry>>> cells(n, std::vector<std::vector<Entry>>(labels));
  for (size_t m = 0; m < labels; ++m) {
    cells[0][m].push_back({lattice.score(0, ScoreLattice::kStart, m), ScoreLattice::kStart, 0});
  }
  std::vector<Entry> candidates;
  for (size_t i = 1; i < n; ++i) {
    for (size_t m = 0; m < labels; ++m) {
      candidates.clear();
      for (size_t p = 0; p < labels; ++p) {
        const std::vector<Entry>& prev = cells[i - 1][p];
        for (size_t r = 0; r < prev.size(); ++r) {
          candidates.push_back({prev[r].score + lattice.score(i, p, m), p, r});
        }
      }
      const size_t keep = std::min(k, candidates.size());
      std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                        candidates.end(), before);
      cells[i][m].assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep));
    }
  }

  candidates.clear();
  for (size_t m = 0; m < labels; ++m) {
    for (size_t r = 0; r < cells[n - 1][m].size(); ++r) {
      candidates.push_back({cells[n - 1][m][r].score, m, r});
    }
  }
  const size_t keep = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                    candidates.end(), before);

  std::vector<LabelPath> out;
  out.reserve(keep);
  for (size_t c = 0; c < keep; ++c) {
    LabelPath path;
    path.score = candidates[c].score;
    path.labels.assign(n, 0);
    size_t label = candidates[c].prev_label;
    size_t rank = candidates[c].prev_rank;
    for (size_t i = n; i-- > 0;) {
      path.labels[i] = label;
      const Entry& e = cells[i][label][rank];
      label = e.prev_label;
      rank = e.prev_rank;
    }
    out.push_back(std::move(path));
  }
  return out;
}

CrfTagger CrfTagger::Create(ParameterStore& store, size_t num_labels, size_t state_dim, Rng& rng) {
  if (num_labels == 0) throw DataError("the tag set is empty");
  CrfTagger crf;
  crf.num_labels_ = num_labels;
  crf.transitions_ = &EnsureParameter(store, "crf/transitions", {num_labels + 1, num_labels}, rng);
  crf.tag_embeddings_ = &EnsureParameter(store, "crf/tag_embeddings", {num_labels, state_dim}, rng);
  return crf;
}

Var CrfTagger::Emissions(Graph& g, std::span<const Var> states) const {
  Var tags = g.Param(*tag_embeddings_);
  std::vector<Var> rows;
  rows.reserve(states.size());
  for (const Var& h : states) rows.push_back(MatMul(tags, h));
  return StackRows(rows);
}

ScoreLattice CrfTagger::BuildLattice(std::span<const Tensor> states) const {
  if (states.empty()) throw DomainError("cannot build a lattice for an empty sentence");
  const Tensor& tags = tag_embeddings_->value;
  const size_t dim = tags.cols();
  Tensor emissions({states.size(), num_labels_});
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != dim) throw ShapeError("state size differs from tag embeddings");
    for (size_t m = 0; m < num_labels_; ++m) {
      double s = 0.0;
      for (size_t d = 0; d < dim; ++d) s += tags.at(m, d) * states[i][d];
      emissions.at(i, m) = s;
    }
  }
  return ScoreLattice::FromScores(emissions, transitions_->value);
}

ScoreLattice CrfTagger::BuildLattice(std::span<const Var> states) const {
  std::vector<Tensor> values;
  values.reserve(states.size());
  for (const Var& h : states) values.push_back(h.value());
  return BuildLattice(std::span<const Tensor>(values));
}

Var CrfTagger::NegLogLikelihood(Graph& g, std::span<const Var> states,
                                std::span<const size_t> gold) const {
  if (states.size() != gold.size()) throw ShapeError("gold tags differ in length from sentence");
  for (size_t label : gold) {
    if (label >= num_labels_) throw LabelError("gold label " + std::to_string(label) + " not in tag set");
  }
  Var emissions = Emissions(g, states);
  Var transitions = g.Param(*transitions_);
  Var log_z = CrfLogPartition(emissions, transitions);
  std::vector<Var> terms;
  terms.reserve(2 * gold.size());
  size_t prev_row = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    terms.push_back(Pick(transitions, prev_row * num_labels_ + gold[i]));
    terms.push_back(Pick(emissions, i * num_labels_ + gold[i]));
    prev_row = gold[i] + 1;
  }
  // Summed in the order of the forward recursion.
  Var gold_score = Sum(Concat(terms));
  return Sub(log_z, gold_score);
}

}  // namespace inflect
