#include "inflect/alignment.h"

#include <algorithm>

#include "inflect/text.h"

namespace inflect {

ActionSequence AlignOracle(std::string_view lemma_text, std::string_view form_text) {
  const std::vector<std::string> lemma = SplitCodePoints(lemma_text);
  const std::vector<std::string> form = SplitCodePoints(form_text);
  const size_t rows = lemma.size() + 1;
  const size_t cols = form.size() + 1;
  std::vector<size_t> dist(rows * cols);
  auto at = [&](size_t i, size_t j) -> size_t& { return dist[i * cols + j]; };
  for (size_t i = 0; i < rows; ++i) at(i, 0) = i;
  for (size_t j = 0; j < cols; ++j) at(0, j) = j;
  for (size_t i = 1; i < rows; ++i) {
    for (size_t j = 1; j < cols; ++j) {
      const size_t diag = at(i - 1, j - 1) + (lemma[i - 1] == form[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i, j - 1) + 1, at(i - 1, j) + 1});
    }
  }

  enum class Op { kCopy, kSubstitute, kInsert, kDelete };
  std::vector<Op> ops;
  size_t i = rows - 1, j = cols - 1;
  while (i > 0 || j > 0) {
    const size_t here = at(i, j);
    if (i > 0 && j > 0 && lemma[i - 1] == form[j - 1] && at(i - 1, j - 1) == here) {
      ops.push_back(Op::kCopy);
      --i, --j;
    } else if (i > 0 && j > 0 && at(i - 1, j - 1) + 1 == here) {
      ops.push_back(Op::kSubstitute);
      --i, --j;
    } else if (j > 0 && at(i, j - 1) + 1 == here) {
      ops.push_back(Op::kInsert);
      --j;
    } else {
      ops.push_back(Op::kDelete);
      --i;
    }
  }
  std::reverse(ops.begin(), ops.end());

  ActionSequence actions;
  size_t out = 0;
  for (Op op : ops) {
    switch (op) {
      case Op::kCopy:
      case Op::kSubstitute:
        actions.push_back(Action::Write(form[out++]));
        actions.push_back(Action::Step());
        break;
      case Op::kInsert:
        actions.push_back(Action::Write(form[out++]));
        break;
      case Op::kDelete:
        actions.push_back(Action::Step());
        break;
    }
  }
  actions.push_back(Action::End());
  return actions;
}

std::string ReplayActions(const ActionSequence& actions) {
  std::string out;
  for (const Action& a : actions) {
    if (a.kind == Action::Kind::kWrite) out += a.symbol;
  }
  return out;
}

size_t CountSteps(const ActionSequence& actions) {
  return static_cast<size_t>(std::count_if(actions.begin(), actions.end(), [](const Action& a) {
    return a.kind == Action::Kind::kStep;
  }));
}

std::string FormatActions(const ActionSequence& actions) {
  std::string out;
  for (const Action& a : actions) {
    if (!out.empty()) out += ' ';
    switch (a.kind) {
      case Action::Kind::kWrite:
        out += "W(" + a.symbol + ")";
        break;
      case Action::Kind::kStep:
        out += "S";
        break;
      case Action::Kind::kEnd:
        out += "W(EOW)";
        break;
    }
  }
  return out;
}

}  // namespace inflect
