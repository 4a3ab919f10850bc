#include "taxidisp/assignment_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace taxidisp {

WeightMatrix::WeightMatrix(std::size_t rows, std::size_t cols, Sense sense, double fill)
    : rows_(rows), cols_(cols), sense_(sense), w_(rows * cols, fill) {}

WeightMatrix::WeightMatrix(std::vector<std::vector<double>> values, Sense sense)
    : rows_(values.size()), cols_(values.empty() ? 0 : values.front().size()), sense_(sense) {
  w_.reserve(rows_ * cols_);
  for (const auto& row : values) {
    if (row.size() != cols_) throw std::invalid_argument("ragged weight matrix");
    w_.insert(w_.end(), row.begin(), row.end());
  }
}

namespace {

using Cost = std::int64_t;

// Integer problem with the smaller side as rows ("small") and the larger
// side as columns ("large"). Potentials satisfy u[s] + v[l] <= cost(s, l),
// equality on matched edges, v[l] <= 0, and v[l] == 0 on unmatched columns.
struct Reduced {
  int n_small = 0;
  int n_large = 0;
  std::vector<Cost> cost;  // n_small x n_large
  std::vector<Cost> u;
  std::vector<Cost> v;
  std::vector<int> match_small;  // small -> large
  std::vector<int> owner_large;  // large -> small, -1 if free

  Cost at(int s, int l) const { return cost[static_cast<std::size_t>(s) * n_large + l]; }
  bool tight(int s, int l) const { return at(s, l) - u[s] - v[l] == 0; }
};

// Picks 2^k so that the largest |w| lands near 2^40. Integer-valued inputs
// of moderate size stay exact on this grid.
double grid_scale(const WeightMatrix& m) {
  double max_abs = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double w = m(r, c);
      if (!std::isfinite(w)) {
        throw std::invalid_argument(fmt::format("non-finite weight at ({}, {})", r, c));
      }
      max_abs = std::max(max_abs, std::abs(w));
    }
  }
  if (max_abs == 0.0) return 1.0;
  int exp = 0;
  std::frexp(max_abs, &exp);  // max_abs < 2^exp
  return std::ldexp(1.0, 40 - exp);
}

Reduced reduce(const WeightMatrix& m, bool transposed) {
  Reduced p;
  p.n_small = static_cast<int>(transposed ? m.cols() : m.rows());
  p.n_large = static_cast<int>(transposed ? m.rows() : m.cols());
  const double scale = grid_scale(m) * (m.sense() == Sense::Maximize ? -1.0 : 1.0);
  p.cost.resize(static_cast<std::size_t>(p.n_small) * p.n_large);
  for (int s = 0; s < p.n_small; ++s) {
    for (int l = 0; l < p.n_large; ++l) {
      const double w = transposed ? m(l, s) : m(s, l);
      p.cost[static_cast<std::size_t>(s) * p.n_large + l] = std::llround(w * scale);
    }
  }
  return p;
}

// Shortest augmenting path assignment; one Dijkstra-like phase per small
// row. Index 0 of the column arrays is the virtual source column.
void augment_all(Reduced& p) {
  const int n = p.n_small;
  const int m = p.n_large;
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> col_owner(m + 1, 0), way(m + 1, 0);
  std::vector<Cost> minv(m + 1);
  std::vector<char> used(m + 1);

  for (int i = 1; i <= n; ++i) {
    col_owner[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = col_owner[j0];
      const Cost* row = &p.cost[static_cast<std::size_t>(i0 - 1) * m];
      Cost delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const Cost cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[col_owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_owner[j0] != 0);
    do {
      const int j1 = way[j0];
      col_owner[j0] = col_owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  p.u.assign(u.begin() + 1, u.end());
  p.v.assign(v.begin() + 1, v.end());
  p.match_small.assign(n, -1);
  p.owner_large.assign(m, -1);
  for (int j = 1; j <= m; ++j) {
    if (col_owner[j] != 0) {
      p.owner_large[j - 1] = col_owner[j] - 1;
      p.match_small[col_owner[j] - 1] = j - 1;
    }
  }
}

// Every optimal matching uses only tight edges and may leave a large-side
// element unmatched only if its potential is zero. Padding the small side
// with dummies that connect to exactly those elements turns the optimal set
// into the perfect matchings of one tight graph, where any two optima differ
// by alternating cycles. The greedy passes below walk the output order and
// move each element to its best partner whenever such a cycle exists,
// never disturbing elements already fixed.

// Output rows are the small side. Each small row takes the lowest large
// column reachable by a cycle back to its current column.
void lex_min_small_rows(Reduced& p) {
  const int n = p.n_small;
  const int m = p.n_large;
  std::vector<char> fixed(n, 0);
  std::vector<int> parent(m);
  std::vector<char> seen(m);
  std::deque<int> queue;

  auto try_cycle = [&](int s, int start, int home) -> bool {
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    seen[start] = 1;
    parent[start] = -1;
    queue.push_back(start);
    bool dummy_expanded = false;
    int last = -1;
    while (!queue.empty() && last < 0) {
      const int x = queue.front();
      queue.pop_front();
      const int o = p.owner_large[x];
      auto visit = [&](int y) {
        if (y == home) {
          last = x;
          return true;
        }
        if (!seen[y]) {
          seen[y] = 1;
          parent[y] = x;
          queue.push_back(y);
        }
        return false;
      };
      if (o >= 0) {
        if (fixed[o] || o == s) continue;
        for (int y = 0; y < m && last < 0; ++y) {
          if (y != x && p.tight(o, y)) visit(y);
        }
      } else {
        if (dummy_expanded) continue;
        dummy_expanded = true;
        for (int y = 0; y < m && last < 0; ++y) {
          if (y != x && p.v[y] == 0) visit(y);
        }
      }
    }
    if (last < 0) return false;

    std::vector<int> path;
    for (int x = last; x >= 0; x = parent[x]) path.push_back(x);
    std::reverse(path.begin(), path.end());
    std::vector<int> movers(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) movers[i] = p.owner_large[path[i]];
    p.match_small[s] = path.front();
    p.owner_large[path.front()] = s;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const int next = i + 1 < path.size() ? path[i + 1] : home;
      const int o = movers[i];
      p.owner_large[next] = o;
      if (o >= 0) p.match_small[o] = next;
    }
    return true;
  };

  for (int s = 0; s < n; ++s) {
    const int home = p.match_small[s];
    for (int l = 0; l < home; ++l) {
      if (p.tight(s, l) && try_cycle(s, l, home)) break;
    }
    fixed[s] = 1;
  }
}

// Output rows are the large side. Each large row prefers the lowest small
// column, and any small column over staying unmatched.
void lex_min_large_rows(Reduced& p) {
  const int n = p.n_small;
  const int m = p.n_large;
  const int dummy = n;  // aggregate node for "unmatched"
  std::vector<char> fixed(m, 0);
  std::vector<int> parent(n + 1), mover(n + 1);
  std::vector<char> seen(n + 1);
  std::deque<int> queue;

  auto try_cycle = [&](int l, int start, int home) -> bool {
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    seen[start] = 1;
    parent[start] = -1;
    queue.push_back(start);
    int last = -1, last_mover = -1;
    auto visit = [&](int from, int who, int y) {
      if (y == home) {
        last = from;
        last_mover = who;
        return;
      }
      if (!seen[y]) {
        seen[y] = 1;
        parent[y] = from;
        mover[y] = who;
        queue.push_back(y);
      }
    };
    while (!queue.empty() && last < 0) {
      const int x = queue.front();
      queue.pop_front();
      if (x != dummy) {
        const int who = p.match_small[x];
        if (fixed[who] || who == l) continue;
        for (int y = 0; y < n && last < 0; ++y) {
          if (y != x && p.tight(y, who)) visit(x, who, y);
        }
        if (last < 0 && p.v[who] == 0) visit(x, who, dummy);
      } else {
        for (int who = 0; who < m && last < 0; ++who) {
          if (p.owner_large[who] >= 0 || fixed[who] || who == l) continue;
          for (int y = 0; y < n && last < 0; ++y) {
            if (p.tight(y, who)) visit(x, who, y);
          }
        }
      }
    }
    if (last < 0) return false;

    // Steps (node reached, large element moving onto it), start to home.
    std::vector<std::pair<int, int>> steps{{home, last_mover}};
    for (int x = last; x != start; x = parent[x]) steps.emplace_back(x, mover[x]);
    std::reverse(steps.begin(), steps.end());
    p.owner_large[l] = start;
    p.match_small[start] = l;
    for (const auto& [node, who] : steps) {
      if (node == dummy) {
        p.owner_large[who] = -1;
      } else {
        p.owner_large[who] = node;
        p.match_small[node] = who;
      }
    }
    return true;
  };

  for (int l = 0; l < m; ++l) {
    const int home_small = p.owner_large[l];
    const int home = home_small >= 0 ? home_small : dummy;
    const int limit = home_small >= 0 ? home_small : n;
    for (int s = 0; s < limit; ++s) {
      if (p.tight(s, l) && try_cycle(l, s, home)) break;
    }
    fixed[l] = 1;
  }
}

}  // namespace

Matching solve(const WeightMatrix& m) {
  Matching out;
  if (m.rows() == 0 || m.cols() == 0) {
    grid_scale(m);
    return out;
  }
  const bool transposed = m.rows() > m.cols();
  Reduced p = reduce(m, transposed);
  augment_all(p);
  if (transposed) {
    lex_min_large_rows(p);
  } else {
    lex_min_small_rows(p);
  }

  out.pairs.reserve(p.n_small);
  for (int s = 0; s < p.n_small; ++s) {
    const int l = p.match_small[s];
    out.pairs.emplace_back(transposed ? l : s, transposed ? s : l);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (const auto& [r, c] : out.pairs) out.total += m(r, c);
  return out;
}

Matching brute_force(const WeightMatrix& m) {
  const std::size_t k = std::min(m.rows(), m.cols());
  if (k > kBruteForceLimit) {
    throw std::invalid_argument(
        fmt::format("brute_force: {}x{} exceeds the enumeration limit", m.rows(), m.cols()));
  }
  Matching best;
  if (k == 0) return best;

  const bool transposed = m.rows() > m.cols();
  const std::size_t big = std::max(m.rows(), m.cols());
  const bool maximize = m.sense() == Sense::Maximize;

  std::vector<int> pick(k);
  std::vector<char> taken(big, 0);
  std::vector<std::pair<int, int>> pairs(k);
  bool have = false;

  auto evaluate = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      pairs[i] = transposed ? std::pair<int, int>{pick[i], static_cast<int>(i)}
                            : std::pair<int, int>{static_cast<int>(i), pick[i]};
    }
    std::sort(pairs.begin(), pairs.end());
    double total = 0.0;
    for (const auto& [r, c] : pairs) total += m(r, c);
    const bool better = !have || (maximize ? total > best.total : total < best.total) ||
                        (total == best.total && pairs < best.pairs);
    if (better) {
      best.pairs = pairs;
      best.total = total;
      have = true;
    }
  };

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      evaluate();
      return;
    }
    for (std::size_t j = 0; j < big; ++j) {
      if (taken[j]) continue;
      taken[j] = 1;
      pick[depth] = static_cast<int>(j);
      self(self, depth + 1);
      taken[j] = 0;
    }
  };
  recurse(recurse, 0);
  return best;
}

}  // namespace taxidisp
