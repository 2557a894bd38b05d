#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerlint/formula/evaluator.hpp"
#include "ledgerlint/formula/parser.hpp"
#include "ledgerlint/sheet.hpp"

namespace ledgerlint::formula {

namespace detail {

struct DependencyGraph {
  std::vector<CellAddress> cells;             // formula cells, row-major
  std::vector<std::vector<std::size_t>> out;  // cell -> formula cells it reads
};

inline DependencyGraph build_graph(const Sheet& sheet) {
  DependencyGraph g;
  std::map<CellAddress, std::size_t> index;
  for (const auto& [addr, cell] : sheet.cells()) {
    if (cell.formula) {
      index.emplace(addr, g.cells.size());
      g.cells.push_back(addr);
    }
  }
  g.out.resize(g.cells.size());
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    auto& edges = g.out[i];
    walk(sheet.find(g.cells[i])->formula, [&](const Node& n, const Node*) {
      if (auto r = n.as<CellRef>()) {
        if (auto it = index.find(r->cell); it != index.end()) edges.push_back(it->second);
      } else if (auto rr = n.as<RangeRef>()) {
        const CellRange& range = rr->range;
        if (range.area() <= static_cast<long long>(index.size())) {
          for (int row = range.first.row; row <= range.last.row; ++row)
            for (int col = range.first.column; col <= range.last.column; ++col)
              if (auto it = index.find({col, row}); it != index.end()) edges.push_back(it->second);
        } else {
          for (const auto& [addr, j] : index)
            if (range.contains(addr)) edges.push_back(j);
        }
      }
    });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return g;
}

// Iterative Tarjan. Components come out dependencies-first, which is an
// evaluation order for everything outside a cycle.
inline std::vector<std::vector<std::size_t>> strongly_connected(const DependencyGraph& g) {
  const std::size_t n = g.cells.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnvisited) continue;
    call.push_back({root, 0});
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.node;
      if (f.next_edge < g.out[v].size()) {
        const std::size_t w = g.out[v][f.next_edge++];
        if (order[w] == kUnvisited) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        std::vector<std::size_t> comp;
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
    }
  }
  return components;
}

// Shortest path start -> ... -> start inside one component, as "A1 -> B1 -> A1".
inline std::string cycle_path(const DependencyGraph& g, const std::vector<std::size_t>& comp, std::size_t start) {
  std::map<std::size_t, std::size_t> parent;
  std::deque<std::size_t> queue{start};
  std::size_t closing = static_cast<std::size_t>(-1);
  while (!queue.empty() && closing == static_cast<std::size_t>(-1)) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : g.out[v]) {
      if (!std::binary_search(comp.begin(), comp.end(), w)) continue;
      if (w == start) {
        closing = v;
        break;
      }
      if (parent.emplace(w, v).second) queue.push_back(w);
    }
  }
  std::vector<std::size_t> path{start};
  for (std::size_t v = closing; v != start; v = parent.at(v)) path.push_back(v);
  std::string out = g.cells[start].str();
  for (auto it = path.rbegin(); it != path.rend(); ++it) out += " -> " + g.cells[*it].str();
  return out;
}

}  // namespace detail

/// Computes every cell's value and stores the results on the sheet.
///
/// Cells on a circular reference (including a cell that reads itself) get
/// ErrorValue(Cycle) naming a path through them; cells that merely depend
/// on a cycle, or on any other error, get ErrorValue(Propagated).
inline void evaluate_sheet(Sheet& sheet, EvalOptions options = {}) {
  Evaluator::ValueMap values;
  for (const auto& [addr, cell] : sheet.cells())
    if (!cell.formula) values.emplace(addr, cell.literal);

  const auto graph = detail::build_graph(sheet);
  const Evaluator ev(sheet, values, options);
  constexpr std::size_t kPathLimit = 64;
  for (const auto& comp : detail::strongly_connected(graph)) {
    const std::size_t first = comp.front();
    const bool self_loop = std::binary_search(graph.out[first].begin(), graph.out[first].end(), first);
    if (comp.size() == 1 && !self_loop) {
      values.emplace(graph.cells[first], ev.evaluate(*sheet.find(graph.cells[first])->formula));
      continue;
    }
    for (std::size_t v : comp) {
      const std::string msg =
          comp.size() <= kPathLimit
              ? "circular reference " + detail::cycle_path(graph, comp, v)
              : "circular reference among " + std::to_string(comp.size()) + " cells including " + graph.cells[first].str();
      values.emplace(graph.cells[v], ErrorValue{ErrorKind::Cycle, msg});
    }
  }
  sheet.store_values(std::move(values), options.mode);
}

/// Evaluates a tree against `sheet`, computing the sheet first if it has not
/// been evaluated under the same mode.
inline CellValue evaluate(const Node& node, Sheet& sheet, EvalOptions options = {}) {
  if (!sheet.evaluated() || sheet.evaluated_mode() != options.mode) evaluate_sheet(sheet, options);
  return Evaluator(sheet, sheet.values(), options).evaluate(node);
}

// Parses and evaluates; syntax errors come back as ErrorValue(Parse).
inline CellValue evaluate(std::string_view text, Sheet& sheet, EvalOptions options = {}) {
  NodePtr node;
  try {
    node = parse(text);
  } catch (const SyntaxError& e) {
    return ErrorValue{ErrorKind::Parse, e.what()};
  }
  return evaluate(*node, sheet, options);
}

inline CellValue evaluate(std::string_view text) {
  Sheet empty;
  return evaluate(text, empty);
}

}  // namespace ledgerlint::formula
