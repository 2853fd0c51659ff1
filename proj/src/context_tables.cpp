#include "stpatc/context_tables.hpp"

namespace stpatc {

namespace {

bool is_relational_value(const std::string& v) {
  return !v.empty() && (v[0] == '<' || v[0] == '>' || v[0] == '=' || v[0] == '!');
}

std::vector<std::vector<std::string>> enumerate_all(
    const std::vector<ProcessModelVariable>& vars) {
  std::vector<std::vector<std::string>> values;
  for (const ProcessModelVariable& v : vars) values.push_back(v.domain.enumerate(v.name));
  return values;
}

ContextCombination make_combination(const std::vector<ProcessModelVariable>& vars,
                                    const std::vector<std::vector<std::string>>& values,
                                    const std::vector<int>& row) {
  ContextCombination c;
  for (std::size_t i = 0; i < vars.size(); ++i)
    c.assignments.emplace_back(vars[i].name, values[i][static_cast<std::size_t>(row[i])]);
  return c;
}

/// All size-r subsets of {0..limit-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int limit, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == r) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < limit; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::vector<ContextCombination> full_combinations(
    const std::vector<ProcessModelVariable>& vars) {
  std::vector<std::vector<std::string>> values = enumerate_all(vars);
  std::vector<ContextCombination> out;
  std::vector<int> row(vars.size(), 0);
  for (;;) {
    out.push_back(make_combination(vars, values, row));
    // increment mixed-radix counter, last variable fastest
    int i = static_cast<int>(vars.size()) - 1;
    for (; i >= 0; --i) {
      if (++row[static_cast<std::size_t>(i)] <
          static_cast<int>(values[static_cast<std::size_t>(i)].size()))
        break;
      row[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<ContextCombination> pairwise_reduce(
    const std::vector<ProcessModelVariable>& vars, int strength) {
  int n = static_cast<int>(vars.size());
  if (strength < 1 || strength > n)
    throw Error("covering-array strength must be between 1 and the variable count");
  std::vector<std::vector<std::string>> values = enumerate_all(vars);
  auto radix = [&](int col) { return static_cast<int>(values[static_cast<std::size_t>(col)].size()); };

  // Rows under construction; -1 marks a still-free slot from vertical growth.
  std::vector<std::vector<int>> rows;
  {
    std::vector<int> row(static_cast<std::size_t>(strength), 0);
    for (;;) {
      rows.push_back(row);
      int i = strength - 1;
      for (; i >= 0; --i) {
        if (++row[static_cast<std::size_t>(i)] < radix(i)) break;
        row[static_cast<std::size_t>(i)] = 0;
      }
      if (i < 0) break;
    }
  }

  for (int k = strength; k < n; ++k) {
    // Tuples to cover: every (strength-1)-subset of earlier columns plus
    // column k, with every value combination over those columns.
    std::vector<std::vector<int>> subs = subsets(k, strength - 1);
    for (std::vector<int>& s : subs) s.push_back(k);

    std::vector<std::vector<char>> covered(subs.size());
    std::vector<int> sizes(subs.size());
    for (std::size_t si = 0; si < subs.size(); ++si) {
      int total = 1;
      for (int col : subs[si]) total *= radix(col);
      sizes[si] = total;
      covered[si].assign(static_cast<std::size_t>(total), 0);
    }
    auto tuple_index = [&](std::size_t si, const std::vector<int>& row) {
      // returns -1 when the row has a free slot inside the subset
      int idx = 0;
      for (int col : subs[si]) {
        int v = row[static_cast<std::size_t>(col)];
        if (v < 0) return -1;
        idx = idx * radix(col) + v;
      }
      return idx;
    };
    auto mark_row = [&](const std::vector<int>& row) {
      for (std::size_t si = 0; si < subs.size(); ++si) {
        int idx = tuple_index(si, row);
        if (idx >= 0) covered[si][static_cast<std::size_t>(idx)] = 1;
      }
    };

    // Horizontal growth: extend every existing row with the value of column
    // k that covers the most still-uncovered tuples; ties keep declaration
    // order (first maximum wins).
    for (std::vector<int>& row : rows) {
      row.resize(static_cast<std::size_t>(k) + 1, -1);
      int best_value = 0, best_gain = -1;
      for (int v = 0; v < radix(k); ++v) {
        row[static_cast<std::size_t>(k)] = v;
        int gain = 0;
        for (std::size_t si = 0; si < subs.size(); ++si) {
          int idx = tuple_index(si, row);
          if (idx >= 0 && !covered[si][static_cast<std::size_t>(idx)]) ++gain;
        }
        if (gain > best_gain) {
          best_gain = gain;
          best_value = v;
        }
      }
      row[static_cast<std::size_t>(k)] = best_value;
      mark_row(row);
    }

    // Vertical growth: place each remaining tuple into a compatible row
    // (matching or free slots), else append a fresh row of free slots.
    for (std::size_t si = 0; si < subs.size(); ++si) {
      for (int idx = 0; idx < sizes[si]; ++idx) {
        if (covered[si][static_cast<std::size_t>(idx)]) continue;
        // decode idx into the subset's column values
        std::vector<int> assignment(subs[si].size());
        int rem = idx;
        for (int ci = static_cast<int>(subs[si].size()) - 1; ci >= 0; --ci) {
          int col = subs[si][static_cast<std::size_t>(ci)];
          assignment[static_cast<std::size_t>(ci)] = rem % radix(col);
          rem /= radix(col);
        }
        std::vector<int>* target = nullptr;
        for (std::vector<int>& row : rows) {
          bool fits = true;
          for (std::size_t ci = 0; ci < subs[si].size(); ++ci) {
            int cur = row[static_cast<std::size_t>(subs[si][ci])];
            if (cur != -1 && cur != assignment[ci]) {
              fits = false;
              break;
            }
          }
          if (fits) {
            target = &row;
            break;
          }
        }
        if (!target) {
          rows.emplace_back(static_cast<std::size_t>(k) + 1, -1);
          target = &rows.back();
        }
        for (std::size_t ci = 0; ci < subs[si].size(); ++ci)
          (*target)[static_cast<std::size_t>(subs[si][ci])] = assignment[ci];
        mark_row(*target);
      }
    }
  }

  // Free slots left by vertical growth become the first declared value.
  std::vector<ContextCombination> out;
  for (std::vector<int>& row : rows) {
    row.resize(static_cast<std::size_t>(n), -1);
    for (int& v : row)
      if (v < 0) v = 0;
    out.push_back(make_combination(vars, values, row));
  }
  return out;
}

std::string render_combination(const ContextCombination& cs) {
  std::string out;
  for (const auto& [name, value] : cs.assignments) {
    if (!out.empty()) out += ", ";
    out += name;
    if (!is_relational_value(value)) out += '=';
    out += value;
  }
  return out;
}

std::string timing_words(Timing t) {
  switch (t) {
    case Timing::AnyTime: return "any time";
    case Timing::TooEarly: return "too early";
    case Timing::TooLate: return "too late";
  }
  return "";
}

Ruca refine_uca(const ControlAction& ca, const ContextCombination& cs, std::string id) {
  if (cs.hazardous != ContextCombination::Hazardous::Yes)
    throw NotHazardousError("combination for '" + ca.name +
                            "' is not judged hazardous");
  Ruca r;
  r.id = std::move(id);
  r.action_id = ca.id;
  r.action_name = ca.name;
  r.combination = cs;
  if (cs.context == CombinationContext::Providing) {
    if (!cs.timing)
      throw Error("hazardous Providing combination for '" + ca.name +
                  "' has no timing");
    r.text = ca.name + " provided " + timing_words(*cs.timing) +
             " is hazardous when " + render_combination(cs) + " occurred.";
  } else {
    r.text = ca.name + " Not provided is hazardous when " + render_combination(cs) +
             " occurred.";
  }
  return r;
}

Rssr refine_ssr(const Ruca& r, std::string id) {
  Rssr s;
  s.id = std::move(id);
  s.source = r;
  const ContextCombination& cs = r.combination;
  if (cs.context == CombinationContext::Providing) {
    s.text = r.action_name + " must Not be Provided " + timing_words(*cs.timing) +
             " when " + render_combination(cs) + " occurred.";
  } else {
    s.text = r.action_name + " must be Provided when " + render_combination(cs) +
             " occurred.";
  }
  return s;
}

}  // namespace stpatc
