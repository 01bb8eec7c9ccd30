#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "bitomo/errors.hpp"

namespace bitomo {

/// A partition of {0, ..., n-1} into nonempty blocks.  Canonical form:
/// elements ascending within each block, blocks ordered by smallest element.
using SetPartition = std::vector<std::vector<int>>;

/// Block sizes of a set partition, sorted descending.
inline std::vector<int> shape_of(const SetPartition& partition) {
  std::vector<int> shape;
  shape.reserve(partition.size());
  for (const auto& block : partition) shape.push_back(static_cast<int>(block.size()));
  std::sort(shape.begin(), shape.end(), std::greater<int>());
  return shape;
}

/// "2+1+1" style rendering of a shape (sizes joined descending).
inline std::string shape_string(std::vector<int> shape) {
  std::sort(shape.begin(), shape.end(), std::greater<int>());
  std::string out;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += '+';
    out += std::to_string(shape[i]);
  }
  return out;
}

/// All set partitions of {0, ..., n-1} in canonical form.  Generated by
/// inserting element i into each existing block or a fresh one, which yields
/// the canonical ordering directly.
inline std::vector<SetPartition> all_set_partitions(int n) {
  if (n < 0) throw DomainError("set partitions need n >= 0");
  std::vector<SetPartition> result;
  SetPartition current;
  auto recurse = [&](auto&& self, int next) -> void {
    if (next == n) {
      result.push_back(current);
      return;
    }
    const std::size_t block_count = current.size();
    for (std::size_t b = 0; b < block_count; ++b) {
      current[b].push_back(next);
      self(self, next + 1);
      current[b].pop_back();
    }
    current.push_back({next});
    self(self, next + 1);
    current.pop_back();
  };
  recurse(recurse, 0);
  return result;
}

/// Set partitions of {0, ..., n-1} whose blocks all have size 1 or 2.
inline std::vector<SetPartition> pair_partitions(int n) {
  std::vector<SetPartition> result;
  for (auto& partition : all_set_partitions(n)) {
    bool ok = true;
    for (const auto& block : partition) {
      if (block.size() > 2) {
        ok = false;
        break;
      }
    }
    if (ok) result.push_back(std::move(partition));
  }
  return result;
}

/// Integer partitions of n, each sorted descending, in lexicographically
/// descending order ({n} first, {1,...,1} last).
inline std::vector<std::vector<int>> integer_partitions(int n) {
  if (n < 0) throw DomainError("integer partitions need n >= 0");
  std::vector<std::vector<int>> result;
  std::vector<int> current;
  auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      result.push_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      self(self, remaining - part, part);
      current.pop_back();
    }
  };
  recurse(recurse, n, n);
  return result;
}

}  // namespace bitomo
