#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mk {

using Element = std::int32_t;

/// An equivalence relation on {0..size-1} stored as a canonical block index:
/// element 0 is in block 0, and each element that starts a new block gets the
/// next unused id. Two partitions are equal iff their block vectors are.
class Congruence {
public:
  Congruence() = default;

  /// Canonicalizes an arbitrary labelling (equal labels = same block).
  static Congruence from_labels(std::span<const Element> labels);
  static Congruence from_blocks(int size, const std::vector<std::vector<Element>> &blocks);
  static Congruence diagonal(int size);
  static Congruence total(int size);

  int size() const { return static_cast<int>(block_.size()); }
  int block_count() const { return blocks_; }
  Element block_of(Element x) const { return block_[static_cast<std::size_t>(x)]; }
  bool related(Element x, Element y) const { return block_of(x) == block_of(y); }
  std::span<const Element> block_index() const { return block_; }

  bool is_diagonal() const { return blocks_ == size(); }
  bool is_total() const { return blocks_ <= 1; }

  /// Blocks as sorted element lists, ordered by least element.
  std::vector<std::vector<Element>> blocks() const;
  /// Least element of every block, in block order.
  std::vector<Element> representatives() const;

  /// this ⊆ other as relations.
  bool leq(const Congruence &other) const;

  std::string to_string() const;

  friend bool operator==(const Congruence &, const Congruence &) = default;
  /// Canonical ordering: finer partitions (more blocks) first, then
  /// lexicographic on the block index.
  friend bool operator<(const Congruence &a, const Congruence &b);

private:
  std::vector<Element> block_;
  int blocks_ = 0;
};

} // namespace mk
