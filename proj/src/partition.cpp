#include "mk/partition.hpp"

#include <map>
#include <sstream>

#include "mk/error.hpp"

namespace mk {

Congruence Congruence::from_labels(std::span<const Element> labels) {
  Congruence c;
  c.block_.resize(labels.size());
  std::map<Element, Element> fresh;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = fresh.try_emplace(labels[i], static_cast<Element>(fresh.size()));
    c.block_[i] = it->second;
  }
  c.blocks_ = static_cast<int>(fresh.size());
  return c;
}

Congruence Congruence::from_blocks(int size, const std::vector<std::vector<Element>> &blocks) {
  std::vector<Element> labels(static_cast<std::size_t>(size), -1);
  Element id = 0;
  for (const auto &block : blocks) {
    for (Element x : block) {
      if (x < 0 || x >= size)
        throw DomainError("block element " + std::to_string(x) + " outside carrier of size " +
                          std::to_string(size));
      if (labels[static_cast<std::size_t>(x)] != -1)
        throw DomainError("element " + std::to_string(x) + " listed in two blocks");
      labels[static_cast<std::size_t>(x)] = id;
    }
    ++id;
  }
  for (int x = 0; x < size; ++x)
    if (labels[static_cast<std::size_t>(x)] == -1)
      throw DomainError("element " + std::to_string(x) + " missing from every block");
  return from_labels(labels);
}

Congruence Congruence::diagonal(int size) {
  std::vector<Element> labels(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i)
    labels[static_cast<std::size_t>(i)] = i;
  return from_labels(labels);
}

Congruence Congruence::total(int size) {
  return from_labels(std::vector<Element>(static_cast<std::size_t>(size), 0));
}

std::vector<std::vector<Element>> Congruence::blocks() const {
  std::vector<std::vector<Element>> out(static_cast<std::size_t>(blocks_));
  for (std::size_t x = 0; x < block_.size(); ++x)
    out[static_cast<std::size_t>(block_[x])].push_back(static_cast<Element>(x));
  return out;
}

std::vector<Element> Congruence::representatives() const {
  std::vector<Element> reps(static_cast<std::size_t>(blocks_), -1);
  for (std::size_t x = 0; x < block_.size(); ++x)
    if (reps[static_cast<std::size_t>(block_[x])] == -1)
      reps[static_cast<std::size_t>(block_[x])] = static_cast<Element>(x);
  return reps;
}

bool Congruence::leq(const Congruence &other) const {
  // Each of our blocks must map into a single block of `other`.
  std::vector<Element> image(static_cast<std::size_t>(blocks_), -1);
  for (std::size_t x = 0; x < block_.size(); ++x) {
    auto &slot = image[static_cast<std::size_t>(block_[x])];
    const Element target = other.block_[x];
    if (slot == -1)
      slot = target;
    else if (slot != target)
      return false;
  }
  return true;
}

std::string Congruence::to_string() const {
  std::ostringstream out;
  bool first_block = true;
  for (const auto &block : blocks()) {
    if (!first_block)
      out << " | ";
    first_block = false;
    for (std::size_t i = 0; i < block.size(); ++i)
      out << (i ? " " : "") << block[i];
  }
  return out.str();
}

bool operator<(const Congruence &a, const Congruence &b) {
  if (a.blocks_ != b.blocks_)
    return a.blocks_ > b.blocks_;
  return a.block_ < b.block_;
}

} // namespace mk
