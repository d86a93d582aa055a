#pragma once

#include <string>
#include <vector>

#include "simplexgeo/error.hpp"

namespace simplexgeo {

/// A bijection of {1, ..., m}, stored as its 1-based image list.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
      if (v < 1 || v > size() || seen[static_cast<std::size_t>(v - 1)]) {
        throw GeometryError(ErrorKind::InvalidPermutation, "image list is not a bijection of 1.." + std::to_string(size()));
      }
      seen[static_cast<std::size_t>(v - 1)] = true;
    }
  }

  static Permutation identity(int m) {
    std::vector<int> im(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) im[static_cast<std::size_t>(i)] = i + 1;
    return Permutation(std::move(im));
  }

  static Permutation transposition(int m, int a, int b) {
    Permutation p = identity(m);
    p.check(a);
    p.check(b);
    std::swap(p.images_[static_cast<std::size_t>(a - 1)], p.images_[static_cast<std::size_t>(b - 1)]);
    return p;
  }

  int size() const { return static_cast<int>(images_.size()); }

  int operator()(int i) const {
    check(i);
    return images_[static_cast<std::size_t>(i - 1)];
  }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>(images_[static_cast<std::size_t>(i - 1)] - 1)] = i;
    return Permutation(std::move(inv));
  }

  /// (*this)(inner(i)).
  Permutation after(const Permutation& inner) const {
    if (inner.size() != size()) throw GeometryError(ErrorKind::DimensionMismatch, "permutation sizes differ");
    std::vector<int> out(images_.size());
    for (int i = 1; i <= size(); ++i) out[static_cast<std::size_t>(i - 1)] = (*this)(inner(i));
    return Permutation(std::move(out));
  }

  bool is_identity() const {
    for (int i = 1; i <= size(); ++i) {
      if (images_[static_cast<std::size_t>(i - 1)] != i) return false;
    }
    return true;
  }

  const std::vector<int>& images() const { return images_; }

  bool operator==(const Permutation&) const = default;

 private:
  void check(int i) const {
    if (i < 1 || i > size()) {
      throw GeometryError(ErrorKind::IndexOutOfRange,
                          "permutation argument " + std::to_string(i) + " outside 1.." + std::to_string(size()));
    }
  }

  std::vector<int> images_;
};

/// All m! permutations of {1..m} in lexicographic order.
std::vector<Permutation> all_permutations(int m);

}  // namespace simplexgeo
