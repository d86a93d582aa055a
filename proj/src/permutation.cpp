#include "simplexgeo/permutation.hpp"

#include <algorithm>

namespace simplexgeo {

std::vector<Permutation> all_permutations(int m) {
  std::vector<int> im(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) im[static_cast<std::size_t>(i)] = i + 1;
  std::vector<Permutation> out;
  do {
    out.emplace_back(im);
  } while (std::next_permutation(im.begin(), im.end()));
  return out;
}

}  // namespace simplexgeo
