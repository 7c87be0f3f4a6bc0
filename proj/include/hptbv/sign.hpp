#pragma once

#include <cstddef>
#include <vector>

namespace hptbv {

// Single place where Koszul signs are decided. Everything else (wedge, bracket,
// pairing, symmetric words, transfer) calls into here.

/// Sign of reordering items with the given parities: the result lists
/// items[order[0]], items[order[1]], ... Each inverted pair of odd items
/// contributes -1.
int koszul_sign(const std::vector<int>& parities, const std::vector<int>& order);

/// Plain permutation sign (all items treated as odd).
int permutation_sign(const std::vector<int>& order);

/// Sign for moving an item of parity `a` past a block of total parity `b`.
inline int swap_sign(int a, int b) { return ((a & 1) && (b & 1)) ? -1 : 1; }

inline int parity(int degree) { return degree & 1; }

}  // namespace hptbv
