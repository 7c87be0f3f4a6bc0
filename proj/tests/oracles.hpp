#pragma once

// Independent reference computations used only by the tests.

#include "hptbv/scalar.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace oracle {

// Sign of a permutation by counting inversions.
inline int inversion_sign(const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

// e^{i1} ∧ ... ∧ e^{ik} as (sign, sorted list) by bubble sort; sign 0 on repeats.
inline std::pair<int, std::vector<int>> sort_generators(std::vector<int> idx) {
    int sign = 1;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) return {0, idx};
    return {sign, idx};
}

inline unsigned mask_of(const std::vector<int>& idx) {
    unsigned m = 0;
    for (int i : idx) m |= 1u << i;
    return m;
}

inline std::vector<int> indices_of(unsigned m) {
    std::vector<int> v;
    for (int i = 0; m >> i; ++i)
        if ((m >> i) & 1u) v.push_back(i);
    return v;
}

inline hptbv::Scalar small_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    hptbv::Scalar q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

// Cross product on Q^3.
inline std::vector<hptbv::Scalar> cross(const std::vector<hptbv::Scalar>& a, const std::vector<hptbv::Scalar>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace oracle
