// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace ccpush {

/// Receiver sets are bitmasks over user indices 0..K-1.
using UserMask = std::uint32_t;

inline int mask_size(UserMask mask) { return std::popcount(mask); }

inline std::vector<int> mask_users(UserMask mask) {
    std::vector<int> users;
    for (int k = 0; mask != 0; ++k, mask >>= 1)
        if (mask & 1u) users.push_back(k);
    return users;
}

/// All nonempty user subsets in delivery order: decreasing cardinality, then
/// lexicographic on the sorted member list. This is the transmission order of
/// the delivery phase and the row order of every per-transmission array.
inline std::vector<UserMask> delivery_subset_order(int num_users) {
    std::vector<UserMask> order;
    order.reserve((std::size_t{1} << num_users) - 1);
    for (int size = num_users; size >= 1; --size) {
        std::vector<int> comb(size);
        for (int i = 0; i < size; ++i) comb[i] = i;
        for (;;) {
            UserMask mask = 0;
            for (int user : comb) mask |= UserMask{1} << user;
            order.push_back(mask);
            int i = size - 1;
            while (i >= 0 && comb[i] == num_users - size + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return order;
}

}  // namespace ccpush
