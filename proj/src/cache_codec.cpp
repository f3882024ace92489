// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/cache_codec.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "ccpush/rng.hpp"

namespace ccpush {

namespace {

constexpr std::uint64_t kContentStreamTag = 0x636f6e74656e74ULL;   // "content"
constexpr std::uint64_t kPlacementStreamTag = 0x706c616365ULL;     // "place"

// quota distinct indices from 0..population-1, uniform without replacement
// (partial Fisher-Yates), returned sorted.
std::vector<BitIndex> sample_indices(std::int64_t population, std::int64_t quota,
                                     Rng& rng) {
    std::vector<BitIndex> pool(population);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::int64_t i = 0; i < quota; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(rng.below(population - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(quota);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

Content make_content(int id, std::int64_t content_bits, std::uint64_t seed) {
    Content content{id, BitVec(content_bits)};
    Rng rng(seed);
    for (auto& word : content.bits.words()) word = rng.next_u64();
    const int tail = static_cast<int>(content_bits & 63);
    if (tail != 0 && !content.bits.words().empty())
        content.bits.words().back() &= (std::uint64_t{1} << tail) - 1;
    return content;
}

ContentLibrary make_library(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ContentLibrary library;
    library.content_bits = cfg.content_bits;
    library.contents.reserve(cfg.num_contents);
    for (int n = 0; n < cfg.num_contents; ++n)
        library.contents.push_back(
            make_content(n, cfg.content_bits, derive_seed(seed, kContentStreamTag + n)));
    return library;
}

std::vector<UserMask> PlacementState::holder_masks(int content) const {
    std::vector<UserMask> masks(content_bits_, 0);
    for (int user = 0; user < num_users_; ++user) {
        const UserMask bit = UserMask{1} << user;
        for (BitIndex idx : cached(user, content)) masks[idx] |= bit;
    }
    return masks;
}

PlacementState make_placement(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const std::int64_t quota = cfg.placement_quota();
    if (cfg.cache_contents > 0.0 && quota == 0)
        throw std::invalid_argument(
            "make_placement: degenerate quota, M*F/N rounds to zero bits while M > 0");
    PlacementState placement(cfg.num_users, cfg.num_contents, cfg.content_bits, quota);
    for (int user = 0; user < cfg.num_users; ++user) {
        for (int content = 0; content < cfg.num_contents; ++content) {
            Rng rng(derive_seed(seed, kPlacementStreamTag +
                                          (static_cast<std::uint64_t>(user) << 24) + content));
            if (quota > 0)
                placement.cached(user, content) = sample_indices(cfg.content_bits, quota, rng);
        }
    }
    return placement;
}

std::vector<BitIndex> segment(const PlacementState& placement, int content,
                              UserMask holders) {
    const std::vector<UserMask> masks = placement.holder_masks(content);
    std::vector<BitIndex> indices;
    for (std::int64_t i = 0; i < placement.content_bits(); ++i)
        if (masks[i] == holders) indices.push_back(static_cast<BitIndex>(i));
    return indices;
}

RequestVector draw_requests(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    RequestVector requests;
    requests.d.resize(cfg.num_users);
    for (int& request : requests.d)
        request = static_cast<int>(rng.below(cfg.num_contents));
    return requests;
}

RequestVector draw_distinct_requests(const SystemConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (cfg.num_users > cfg.num_contents)
        throw std::invalid_argument(
            "draw_distinct_requests: distinct requests need N >= K");
    Rng rng(seed);
    std::vector<int> pool(cfg.num_contents);
    std::iota(pool.begin(), pool.end(), 0);
    RequestVector requests;
    requests.d.resize(cfg.num_users);
    for (int k = 0; k < cfg.num_users; ++k) {
        const std::int64_t j = k + static_cast<std::int64_t>(rng.below(pool.size() - k));
        std::swap(pool[k], pool[j]);
        requests.d[k] = pool[k];
    }
    return requests;
}

const std::vector<BitIndex>& Transmission::segment_for(int user) const {
    const std::vector<int> users = mask_users(receivers);
    for (std::size_t i = 0; i < users.size(); ++i)
        if (users[i] == user) return segments[i];
    throw std::out_of_range("Transmission::segment_for: user " + std::to_string(user) +
                            " is not a receiver");
}

std::int64_t DeliveryPlan::total_bits() const {
    std::int64_t total = 0;
    for (const Transmission& tx : transmissions) total += tx.realized_size;
    return total;
}

DeliveryPlan build_delivery_plan(const ContentLibrary& library,
                                 const PlacementState& placement,
                                 const RequestVector& requests) {
    const int num_users = placement.num_users();
    if (static_cast<int>(requests.d.size()) != num_users)
        throw std::invalid_argument("build_delivery_plan: request vector length != K");
    if (num_users > 20)
        throw std::invalid_argument(
            "build_delivery_plan: K > 20 needs 2^K pattern tables per content");

    // Exact-pattern partition per content, computed once: pattern_indices[n]
    // maps holder mask -> sorted bit indices of content n held by exactly
    // that user set.
    const std::size_t mask_space = std::size_t{1} << num_users;
    std::vector<std::vector<std::vector<BitIndex>>> pattern_indices(
        placement.num_contents());
    std::vector<bool> partitioned(placement.num_contents(), false);
    auto patterns_of = [&](int content) -> const std::vector<std::vector<BitIndex>>& {
        if (!partitioned[content]) {
            auto& table = pattern_indices[content];
            table.resize(mask_space);
            const std::vector<UserMask> masks = placement.holder_masks(content);
            for (std::int64_t i = 0; i < placement.content_bits(); ++i)
                table[masks[i]].push_back(static_cast<BitIndex>(i));
            partitioned[content] = true;
        }
        return pattern_indices[content];
    };

    DeliveryPlan plan;
    plan.num_users = num_users;
    for (UserMask mask : delivery_subset_order(num_users)) {
        Transmission tx;
        tx.receivers = mask;
        const std::vector<int> users = mask_users(mask);
        std::int64_t payload_bits = 0;
        for (int user : users) {
            const UserMask others = mask & ~(UserMask{1} << user);
            // Singletons carry the nobody-cached bits of the request; the
            // receiver already holds everything cached anywhere it appears.
            const auto& seg = patterns_of(requests.d[user])[others];
            payload_bits = std::max<std::int64_t>(payload_bits,
                                                  static_cast<std::int64_t>(seg.size()));
            tx.segments.push_back(seg);
        }
        tx.payload = BitVec(payload_bits);
        for (std::size_t r = 0; r < users.size(); ++r) {
            const BitVec& content = library.contents[requests.d[users[r]]].bits;
            const auto& seg = tx.segments[r];
            for (std::size_t p = 0; p < seg.size(); ++p)
                tx.payload.flip(static_cast<std::int64_t>(p), content.get(seg[p]));
        }
        tx.realized_size = payload_bits;
        plan.transmissions.push_back(std::move(tx));
    }
    return plan;
}

BitVec decode_user(const DeliveryPlan& plan, const PlacementState& placement,
                   const ContentLibrary& library, const RequestVector& requests,
                   int user) {
    const std::int64_t content_bits = placement.content_bits();
    const int request = requests.d[user];

    // The user's cache as bitmaps, for O(1) membership checks while
    // cancelling XOR terms.
    std::vector<BitVec> cache_map(placement.num_contents());
    for (int content = 0; content < placement.num_contents(); ++content) {
        cache_map[content] = BitVec(content_bits);
        for (BitIndex idx : placement.cached(user, content)) cache_map[content].set(idx, true);
    }

    BitVec decoded(content_bits);
    BitVec have(content_bits);
    for (BitIndex idx : placement.cached(user, request)) {
        decoded.set(idx, library.contents[request].bits.get(idx));
        have.set(idx, true);
    }

    for (const Transmission& tx : plan.transmissions) {
        if ((tx.receivers & (UserMask{1} << user)) == 0) continue;
        const std::vector<int> users = mask_users(tx.receivers);
        std::size_t own_slot = 0;
        while (users[own_slot] != user) ++own_slot;
        const auto& own_segment = tx.segments[own_slot];
        for (std::size_t p = 0; p < own_segment.size(); ++p) {
            bool bit = tx.payload.get(static_cast<std::int64_t>(p));
            for (std::size_t r = 0; r < users.size(); ++r) {
                if (r == own_slot || p >= tx.segments[r].size()) continue;
                const int other_request = requests.d[users[r]];
                const BitIndex other_idx = tx.segments[r][p];
                if (!cache_map[other_request].get(other_idx))
                    throw DecodeError("decode_user: user " + std::to_string(user) +
                                      " lacks a cached bit needed to cancel an XOR term");
                bit ^= library.contents[other_request].bits.get(other_idx);
            }
            decoded.set(own_segment[p], bit);
            have.set(own_segment[p], true);
        }
    }

    for (std::int64_t i = 0; i < content_bits; ++i)
        if (!have.get(i))
            throw DecodeError("decode_user: bit " + std::to_string(i) +
                              " of the request is unrecoverable");
    return decoded;
}

void dump_placement(const PlacementState& placement, std::ostream& out) {
    for (int user = 0; user < placement.num_users(); ++user) {
        for (int content = 0; content < placement.num_contents(); ++content) {
            out << user << ' ' << content << ' ' << (UserMask{1} << user);
            for (BitIndex idx : placement.cached(user, content)) out << ' ' << idx;
            out << '\n';
        }
    }
}

void dump_plan(const DeliveryPlan& plan, const RequestVector& requests,
               std::ostream& out) {
    for (const Transmission& tx : plan.transmissions) {
        const std::vector<int> users = mask_users(tx.receivers);
        for (std::size_t r = 0; r < users.size(); ++r) {
            const UserMask holders = tx.receivers & ~(UserMask{1} << users[r]);
            out << users[r] << ' ' << requests.d[users[r]] << ' ' << holders;
            for (BitIndex idx : tx.segments[r]) out << ' ' << idx;
            out << '\n';
        }
    }
}

}  // namespace ccpush
