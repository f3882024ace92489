// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "ccpush/subsets.hpp"
#include "ccpush/system_config.hpp"

namespace ccpush {

using BitIndex = std::uint32_t;

/// Packed bit sequence; bit i lives in word i/64 at position i%64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::int64_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::int64_t size() const { return size_; }
    bool get(std::int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::int64_t i, bool value) {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }
    void flip(std::int64_t i, bool value) {
        words_[i >> 6] ^= std::uint64_t{value} << (i & 63);
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    std::int64_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct Content {
    int id = 0;
    BitVec bits;
};

/// Seed-generated content V_id of F bits.
Content make_content(int id, std::int64_t content_bits, std::uint64_t seed);

struct ContentLibrary {
    std::vector<Content> contents;
    std::int64_t content_bits = 0;
};

/// All N contents, each with its own derived seed.
ContentLibrary make_library(const SystemConfig& cfg, std::uint64_t seed);

/// Placement-phase output: per (user, content), the sorted set of cached bit
/// indices. Every pair holds exactly round(M*F/N) indices.
class PlacementState {
public:
    PlacementState(int num_users, int num_contents, std::int64_t content_bits,
                   std::int64_t quota)
        : num_users_(num_users),
          num_contents_(num_contents),
          content_bits_(content_bits),
          quota_(quota),
          cached_(static_cast<std::size_t>(num_users) * num_contents) {}

    int num_users() const { return num_users_; }
    int num_contents() const { return num_contents_; }
    std::int64_t content_bits() const { return content_bits_; }
    std::int64_t quota() const { return quota_; }

    const std::vector<BitIndex>& cached(int user, int content) const {
        return cached_[index(user, content)];
    }
    std::vector<BitIndex>& cached(int user, int content) {
        return cached_[index(user, content)];
    }

    /// Per-bit mask of the users caching each bit of `content`.
    std::vector<UserMask> holder_masks(int content) const;

private:
    std::size_t index(int user, int content) const {
        return static_cast<std::size_t>(user) * num_contents_ + content;
    }

    int num_users_;
    int num_contents_;
    std::int64_t content_bits_;
    std::int64_t quota_;
    std::vector<std::vector<BitIndex>> cached_;
};

/// Random placement: each (user, content) pair prefetches round(M*F/N)
/// distinct bits, uniformly without replacement, independently across pairs.
/// Throws std::invalid_argument when M > 0 rounds to a zero quota.
PlacementState make_placement(const SystemConfig& cfg, std::uint64_t seed);

/// Bit indices of `content` cached by every user in `holders` and by no user
/// outside it (the exact-pattern partition cell).
std::vector<BitIndex> segment(const PlacementState& placement, int content,
                              UserMask holders);

struct RequestVector {
    std::vector<int> d;  ///< d[k] = content index requested by user k
};

/// Uniform i.i.d. requests over the N contents.
RequestVector draw_requests(const SystemConfig& cfg, std::uint64_t seed);

/// K pairwise-distinct requests, uniform over the size-K content subsets;
/// needs N >= K.
RequestVector draw_distinct_requests(const SystemConfig& cfg, std::uint64_t seed);

/// One coded transmission: payload is the bitwise XOR of the per-receiver
/// segments V_{d_k, U\{k}}, each zero-padded to the longest.
struct Transmission {
    UserMask receivers = 0;
    BitVec payload;
    std::int64_t realized_size = 0;  ///< payload length in bits
    /// Parallel to the receivers in increasing user order: the bit-index list
    /// of the segment carried for that receiver.
    std::vector<std::vector<BitIndex>> segments;

    const std::vector<BitIndex>& segment_for(int user) const;
};

struct DeliveryPlan {
    int num_users = 0;
    std::vector<Transmission> transmissions;  ///< delivery_subset_order()

    std::int64_t total_bits() const;
};

/// Delivery phase of the coded scheme: for every subset U with |U| >= 2 the
/// XOR transmission, for every singleton the unicast of the nobody-cached
/// bits of the request.
DeliveryPlan build_delivery_plan(const ContentLibrary& library,
                                 const PlacementState& placement,
                                 const RequestVector& requests);

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reconstructs the full F bits of user's request from its cache plus the
/// plan payloads; XOR terms of other receivers are cancelled with cached
/// segments. Throws DecodeError if any bit is unrecoverable.
BitVec decode_user(const DeliveryPlan& plan, const PlacementState& placement,
                   const ContentLibrary& library, const RequestVector& requests,
                   int user);

/// Line-oriented dumps (one segment per line: user content holder-mask
/// indices...) for golden-file comparisons.
void dump_placement(const PlacementState& placement, std::ostream& out);
void dump_plan(const DeliveryPlan& plan, const RequestVector& requests,
               std::ostream& out);

}  // namespace ccpush
