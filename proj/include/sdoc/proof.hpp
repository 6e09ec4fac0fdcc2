#pragma once

#include "sdoc/hash.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdoc {

/// Side on which a step's digest is concatenated while folding to the root.
enum class Side { left, right };

std::string_view side_name(Side s) noexcept;

struct ProofStep {
    Side position = Side::left;
    Digest digest;

    friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

/// Steps from a leaf up to the Merkle root, nearest level first.
using SubtreeProof = std::vector<ProofStep>;

/// Where a Merkle root is anchored.
struct AnchorSpec {
    std::string subsystem;          // "local" or "ethereum"
    std::string network;
    std::string contract;
    std::string contract_address;
    std::uint64_t block = 0;

    friend bool operator==(const AnchorSpec&, const AnchorSpec&) = default;
};

inline constexpr std::string_view subsystem_local = "local";
inline constexpr std::string_view subsystem_ethereum = "ethereum";

struct ProofObject {
    AnchorSpec spec;
    SubtreeProof subtree;

    friend bool operator==(const ProofObject&, const ProofObject&) = default;
};

} // namespace sdoc
