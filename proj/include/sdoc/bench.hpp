#pragma once

// Digest-operation counts for registering and verifying a flat document of n
// items with d disclosed, under the salted-digest scheme ("proposal") and
// under the document-as-Merkle-tree practice ("known practice").
//
// Counts are measured by running the real digest code under a
// DigestCountScope, never computed from the closed forms. Signature
// operations and the signed-digest hash are excluded.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sdoc {

/// Exact non-negative rational, kept in lowest terms.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational of(std::uint64_t num, std::uint64_t den);
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const; // "3/2", or "6" when whole

    friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Scheme { proposal, known_practice };
enum class Phase { registration, verification };

std::string_view scheme_name(Scheme s) noexcept;
std::string_view phase_name(Phase p) noexcept;

struct CostReport {
    Scheme scheme = Scheme::proposal;
    Phase phase = Phase::registration;
    std::size_t n = 0;
    std::size_t d = 0;
    std::uint64_t digest_ops = 0;
    Rational weighted_cost; // a hash over k concatenated digests weighs k/2, anything else 1
};

struct CostPair {
    CostReport registration;
    CostReport verification;
};

/// Throws invalid_argument unless 1 <= d <= n.
CostPair count_proposal(std::size_t n, std::size_t d);
CostPair count_known_practice(std::size_t n, std::size_t d);

struct CostComparison {
    CostPair proposal;
    CostPair known_practice;
};

/// Both schemes with measured weighted costs side by side.
CostComparison weighted_costs(std::size_t n, std::size_t d);

/// Plain-text table, one row per (n, d).
std::string format_table(const std::vector<CostComparison>& rows);
std::string format_csv(const std::vector<CostComparison>& rows);

} // namespace sdoc
