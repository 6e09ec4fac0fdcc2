#pragma once

#include "sdoc/hash.hpp"
#include "sdoc/proof.hpp"

#include <span>
#include <vector>

namespace sdoc {

/// Merkle tree over a batch of signed-document digests.
///
/// Parents are h'(left || right) over raw digests. An odd node at the end of
/// a level is carried up unchanged, so n leaves always take n - 1 hashes.
/// Leaves and interior nodes share one hash with no domain separation.
class MerkleBatch {
public:
    /// Throws empty_batch.
    explicit MerkleBatch(std::vector<Digest> leaves);

    std::span<const Digest> leaves() const noexcept { return levels_.front(); }
    const Digest& root() const noexcept { return levels_.back().front(); }
    std::size_t height() const noexcept { return levels_.size() - 1; }

    /// Level 0 is the leaves; the last level holds only the root.
    const std::vector<std::vector<Digest>>& levels() const noexcept { return levels_; }

    /// Sibling steps from leaf `index` to the root. Throws index_out_of_range.
    SubtreeProof prove(std::size_t index) const;

private:
    std::vector<std::vector<Digest>> levels_;
};

inline MerkleBatch build_batch(std::vector<Digest> leaves) { return MerkleBatch(std::move(leaves)); }

/// Folds the steps over `leaf`: a left step computes h'(step || acc), a right
/// step h'(acc || step). True iff the result equals `root`.
bool verify_proof(const Digest& leaf, std::span<const ProofStep> proof, const Digest& root);

/// The root reached by folding `proof` over `leaf`.
Digest fold_proof(const Digest& leaf, std::span<const ProofStep> proof);

} // namespace sdoc
