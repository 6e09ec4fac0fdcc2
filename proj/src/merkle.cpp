#include "sdoc/merkle.hpp"
#include "sdoc/error.hpp"

namespace sdoc {

MerkleBatch::MerkleBatch(std::vector<Digest> leaves)
{
    if (leaves.empty())
        throw Error(Errc::empty_batch, "a Merkle batch needs at least one leaf");
    levels_.push_back(std::move(leaves));
    while (levels_.back().size() > 1) {
        const auto& below = levels_.back();
        std::vector<Digest> above = sha256_pairs(below);
        if (below.size() % 2 == 1)
            above.push_back(below.back());
        levels_.push_back(std::move(above));
    }
}

SubtreeProof MerkleBatch::prove(std::size_t index) const
{
    if (index >= leaves().size())
        throw Error(Errc::index_out_of_range, "leaf index " + std::to_string(index) + " outside a batch of " +
                                                  std::to_string(leaves().size()));
    SubtreeProof proof;
    for (std::size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        std::size_t sibling = index ^ 1;
        if (sibling < nodes.size())
            proof.push_back({index % 2 == 1 ? Side::left : Side::right, nodes[sibling]});
        index /= 2;
    }
    return proof;
}

Digest fold_proof(const Digest& leaf, std::span<const ProofStep> proof)
{
    Digest acc = leaf;
    for (const auto& step : proof)
        acc = step.position == Side::left ? sha256_pair(step.digest, acc) : sha256_pair(acc, step.digest);
    return acc;
}

bool verify_proof(const Digest& leaf, std::span<const ProofStep> proof, const Digest& root)
{
    return fold_proof(leaf, proof) == root;
}

} // namespace sdoc
