#include "sdoc/bench.hpp"
#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"
#include "sdoc/merkle.hpp"

#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

namespace sdoc {

Rational Rational::of(std::uint64_t num, std::uint64_t den)
{
    if (den == 0)
        throw Error(Errc::invalid_argument, "zero denominator");
    std::uint64_t g = std::gcd(num, den);
    if (g == 0)
        g = 1;
    return {num / g, den / g};
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string_view scheme_name(Scheme s) noexcept { return s == Scheme::proposal ? "proposal" : "known_practice"; }
std::string_view phase_name(Phase p) noexcept { return p == Phase::registration ? "registration" : "verification"; }

namespace {

void check_range(std::size_t n, std::size_t d)
{
    if (n == 0 || d == 0 || d > n)
        throw Error(Errc::invalid_argument,
                    "need 1 <= d <= n (got n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
}

// Flat document of n items with fixed names and salts.
std::vector<Leaf> items(std::size_t n)
{
    std::vector<Leaf> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(Leaf{"item" + std::to_string(i + 1), "salt" + std::to_string(i + 1),
                           "value of item " + std::to_string(i + 1)});
    return out;
}

CostReport report(Scheme s, Phase p, std::size_t n, std::size_t d, const DigestCountScope& scope)
{
    return CostReport{s, p, n, d, scope.ops(), Rational::of(scope.weight_halves(), 2)};
}

// Recomputes the root from the disclosed leaves (first d) and the minimal set
// of sibling digests a multi-leaf proof would carry.
Digest recompute_root(const MerkleBatch& batch, const std::vector<Digest>& disclosed)
{
    const auto& levels = batch.levels();
    std::map<std::size_t, Digest> known;
    for (std::size_t i = 0; i < disclosed.size(); ++i)
        known.emplace(i, disclosed[i]);
    for (std::size_t level = 0; level + 1 < levels.size(); ++level) {
        const auto& nodes = levels[level];
        std::map<std::size_t, Digest> above;
        for (const auto& [idx, value] : known) {
            const std::size_t parent = idx / 2;
            if (above.count(parent))
                continue;
            const std::size_t sibling = idx ^ 1;
            if (sibling >= nodes.size()) {
                above.emplace(parent, value); // promoted
                continue;
            }
            auto it = known.find(sibling);
            const Digest& other = it != known.end() ? it->second : nodes[sibling];
            above.emplace(parent, idx % 2 == 0 ? sha256_pair(value, other) : sha256_pair(other, value));
        }
        known = std::move(above);
    }
    return known.at(0);
}

} // namespace

CostPair count_proposal(std::size_t n, std::size_t d)
{
    check_range(n, d);
    Container doc{"document", {}, std::nullopt};
    for (auto& leaf : items(n))
        doc.children.emplace_back(std::move(leaf));

    CostPair out;
    Digest registered;
    {
        DigestCountScope scope;
        registered = unsigned_digest(doc);
        out.registration = report(Scheme::proposal, Phase::registration, n, d, scope);
    }

    // The verifier receives d disclosed items and n - d digests.
    Container presented = doc;
    for (std::size_t i = d; i < n; ++i)
        presented.children[i] = Hidden{leaf_digest(*doc.children[i].leaf())};
    Digest verified;
    {
        DigestCountScope scope;
        verified = unsigned_digest(presented);
        out.verification = report(Scheme::proposal, Phase::verification, n, d, scope);
    }
    if (verified != registered)
        throw Error(Errc::invalid_argument, "internal: presented document digest differs from registered digest");
    return out;
}

CostPair count_known_practice(std::size_t n, std::size_t d)
{
    check_range(n, d);
    const auto doc = items(n);

    CostPair out;
    std::optional<MerkleBatch> batch;
    {
        DigestCountScope scope;
        std::vector<Digest> leaves;
        leaves.reserve(n);
        for (const auto& leaf : doc)
            leaves.push_back(leaf_digest(leaf));
        batch.emplace(std::move(leaves));
        out.registration = report(Scheme::known_practice, Phase::registration, n, d, scope);
    }

    Digest root;
    {
        DigestCountScope scope;
        std::vector<Digest> disclosed;
        disclosed.reserve(d);
        for (std::size_t i = 0; i < d; ++i)
            disclosed.push_back(leaf_digest(doc[i]));
        root = recompute_root(*batch, disclosed);
        out.verification = report(Scheme::known_practice, Phase::verification, n, d, scope);
    }
    if (root != batch->root())
        throw Error(Errc::invalid_argument, "internal: recomputed root differs from registered root");
    return out;
}

CostComparison weighted_costs(std::size_t n, std::size_t d)
{
    return CostComparison{count_proposal(n, d), count_known_practice(n, d)};
}

std::string format_table(const std::vector<CostComparison>& rows)
{
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%5s %5s | %12s %12s %12s %12s | %12s %12s %12s %12s\n", "n", "d", "prop.reg",
                  "prop.ver", "prop.reg.w", "prop.ver.w", "known.reg", "known.ver", "known.reg.w", "known.ver.w");
    os << line;
    os << std::string(std::string_view(line).size() - 1, '-') << '\n';
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%5zu %5zu | %12llu %12llu %12s %12s | %12llu %12llu %12s %12s\n",
                      r.proposal.registration.n, r.proposal.registration.d,
                      static_cast<unsigned long long>(r.proposal.registration.digest_ops),
                      static_cast<unsigned long long>(r.proposal.verification.digest_ops),
                      r.proposal.registration.weighted_cost.str().c_str(),
                      r.proposal.verification.weighted_cost.str().c_str(),
                      static_cast<unsigned long long>(r.known_practice.registration.digest_ops),
                      static_cast<unsigned long long>(r.known_practice.verification.digest_ops),
                      r.known_practice.registration.weighted_cost.str().c_str(),
                      r.known_practice.verification.weighted_cost.str().c_str());
        os << line;
    }
    return os.str();
}

std::string format_csv(const std::vector<CostComparison>& rows)
{
    std::ostringstream os;
    os << "scheme,phase,n,d,digest_ops,weighted_cost\n";
    for (const auto& r : rows)
        for (const CostReport* c : {&r.proposal.registration, &r.proposal.verification, &r.known_practice.registration,
                                    &r.known_practice.verification})
            os << scheme_name(c->scheme) << ',' << phase_name(c->phase) << ',' << c->n << ',' << c->d << ','
               << c->digest_ops << ',' << c->weighted_cost.value() << '\n';
    return os.str();
}

} // namespace sdoc
