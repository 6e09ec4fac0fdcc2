#include "doctest.h"

#include "gen.hpp"
#include "sdoc/digest.hpp"
#include "sdoc/error.hpp"
#include "sdoc/signing.hpp"

using namespace sdoc;
using namespace std::literals;
using testgen::Rng;

namespace {

Leaf leaf(std::string tag, std::string salt, std::string text) { return Leaf{std::move(tag), std::move(salt), std::move(text)}; }

// Every leaf in the tree, in document order.
void leaves_of(Container& c, std::vector<Leaf*>& out)
{
    for (auto& ch : c.children) {
        if (Leaf* l = ch.leaf())
            out.push_back(l);
        else if (Container* inner = ch.container())
            leaves_of(*inner, out);
    }
}

char different_char(Rng& rng, char old, std::string_view alphabet)
{
    for (;;) {
        char c = alphabet[testgen::uniform(rng, 0, alphabet.size() - 1)];
        if (c != old)
            return c;
    }
}

} // namespace

TEST_CASE("leaf serialization escapes only ampersand and angle brackets")
{
    CHECK(canonical_leaf(leaf("name", "!f@AKAYeC63zGfMwdxtm", "Wednesday Addams")) ==
          "<name salt=\"!f@AKAYeC63zGfMwdxtm\">Wednesday Addams</name>");
    CHECK(canonical_leaf(leaf("t", "x", "\xc3\xa9 <> \"q\"\n")) == "<t salt=\"x\">\xc3\xa9 &lt;&gt; \"q\"\n</t>");
    CHECK(canonical_leaf(leaf("v", "s", "a&b")) == "<v salt=\"s\">a&amp;b</v>");
}

TEST_CASE("frozen leaf digests")
{
    CHECK(leaf_digest(leaf("name", "!f@AKAYeC63zGfMwdxtm", "Wednesday Addams")).hex() ==
          "fc5bd837b3ee4a5cd71737909c342df6f9054d8bc5b2cad525b1bd637aaad03e");
    CHECK(leaf_digest(leaf("a", "s", "")).hex() == "b5710bdb2313e9d2d4c3d18b18dcc305a8e5511ff7ccb873dd7f2859b52c3129");
    CHECK(leaf_digest(leaf("v", "s", "a&b")).hex() == "307c1683f6f7d4df7bddf3d3db3616114b42e78101d0de8cee8bb86803151f10");
    CHECK(leaf_digest(leaf("t", "x", "\xc3\xa9 <> \"q\"\n")).hex() ==
          "007fe10fb52433ecd0276d14af435d8240efcaf2127f4ea0056fc1859a6f7469");
}

TEST_CASE("frozen container and signed digests")
{
    Container c{"whatever", {leaf("a", "s", ""), leaf("v", "s", "a&b")}, std::nullopt};
    const Digest d = unsigned_digest(c);
    CHECK(d.hex() == "69588e6afe086234c3296548d7eaf86114ea35678a6733836fb4cf1c6b506e12");
    CHECK(container_digest(c) == d);

    c.tag = "renamed";
    CHECK(unsigned_digest(c) == d);

    SignatureBlock sig{"ecdsa-p256v1", 1, Bytes(64, 0x22), Bytes(65, 0x11)};
    sig.pubkey[0] = 0x04;
    CHECK(signed_digest(d, sig).hex() == "907f2c7ac3ffd4b39090d52942f89d770007757fcfb7d3f1399762c35808c994");
    c.sig = sig;
    CHECK(container_digest(c).hex() == "907f2c7ac3ffd4b39090d52942f89d770007757fcfb7d3f1399762c35808c994");
    CHECK(unsigned_digest(c) == d);
}

TEST_CASE("hidden node digest is the stored digest")
{
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        Digest d;
        for (auto& b : d.bytes)
            b = static_cast<std::uint8_t>(rng());
        CHECK(node_digest(DocNode(Hidden{d})) == d);
    }
}

TEST_CASE("redaction leaves every ancestor digest unchanged")
{
    Rng rng(101);
    testgen::Shape shape;
    shape.max_depth = 4;
    shape.max_fanout = 8;
    shape.sign_probability = 0.3;
    for (int doc = 0; doc < 150; ++doc) {
        Container tree = testgen::random_tree(rng, shape);
        const Digest before = node_digest(DocNode(tree));
        for (int trial = 0; trial < 10; ++trial) {
            Container red = tree;
            testgen::random_redaction(red, rng, 0.35);
            REQUIRE(node_digest(DocNode(red)) == before);
        }
        // Hiding every top-level child is the extreme case.
        Container all = tree;
        for (auto& ch : all.children)
            ch = Hidden{node_digest(ch)};
        CHECK(node_digest(DocNode(all)) == before);
    }
}

TEST_CASE("digests are deterministic")
{
    Rng a(55), b(55);
    for (int i = 0; i < 50; ++i) {
        Container t1 = testgen::random_tree(a), t2 = testgen::random_tree(b);
        CHECK(t1 == t2);
        CHECK(node_digest(DocNode(t1)) == node_digest(DocNode(t2)));
        CHECK(node_digest(DocNode(t1)) == node_digest(DocNode(t1)));
    }
}

TEST_CASE("single-character edits of text, leaf tag or salt change the root digest")
{
    Rng rng(2024);
    static constexpr std::string_view tag_chars = "abcdefghijklmnopqrstuvwxyz0123456789_-";
    int trials = 0, changed = 0;
    while (trials < 1200) {
        Container tree = testgen::random_tree(rng);
        const Digest before = node_digest(DocNode(tree));
        std::vector<Leaf*> ls;
        leaves_of(tree, ls);
        Leaf& l = *ls[testgen::uniform(rng, 0, ls.size() - 1)];
        switch (testgen::uniform(rng, 0, 2)) {
        case 0:
            if (l.text.empty())
                l.text = "x";
            else {
                auto i = testgen::uniform(rng, 0, l.text.size() - 1);
                // Keep UTF-8 well formed: only rewrite ASCII positions.
                if (static_cast<unsigned char>(l.text[i]) >= 0x80)
                    continue;
                l.text[i] = different_char(rng, l.text[i], "abcXYZ019&<> ");
            }
            break;
        case 1: {
            if (l.tag.size() == 1)
                l.tag.push_back('q');
            else {
                auto i = testgen::uniform(rng, 1, l.tag.size() - 1);
                l.tag[i] = different_char(rng, l.tag[i], tag_chars);
            }
            break;
        }
        default: {
            auto i = testgen::uniform(rng, 0, l.salt.size() - 1);
            l.salt[i] = different_char(rng, l.salt[i], salt_alphabet);
        }
        }
        ++trials;
        changed += node_digest(DocNode(tree)) != before;
    }
    CHECK(changed == trials);
}

TEST_CASE("a signature block always changes the container digest")
{
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        Container tree = testgen::random_tree(rng);
        const Digest plain = container_digest(tree);
        Container signed_tree = sign_container(tree, testgen::deterministic_key(rng));
        CHECK(container_digest(signed_tree) != plain);
        CHECK(unsigned_digest(signed_tree) == plain);
    }
}

TEST_CASE("tree validation")
{
    CHECK_NOTHROW(validate(DocNode(Container{"r", {leaf("a", "s", "t")}, std::nullopt})));
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {}, std::nullopt})), Error);
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {leaf("digest7", "s", "t")}, std::nullopt})), Error);
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {leaf("a", "", "t")}, std::nullopt})), Error);
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {leaf("a", "s", "bad\x01")}, std::nullopt})), Error);
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {leaf("a:b", "s", "t")}, std::nullopt})), Error);
    CHECK_THROWS_AS(validate(DocNode(Container{"r", {leaf("a", "s", "\xc3")}, std::nullopt})), Error);
}

TEST_CASE("name, salt and text predicates")
{
    CHECK(is_valid_tag("public-key"));
    CHECK(is_valid_tag("_x.y"));
    CHECK_FALSE(is_valid_tag("1abc"));
    CHECK_FALSE(is_valid_tag(""));
    CHECK_FALSE(is_valid_tag("a b"));
    CHECK(is_valid_salt("rGheZ.V8hqDtFw4Hy!GG"));
    CHECK_FALSE(is_valid_salt("with\"quote"));
    CHECK_FALSE(is_valid_salt(std::string(65, 'a')));
    CHECK(is_valid_text("tab\tline\ncr\r"));
    CHECK_FALSE(is_valid_text("nul\0x"sv));
}

TEST_CASE("generated salts have the documented shape and vary")
{
    std::set<std::string> seen;
    std::set<char> chars;
    for (int i = 0; i < 2000; ++i) {
        auto s = generate_salt();
        REQUIRE(s.size() == salt_length);
        for (char c : s) {
            REQUIRE(salt_alphabet.find(c) != std::string_view::npos);
            chars.insert(c);
        }
        CHECK(is_valid_salt(s));
        seen.insert(s);
    }
    CHECK(seen.size() == 2000);
    CHECK(chars.size() == salt_alphabet.size());
}
