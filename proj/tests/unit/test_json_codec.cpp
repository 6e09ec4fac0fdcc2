#include "doctest.h"

#include "gen.hpp"
#include "sdoc/error.hpp"
#include "sdoc/json_codec.hpp"
#include "sdoc/xml_codec.hpp"

using namespace sdoc;
using testgen::Rng;

namespace {

Errc json_error(std::string_view text)
{
    try {
        json_to_tree(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("accepted: " << text);
    return Errc::invalid_argument;
}

template <class F>
Errc error_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error");
    return Errc::invalid_argument;
}

const std::string hex_a(64, 'a');

} // namespace

TEST_CASE("canonical JSON layout")
{
    Container inner{"grades", {Leaf{"math", "m1", "A"}}, std::nullopt};
    Container root{"document", {Leaf{"id", "s1", "4445"}, Hidden{*Digest::from_hex(hex_a)}, inner}, std::nullopt};
    ProofObject proof{{"local", "local", "journal", "j.db", 3}, {{Side::left, *Digest::from_hex(hex_a)}}};
    const std::string expected = R"({
  "id": "4445",
  "digest1": ")" + hex_a + R"(",
  "grades": {
    "math": "A",
    "salt": {
      "math": "m1"
    }
  },
  "salt": {
    "id": "s1"
  },
  "proof": {
    "spec": {
      "subsystem": "local",
      "network": "local",
      "contract": "journal",
      "contract_address": "j.db",
      "block": 3
    },
    "subtree": [
      {
        "position": "left",
        "digest": ")" + hex_a + R"("
      }
    ]
  }
}
)";
    CHECK(tree_to_json(DocNode(root), proof) == expected);
    auto back = json_to_tree(expected);
    CHECK(back.root == DocNode(root));
    REQUIRE(back.proof);
    CHECK(*back.proof == proof);
}

TEST_CASE("JSON round trips are identities on random trees")
{
    Rng rng(4242);
    testgen::Shape shape;
    shape.sign_probability = 0.25;
    for (int i = 0; i < 300; ++i) {
        Container t = testgen::random_tree(rng, shape);
        if (i % 2 == 0)
            t = sign_container(std::move(t), testgen::deterministic_key(rng));
        if (i % 3 == 0)
            testgen::random_redaction(t, rng, 0.3);
        const DocNode node(t);
        const std::string text = tree_to_json(node);
        const JsonDocument parsed = json_to_tree(text);
        REQUIRE(parsed.root == node);
        CHECK_FALSE(parsed.proof);
        CHECK(tree_to_json(parsed.root) == text);
        // Through XML and back.
        CHECK(from_xml(to_xml(parsed.root)) == node);
        CHECK(tree_to_json(from_xml(to_xml(node))) == text);
    }
}

TEST_CASE("redaction through JSON preserves the container digest")
{
    Rng rng(8);
    testgen::Shape shape;
    shape.sign_probability = 0.3;
    for (int i = 0; i < 100; ++i) {
        Container t = testgen::random_tree(rng, shape);
        t = sign_container(std::move(t), testgen::deterministic_key(rng));
        const Digest before = container_digest(t);
        const std::string text = tree_to_json(DocNode(t));
        std::vector<std::string> paths;
        testgen::member_paths(t, "", paths);
        std::shuffle(paths.begin(), paths.end(), rng);
        // Hide up to three members, skipping ones already under a hidden parent.
        std::string current = text;
        int hidden = 0;
        for (const auto& p : paths) {
            if (hidden == 3)
                break;
            try {
                current = redact(current, std::vector<std::string>{p});
                ++hidden;
            } catch (const Error& e) {
                REQUIRE(e.code() == Errc::path_hidden);
            }
        }
        CHECK(container_digest(*json_to_tree(current).root.container()) == before);
        CHECK(verify_container(*json_to_tree(current).root.container()) == Verdict::valid);
    }
}

TEST_CASE("hide resolves dotted paths and reports hidden or missing members")
{
    const std::string doc = tree_to_json(DocNode(Container{
        "document",
        {Leaf{"a.b", "s", "dotted"}, Container{"a", {Leaf{"c", "s", "x"}, Leaf{"d", "s", "y"}}, std::nullopt}},
        std::nullopt}));
    const auto once = redact(doc, std::vector<std::string>{"a.c"});
    CHECK(once.find("\"c\"") == std::string::npos);
    CHECK(once.find("\"a.b\": \"dotted\"") != std::string::npos);
    CHECK(redact(doc, std::vector<std::string>{"a.b"}).find("dotted") == std::string::npos);

    CHECK(error_of([&] { redact(once, std::vector<std::string>{"a.c"}); }) == Errc::path_hidden);
    CHECK(error_of([&] { redact(once, std::vector<std::string>{"a.digest1"}); }) == Errc::path_hidden);
    CHECK(error_of([&] { redact(doc, std::vector<std::string>{"nope"}); }) == Errc::path_not_found);
    CHECK(error_of([&] { redact(doc, std::vector<std::string>{"a.c", "a.c"}); }) == Errc::path_hidden);
    CHECK(error_of([&] { redact(doc, std::vector<std::string>{""}); }) == Errc::path_not_found);
    const auto whole = redact(doc, std::vector<std::string>{"a"});
    CHECK(error_of([&] { redact(whole, std::vector<std::string>{"a.c"}); }) == Errc::path_hidden);
}

TEST_CASE("plain JSON gets one fresh salt per leaf")
{
    int counter = 0;
    auto salts = [&] { return "salt" + std::to_string(++counter); };
    DocNode t = plain_json_to_tree(R"({"name": "W", "inner": {"x": "1", "y": "2"}})", salts);
    CHECK(counter == 3);
    CHECK(t.container()->children[0].leaf()->salt == "salt1");
    CHECK(t.container()->children[1].container()->children[1].leaf()->salt == "salt3");
    CHECK(error_of([&] { plain_json_to_tree(R"({"salt": "x"})", salts); }) == Errc::json_bad_member);
    CHECK(error_of([&] { plain_json_to_tree(R"({"digest1": "x"})", salts); }) == Errc::json_bad_member);
    CHECK(error_of([&] { plain_json_to_tree(R"({"a": 1})", salts); }) == Errc::json_unsupported);
    CHECK(error_of([&] { plain_json_to_tree(R"({"a": ["x"]})", salts); }) == Errc::json_unsupported);
    CHECK(error_of([&] { plain_json_to_tree(R"({"a": {}})", salts); }) == Errc::json_bad_member);
}

TEST_CASE("JSON input errors map to their codes")
{
    CHECK(json_error("{") == Errc::json_syntax);
    CHECK(json_error("[]") == Errc::json_unsupported);
    CHECK(json_error(R"({"a": "x"})") == Errc::missing_salt);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s", "b": "t"}})") == Errc::orphan_salt);
    CHECK(json_error(R"({"a": "x", "a": "y", "salt": {"a": "s"}})") == Errc::duplicate_member);
    CHECK(json_error(R"({"a": 5, "salt": {}})") == Errc::json_unsupported);
    CHECK(json_error(R"({"a": ["x"], "salt": {}})") == Errc::json_unsupported);
    CHECK(json_error(R"({"digest1": "ABC"})") == Errc::invalid_digest_hex);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s"}, "algo": "ecdsa-p256v1"})") == Errc::malformed_signature);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s"}, "algo": "rsa", "sig": "00", "pubkey": "00"})") ==
          Errc::unknown_algorithm);
    CHECK(json_error(R"({"a": "x", "salt": "s"})") == Errc::json_bad_member);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s"}, "b": {"c": "y", "salt": {"c": "t"}, "proof": {}}})") ==
          Errc::json_bad_member);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s"}, "proof": {"spec": {}}})") == Errc::json_bad_member);
    CHECK(json_error(R"({"1a": "x", "salt": {"1a": "s"}})") == Errc::encoding);
    CHECK(json_error(R"({"a": "x", "salt": {"a": "s\"q"}})") == Errc::encoding);
    CHECK(json_error(R"({"a": "x\u0001", "salt": {"a": "s"}})") == Errc::encoding);
}

TEST_CASE("serializing trees that JSON cannot express")
{
    Container dup{"document", {Leaf{"a", "s", "x"}, Leaf{"a", "t", "y"}}, std::nullopt};
    CHECK(error_of([&] { tree_to_json(DocNode(dup)); }) == Errc::duplicate_member);
    Container reserved{"document", {Leaf{"salt", "s", "x"}}, std::nullopt};
    CHECK(error_of([&] { tree_to_json(DocNode(reserved)); }) == Errc::json_bad_member);
}
