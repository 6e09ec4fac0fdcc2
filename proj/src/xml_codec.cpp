#include "sdoc/xml_codec.hpp"
#include "sdoc/error.hpp"

#include <optional>

namespace sdoc {

namespace {

void escape_text(std::string& out, std::string_view text)
{
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '\r': out += "&#13;"; break;
        default: out += c;
        }
    }
}

void escape_attr(std::string& out, std::string_view value)
{
    for (char c : value) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
}

void attr(std::string& out, std::string_view name, std::string_view value)
{
    out += ' ';
    out += name;
    out += "=\"";
    escape_attr(out, value);
    out += '"';
}

void write(std::string& out, const DocNode& node, bool pretty, int depth)
{
    if (pretty)
        out.append(2 * static_cast<std::size_t>(depth), ' ');

    if (const Hidden* h = node.hidden()) {
        out += "<digest>";
        out += h->digest.hex();
        out += "</digest>";
    } else if (const Leaf* l = node.leaf()) {
        out += '<';
        out += l->tag;
        attr(out, "salt", l->salt);
        out += '>';
        escape_text(out, l->text);
        out += "</";
        out += l->tag;
        out += '>';
    } else {
        const Container& c = *node.container();
        out += '<';
        out += c.tag;
        if (c.sig) {
            attr(out, "algo", c.sig->algo);
            attr(out, "sig", to_hex(c.sig->sig));
            attr(out, "pubkey", to_hex(c.sig->pubkey));
        }
        out += '>';
        if (pretty)
            out += '\n';
        for (const auto& child : c.children)
            write(out, child, pretty, depth + 1);
        if (pretty)
            out.append(2 * static_cast<std::size_t>(depth), ' ');
        out += "</";
        out += c.tag;
        out += '>';
    }
    if (pretty)
        out += '\n';
}

struct Attribute {
    std::string name;
    std::string value;
};

struct Element {
    std::string name;
    std::vector<Attribute> attrs;
    std::vector<Element> children;
    std::string text; // concatenated character data
    std::size_t offset = 0;

    const std::string* find(std::string_view key) const
    {
        for (const auto& a : attrs)
            if (a.name == key)
                return &a.value;
        return nullptr;
    }
};

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    Element document()
    {
        if (in_.substr(0, 3) == "\xEF\xBB\xBF")
            pos_ = 3;
        skip_ws();
        if (in_.substr(pos_, 5) == "<?xml" && pos_ + 5 < in_.size() && is_ws(in_[pos_ + 5])) {
            auto end = in_.find("?>", pos_);
            if (end == std::string_view::npos)
                fail(Errc::xml_syntax, "unterminated XML declaration");
            pos_ = end + 2;
        }
        skip_ws();
        check_markup();
        Element root = element();
        skip_ws();
        if (pos_ != in_.size()) {
            check_markup();
            fail(Errc::xml_syntax, "content after the root element");
        }
        return root;
    }

private:
    static bool is_ws(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

    [[noreturn]] void fail(Errc code, const std::string& what) const
    {
        throw Error(code, "xml: " + what + " at byte " + std::to_string(pos_));
    }

    bool eof() const noexcept { return pos_ >= in_.size(); }
    char peek() const noexcept { return eof() ? '\0' : in_[pos_]; }

    void skip_ws() noexcept
    {
        while (!eof() && is_ws(in_[pos_]))
            ++pos_;
    }

    void expect(char c)
    {
        if (peek() != c)
            fail(Errc::xml_syntax, std::string("expected '") + c + "'");
        ++pos_;
    }

    // Rejects markup outside the supported subset at the current position.
    void check_markup() const
    {
        auto rest = in_.substr(pos_);
        if (rest.starts_with("<!--"))
            fail(Errc::xml_unsupported, "comments are not supported");
        if (rest.starts_with("<![CDATA["))
            fail(Errc::xml_unsupported, "CDATA sections are not supported");
        if (rest.starts_with("<!"))
            fail(Errc::xml_unsupported, "document type declarations are not supported");
        if (rest.starts_with("<?"))
            fail(Errc::xml_unsupported, "processing instructions are not supported");
    }

    std::string name()
    {
        std::size_t start = pos_;
        while (!eof()) {
            char c = in_[pos_];
            if (is_ws(c) || c == '=' || c == '>' || c == '/' || c == '<' || c == '"' || c == '\'')
                break;
            ++pos_;
        }
        if (start == pos_)
            fail(Errc::xml_syntax, "expected a name");
        std::string n(in_.substr(start, pos_ - start));
        if (n.find(':') != std::string::npos)
            fail(Errc::xml_unsupported, "namespace prefixes are not supported ('" + n + "')");
        return n;
    }

    void append_utf8(std::string& out, std::uint32_t cp)
    {
        if (cp == 0 || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff))
            fail(Errc::xml_syntax, "invalid character reference");
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xc0 | cp >> 6);
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xe0 | cp >> 12);
            out += static_cast<char>(0x80 | (cp >> 6 & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        } else {
            out += static_cast<char>(0xf0 | cp >> 18);
            out += static_cast<char>(0x80 | (cp >> 12 & 0x3f));
            out += static_cast<char>(0x80 | (cp >> 6 & 0x3f));
            out += static_cast<char>(0x80 | (cp & 0x3f));
        }
    }

    void reference(std::string& out)
    {
        auto end = in_.find(';', pos_);
        if (end == std::string_view::npos || end - pos_ > 12)
            fail(Errc::xml_syntax, "unterminated entity reference");
        auto ref = in_.substr(pos_ + 1, end - pos_ - 1);
        if (ref == "amp")
            out += '&';
        else if (ref == "lt")
            out += '<';
        else if (ref == "gt")
            out += '>';
        else if (ref == "quot")
            out += '"';
        else if (ref == "apos")
            out += '\'';
        else if (ref.starts_with('#')) {
            std::uint32_t cp = 0;
            bool hex = ref.size() > 1 && ref[1] == 'x';
            auto digits = ref.substr(hex ? 2 : 1);
            if (digits.empty())
                fail(Errc::xml_syntax, "empty character reference");
            for (char c : digits) {
                int v;
                if (c >= '0' && c <= '9')
                    v = c - '0';
                else if (hex && c >= 'a' && c <= 'f')
                    v = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F')
                    v = c - 'A' + 10;
                else
                    fail(Errc::xml_syntax, "bad character reference");
                cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
            }
            append_utf8(out, cp);
        } else {
            fail(Errc::xml_syntax, "unknown entity '&" + std::string(ref) + ";'");
        }
        pos_ = end + 1;
    }

    std::string attr_value()
    {
        char quote = peek();
        if (quote != '"' && quote != '\'')
            fail(Errc::xml_syntax, "attribute value must be quoted");
        ++pos_;
        std::string value;
        while (true) {
            if (eof())
                fail(Errc::xml_syntax, "unterminated attribute value");
            char c = in_[pos_];
            if (c == quote) {
                ++pos_;
                return value;
            }
            if (c == '<')
                fail(Errc::xml_syntax, "'<' in attribute value");
            if (c == '&') {
                reference(value);
                continue;
            }
            // attribute value normalization
            value += is_ws(c) ? ' ' : c;
            ++pos_;
        }
    }

    Element element()
    {
        Element el;
        el.offset = pos_;
        expect('<');
        el.name = name();
        while (true) {
            bool had_ws = !eof() && is_ws(peek());
            skip_ws();
            char c = peek();
            if (c == '/') {
                ++pos_;
                expect('>');
                return el;
            }
            if (c == '>') {
                ++pos_;
                break;
            }
            if (!had_ws)
                fail(Errc::xml_syntax, "expected whitespace before attribute");
            Attribute a;
            a.name = name();
            skip_ws();
            expect('=');
            skip_ws();
            a.value = attr_value();
            if (el.find(a.name))
                fail(Errc::xml_syntax, "duplicate attribute '" + a.name + "'");
            el.attrs.push_back(std::move(a));
        }

        while (true) {
            if (eof())
                fail(Errc::xml_syntax, "unterminated element '" + el.name + "'");
            char c = in_[pos_];
            if (c == '<') {
                if (in_.substr(pos_, 2) == "</") {
                    pos_ += 2;
                    std::string closing = name();
                    if (closing != el.name)
                        fail(Errc::xml_syntax, "mismatched closing tag '" + closing + "' for '" + el.name + "'");
                    skip_ws();
                    expect('>');
                    return el;
                }
                check_markup();
                el.children.push_back(element());
            } else if (c == '&') {
                reference(el.text);
            } else {
                if (c == '>' && in_.substr(pos_ >= 2 ? pos_ - 2 : 0, 3) == "]]>")
                    fail(Errc::xml_syntax, "']]>' in character data");
                el.text += c;
                ++pos_;
            }
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

bool only_ws(std::string_view s) noexcept
{
    for (char c : s)
        if (!(c == ' ' || c == '\t' || c == '\n' || c == '\r'))
            return false;
    return true;
}

[[noreturn]] void fail_at(Errc code, const Element& el, const std::string& what)
{
    throw Error(code, "xml: " + what + " (element '" + el.name + "' at byte " + std::to_string(el.offset) + ")");
}

DocNode build(const Element& el)
{
    if (el.name == hidden_tag) {
        if (!el.attrs.empty() || !el.children.empty())
            fail_at(Errc::invalid_digest_hex, el, "digest element must hold only hex text");
        if (el.text.size() != 2 * Digest::size || !is_lower_hex(el.text))
            fail_at(Errc::invalid_digest_hex, el, "digest element text must be 64 lowercase hex characters");
        return Hidden{*Digest::from_hex(el.text)};
    }

    if (const std::string* salt = el.find("salt")) {
        if (el.attrs.size() != 1)
            fail_at(Errc::xml_unsupported, el, "leaf elements carry only a salt attribute");
        if (!el.children.empty())
            fail_at(Errc::mixed_content, el, "leaf element contains child elements");
        return Leaf{el.name, *salt, el.text};
    }

    const std::string* algo = el.find("algo");
    const std::string* sig = el.find("sig");
    const std::string* pubkey = el.find("pubkey");
    for (const auto& a : el.attrs)
        if (a.name != "algo" && a.name != "sig" && a.name != "pubkey")
            fail_at(Errc::xml_unsupported, el, "unexpected attribute '" + a.name + "'");

    if (el.children.empty())
        fail_at(Errc::missing_salt, el, "leaf element has no salt attribute");
    if (!only_ws(el.text))
        fail_at(Errc::mixed_content, el, "container element mixes text with child elements");

    Container c;
    c.tag = el.name;
    if (algo || sig || pubkey) {
        if (!(algo && sig && pubkey))
            fail_at(Errc::malformed_signature, el, "algo, sig and pubkey must appear together");
        c.sig = make_signature_block(*algo, *sig, *pubkey);
    }
    c.children.reserve(el.children.size());
    for (const auto& child : el.children)
        c.children.push_back(build(child));
    return c;
}

} // namespace

std::string to_xml(const DocNode& root, bool pretty)
{
    if (!root.container())
        throw Error(Errc::invalid_argument, "document root must be a container");
    std::string out;
    write(out, root, pretty, 0);
    return out;
}

DocNode from_xml(std::string_view text)
{
    Element root = Parser(text).document();
    DocNode node = build(root);
    if (!node.container())
        throw Error(Errc::xml_syntax, "xml: root element must be a container stanza");
    validate(node);
    return node;
}

} // namespace sdoc
