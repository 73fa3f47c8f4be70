#include "xml.hpp"

#include <cctype>
#include <cstdlib>

#include "reta/errors.hpp"

namespace reta::xml {

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Node parse_document() {
        skip_misc();
        Node root = parse_element();
        skip_misc();
        if (pos_ != s_.size()) {
            fail("trailing content after document element");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw parse_error("xml: " + msg + " at offset " + std::to_string(pos_));
    }

    bool starts_with(const char* lit) const {
        return s_.compare(pos_, std::char_traits<char>::length(lit), lit) == 0;
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    // prolog, comments, PIs, DOCTYPE between/before elements
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<!")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_until(const char* end) {
        auto p = s_.find(end, pos_);
        if (p == std::string::npos) fail(std::string("unterminated ") + end);
        pos_ = p + std::char_traits<char>::length(end);
    }

    void skip_doctype() {
        // tolerate internal subsets: track bracket depth
        int depth = 0;
        while (pos_ < s_.size()) {
            char c = s_[pos_++];
            if (c == '[') ++depth;
            else if (c == ']') --depth;
            else if (c == '>' && depth <= 0) return;
        }
        fail("unterminated DOCTYPE");
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/' || c == '=')
                break;
            ++pos_;
        }
        if (pos_ == start) fail("expected name");
        return s_.substr(start, pos_ - start);
    }

    Node parse_element() {
        if (pos_ >= s_.size() || s_[pos_] != '<') fail("expected element");
        ++pos_;
        Node node;
        node.name = parse_name();
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size()) fail("unterminated start tag <" + node.name);
            if (s_[pos_] == '>') {
                ++pos_;
                break;
            }
            if (s_[pos_] == '/') {
                if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '>') fail("bad empty-element tag");
                pos_ += 2;
                return node;  // self-closing
            }
            std::string attr = parse_name();
            skip_ws();
            if (pos_ >= s_.size() || s_[pos_] != '=') fail("attribute without value");
            ++pos_;
            skip_ws();
            if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) fail("unquoted attribute");
            char quote = s_[pos_++];
            auto end = s_.find(quote, pos_);
            if (end == std::string::npos) fail("unterminated attribute value");
            node.attrs[attr] = decode_entities(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }
        parse_content(node);
        return node;
    }

    void parse_content(Node& node) {
        std::string text;
        auto flush = [&] {
            if (!text.empty()) {
                Node t;
                t.text = decode_entities(text);
                node.children.push_back(std::move(t));
                text.clear();
            }
        };
        while (pos_ < s_.size()) {
            if (s_[pos_] == '<') {
                if (starts_with("</")) {
                    flush();
                    pos_ += 2;
                    std::string close = parse_name();
                    if (close != node.name) {
                        fail("mismatched </" + close + ">, expected </" + node.name + ">");
                    }
                    skip_ws();
                    if (pos_ >= s_.size() || s_[pos_] != '>') fail("bad end tag");
                    ++pos_;
                    return;
                }
                if (starts_with("<!--")) {
                    skip_until("-->");
                } else if (starts_with("<![CDATA[")) {
                    pos_ += 9;
                    auto end = s_.find("]]>", pos_);
                    if (end == std::string::npos) fail("unterminated CDATA");
                    text += s_.substr(pos_, end - pos_);
                    pos_ = end + 3;
                } else if (starts_with("<?")) {
                    skip_until("?>");
                } else {
                    flush();
                    node.children.push_back(parse_element());
                }
            } else {
                text += s_[pos_++];
            }
        }
        fail("unterminated element <" + node.name + ">");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string decode_entities(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string::npos || semi - i > 10) {
            out += s[i++];
            continue;
        }
        std::string ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (!ent.empty() && ent[0] == '#') {
            long code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                            ? std::strtol(ent.c_str() + 2, nullptr, 16)
                            : std::strtol(ent.c_str() + 1, nullptr, 10);
            // UTF-8 encode
            if (code < 0x80) {
                out += static_cast<char>(code);
            } else if (code < 0x800) {
                out += static_cast<char>(0xC0 | (code >> 6));
                out += static_cast<char>(0x80 | (code & 0x3F));
            } else if (code < 0x10000) {
                out += static_cast<char>(0xE0 | (code >> 12));
                out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (code & 0x3F));
            } else {
                out += static_cast<char>(0xF0 | (code >> 18));
                out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
                out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                out += static_cast<char>(0x80 | (code & 0x3F));
            }
        } else {
            // unknown named entity, keep verbatim
            out += s.substr(i, semi - i + 1);
        }
        i = semi + 1;
    }
    return out;
}

Node parse(const std::string& markup) {
    return Parser(markup).parse_document();
}

}  // namespace reta::xml
