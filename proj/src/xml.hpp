#pragma once

// Minimal XML DOM for JATS payloads. Handles elements, attributes,
// character data, CDATA, comments, processing instructions, DOCTYPE and
// the predefined/numeric entities. Not a validating parser.

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace reta::xml {

struct Node {
    // element node when !name.empty(), text node otherwise
    std::string name;
    std::string text;
    std::map<std::string, std::string> attrs;
    std::vector<Node> children;

    bool is_element() const { return !name.empty(); }
};

// Throws reta::parse_error on malformed markup.
Node parse(const std::string& markup);

std::string decode_entities(const std::string& s);

}  // namespace reta::xml
