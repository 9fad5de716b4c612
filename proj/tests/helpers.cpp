#include "helpers.hpp"

#include <cctype>

namespace bdt::testing {

namespace {

bool parse_name(const std::string& s, std::size_t& i, std::string& name) {
    name.clear();
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == ':' ||
                            s[i] == '-' || s[i] == '_'))
        name += s[i++];
    return !name.empty();
}

} // namespace

bool xml_well_formed(const std::string& text) {
    std::size_t i = 0;
    std::vector<std::string> stack;
    bool seen_root = false;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '&') {
            const std::size_t semi = text.find(';', i);
            if (semi == std::string::npos || semi - i > 8) return false;
            i = semi + 1;
            continue;
        }
        if (c != '<') {
            ++i;
            continue;
        }
        ++i;
        if (i >= text.size()) return false;
        if (text[i] == '?') { // declaration / PI
            const std::size_t end = text.find("?>", i);
            if (end == std::string::npos) return false;
            i = end + 2;
            continue;
        }
        if (text.compare(i, 3, "!--") == 0) {
            const std::size_t end = text.find("-->", i);
            if (end == std::string::npos) return false;
            i = end + 3;
            continue;
        }
        const bool closing = text[i] == '/';
        if (closing) ++i;
        std::string name;
        if (!parse_name(text, i, name)) return false;
        // attributes
        while (i < text.size() && text[i] != '>' && text[i] != '/') {
            if (text[i] == '"') {
                const std::size_t end = text.find('"', i + 1);
                if (end == std::string::npos) return false;
                i = end + 1;
            } else if (text[i] == '<') {
                return false;
            } else {
                ++i;
            }
        }
        if (i >= text.size()) return false;
        bool self_closing = false;
        if (text[i] == '/') {
            self_closing = true;
            ++i;
            if (i >= text.size() || text[i] != '>') return false;
        }
        if (text[i] != '>') return false;
        ++i;
        if (closing) {
            if (self_closing || stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (!self_closing) {
            if (stack.empty() && seen_root) return false; // second root
            stack.push_back(name);
            seen_root = true;
        }
    }
    return stack.empty() && seen_root;
}

} // namespace bdt::testing
