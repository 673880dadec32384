#ifndef VPND_SRC_LINE_PARSER_HPP
#define VPND_SRC_LINE_PARSER_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "vpnd/errors.hpp"
#include "vpnd/rational.hpp"

namespace vpnd::detail {

struct Line {
    int no = 0;  // 1-based
    std::vector<std::string> tokens;
};

/// Splits text into whitespace-tokenized lines, dropping blank lines and
/// `#` comments.
inline std::vector<Line> significant_lines(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        Line line;
        line.no = no;
        std::istringstream ls(raw);
        std::string tok;
        while (ls >> tok) {
            if (tok[0] == '#') break;
            line.tokens.push_back(tok);
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

inline Rational parse_rational_tok(const Line& line, std::size_t idx,
                                   const std::string& what) {
    auto r = parse_rational(line.tokens[idx]);
    if (!r) throw ParseError(line.no, "bad " + what + " '" + line.tokens[idx] + "'");
    return *r;
}

inline std::int64_t parse_int_tok(const Line& line, std::size_t idx,
                                  const std::string& what) {
    const std::string& s = line.tokens[idx];
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError(line.no, "bad " + what + " '" + s + "'");
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9')
            throw ParseError(line.no, "bad " + what + " '" + s + "'");
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        throw ParseError(line.no, what + " out of range '" + s + "'");
    }
}

inline void expect_tokens(const Line& line, std::size_t count) {
    if (line.tokens.size() != count)
        throw ParseError(line.no, "expected " + std::to_string(count) +
                                      " tokens in '" + line.tokens[0] + "' line");
}

}  // namespace vpnd::detail

#endif  // VPND_SRC_LINE_PARSER_HPP
