#include "decompkit/corpus/normalize.hpp"

#include "decompkit/ast/token.hpp"

#include <sstream>
#include <vector>

namespace dk::corpus {

std::string strip_comments(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c == '"' || c == '\'') {
            char quote = c;
            out.push_back(text[i++]);
            while (i < n) {
                if (text[i] == '\\' && i + 1 < n) {
                    out.push_back(text[i]);
                    out.push_back(text[i + 1]);
                    i += 2;
                    continue;
                }
                out.push_back(text[i]);
                if (text[i] == quote || text[i] == '\n') {
                    ++i;
                    break;
                }
                ++i;
            }
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(text[i] == '*' && text[i + 1] == '/')) ++i;
            i = (i + 1 < n) ? i + 2 : n;
            out.push_back(' ');
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

namespace {

// Collapses runs of spaces/tabs outside literals; trims the ends.
std::string collapse_line(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    bool pending_space = false;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t') {
            pending_space = !out.empty();
            ++i;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            out.push_back(line[i++]);
            while (i < line.size()) {
                if (line[i] == '\\' && i + 1 < line.size()) {
                    out.push_back(line[i]);
                    out.push_back(line[i + 1]);
                    i += 2;
                    continue;
                }
                out.push_back(line[i]);
                if (line[i] == quote) {
                    ++i;
                    break;
                }
                ++i;
            }
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

// Brace delta of a line, quote-aware; `leading_closers` counts the '}'s
// before any other content (they dedent the line itself).
void brace_profile(std::string_view line, int& delta, int& leading_closers) {
    delta = 0;
    leading_closers = 0;
    bool at_start = true;
    size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == '"' || c == '\'') {
            char quote = c;
            ++i;
            while (i < line.size()) {
                if (line[i] == '\\') {
                    i += 2;
                    continue;
                }
                if (line[i] == quote) {
                    ++i;
                    break;
                }
                ++i;
            }
            at_start = false;
            continue;
        }
        if (c == '{') {
            ++delta;
            at_start = false;
        } else if (c == '}') {
            --delta;
            if (at_start) ++leading_closers;
        } else if (c != ' ' && c != '\t') {
            at_start = false;
        }
        ++i;
    }
}

} // namespace

std::string canonicalize_whitespace(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string current;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(std::move(current));
                current.clear();
            } else if (c != '\r') {
                current.push_back(c);
            }
        }
        if (!current.empty()) lines.push_back(std::move(current));
    }

    std::string out;
    int depth = 0;
    bool last_blank = true;  // swallows leading blank lines
    for (const auto& raw : lines) {
        std::string body = collapse_line(raw);
        if (body.empty()) {
            if (!last_blank) out.push_back('\n');
            last_blank = true;
            continue;
        }
        int delta = 0, leading_closers = 0;
        brace_profile(body, delta, leading_closers);
        int indent = depth - leading_closers;
        if (indent < 0) indent = 0;
        if (body[0] != '#') out.append(size_t(indent) * 4, ' ');
        out += body;
        out.push_back('\n');
        depth += delta;
        if (depth < 0) depth = 0;
        last_blank = false;
    }
    // drop a trailing blank line left by the collapse
    while (out.size() >= 2 && out[out.size() - 1] == '\n' && out[out.size() - 2] == '\n')
        out.pop_back();
    return out;
}

std::string normalize_source(std::string_view text) {
    return canonicalize_whitespace(strip_comments(text));
}

std::string normalize_pseudo(std::string_view text) {
    return canonicalize_whitespace(strip_comments(text));
}

size_t count_tokens(std::string_view text) {
    ast::LexResult lexed = ast::lex(text);
    size_t n = 0;
    for (const auto& t : lexed.tokens)
        if (t.kind != ast::TokenKind::Eof) ++n;
    return n;
}

} // namespace dk::corpus
