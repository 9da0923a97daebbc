#include "decompkit/ast/token.hpp"

#include <array>
#include <unordered_set>

namespace dk::ast {

namespace {

bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }
bool hex_digit(char c) {
    return digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

const std::unordered_set<std::string_view>& keyword_set() {
    static const std::unordered_set<std::string_view> kw = {
        "auto", "break", "case", "char", "const", "continue", "default", "do",
        "double", "else", "enum", "extern", "float", "for", "goto", "if",
        "inline", "int", "long", "register", "restrict", "return", "short",
        "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
        "unsigned", "void", "volatile", "while",
        "_Bool", "_Complex", "_Imaginary", "_Alignas", "_Alignof", "_Atomic",
        "_Generic", "_Noreturn", "_Static_assert", "_Thread_local",
        // common compiler extensions seen in decompiler output
        "asm", "__asm", "__asm__", "__attribute__", "__attribute",
        "__extension__", "__inline", "__inline__", "__restrict", "__restrict__",
        "__volatile__", "__typeof__", "__typeof", "typeof", "__const",
        "__signed__", "__builtin_va_arg", "__builtin_offsetof",
        "_Float128", "__int128", "__label__",
    };
    return kw;
}

// Multi-character punctuators, longest first per leading char.
bool match_punct(std::string_view s, size_t pos, size_t& len) {
    static const std::array<std::string_view, 3> three = {">>=", "<<=", "..."};
    for (const auto& p : three) {
        if (s.compare(pos, p.size(), p) == 0) {
            len = p.size();
            return true;
        }
    }
    static const std::array<std::string_view, 19> two = {
        "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
        "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|="};
    for (const auto& p : two) {
        if (s.compare(pos, p.size(), p) == 0) {
            len = p.size();
            return true;
        }
    }
    static const std::string_view single = "[](){}.&*+-~!/%<>^|?:;=,#";
    if (single.find(s[pos]) != std::string_view::npos) {
        len = 1;
        return true;
    }
    return false;
}

} // namespace

bool is_c_keyword(std::string_view word) { return keyword_set().count(word) > 0; }

const std::unordered_set<std::string>& standard_type_names() {
    static const std::unordered_set<std::string> names = {
        "size_t", "ssize_t", "ptrdiff_t", "intptr_t", "uintptr_t", "intmax_t",
        "uintmax_t", "int8_t", "int16_t", "int32_t", "int64_t", "uint8_t",
        "uint16_t", "uint32_t", "uint64_t", "wchar_t", "wint_t", "char16_t",
        "char32_t", "bool", "FILE", "va_list",
        "time_t", "clock_t", "off_t", "pid_t", "uid_t", "gid_t", "mode_t",
        "dev_t", "ino_t", "fpos_t", "div_t", "ldiv_t", "lldiv_t", "sig_atomic_t",
        "jmp_buf", "float_t", "double_t", "max_align_t", "DIR", "socklen_t",
        "useconds_t", "suseconds_t", "nfds_t", "rlim_t", "errno_t", "rsize_t",
    };
    return names;
}

const std::unordered_set<std::string>& standard_constant_names() {
    static const std::unordered_set<std::string> names = {"NULL", "true", "false"};
    return names;
}

bool is_identifier_token(std::string_view word) {
    if (word.empty() || !ident_start(word[0])) return false;
    for (char c : word)
        if (!ident_char(c)) return false;
    return true;
}

LexResult lex(std::string_view src) {
    LexResult res;
    size_t i = 0;
    const size_t n = src.size();

    auto push = [&](TokenKind kind, size_t start, size_t end) {
        res.tokens.push_back(
            {kind, uint32_t(start), uint32_t(end), src.substr(start, end - start)});
    };

    auto skip_string = [&](size_t start, char quote) -> size_t {
        size_t j = start + 1;
        while (j < n) {
            if (src[j] == '\\' && j + 1 < n) {
                j += 2;
                continue;
            }
            if (src[j] == quote) return j + 1;
            if (src[j] == '\n') break;  // unterminated on this line
            ++j;
        }
        res.diagnostics.push_back({uint32_t(start), "unterminated literal"});
        return j;
    };

    bool at_line_start = true;
    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') {
            ++i;
            continue;
        }
        if (c == '\n') {
            at_line_start = true;
            ++i;
            continue;
        }
        // comments
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            while (i < n && src[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            size_t start = i;
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
            if (i + 1 < n) {
                i += 2;
            } else {
                res.diagnostics.push_back({uint32_t(start), "unterminated block comment"});
                i = n;
            }
            continue;
        }
        // preprocessor directive: whole logical line, honoring splices
        if (c == '#' && at_line_start) {
            size_t start = i;
            while (i < n) {
                if (src[i] == '\n') {
                    // backslash-newline continues the directive
                    size_t k = i;
                    while (k > start && (src[k - 1] == '\r')) --k;
                    if (k > start && src[k - 1] == '\\') {
                        ++i;
                        continue;
                    }
                    break;
                }
                ++i;
            }
            push(TokenKind::Preproc, start, i);
            continue;
        }
        at_line_start = false;
        if (ident_start(c)) {
            size_t start = i;
            while (i < n && ident_char(src[i])) ++i;
            std::string_view word = src.substr(start, i - start);
            push(is_c_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, start, i);
            continue;
        }
        if (digit(c) || (c == '.' && i + 1 < n && digit(src[i + 1]))) {
            size_t start = i;
            if (c == '0' && i + 1 < n && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
                i += 2;
                while (i < n && (hex_digit(src[i]) || src[i] == '.' || src[i] == 'p' ||
                                 src[i] == 'P'))
                    ++i;
            } else {
                bool seen_exp = false;
                while (i < n) {
                    char d = src[i];
                    if (digit(d) || d == '.') {
                        ++i;
                    } else if ((d == 'e' || d == 'E') && !seen_exp) {
                        seen_exp = true;
                        ++i;
                        if (i < n && (src[i] == '+' || src[i] == '-')) ++i;
                    } else {
                        break;
                    }
                }
            }
            while (i < n && (src[i] == 'u' || src[i] == 'U' || src[i] == 'l' ||
                             src[i] == 'L' || src[i] == 'f' || src[i] == 'F'))
                ++i;
            push(TokenKind::Number, start, i);
            continue;
        }
        if (c == '"') {
            size_t start = i;
            i = skip_string(i, '"');
            push(TokenKind::String, start, i);
            continue;
        }
        if (c == '\'') {
            size_t start = i;
            i = skip_string(i, '\'');
            push(TokenKind::Char, start, i);
            continue;
        }
        size_t len = 0;
        if (match_punct(src, i, len)) {
            push(TokenKind::Punct, i, i + len);
            i += len;
            continue;
        }
        res.diagnostics.push_back({uint32_t(i), "unexpected byte"});
        ++i;
    }
    push(TokenKind::Eof, n, n);
    return res;
}

} // namespace dk::ast
