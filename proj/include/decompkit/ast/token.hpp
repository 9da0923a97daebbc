#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dk::ast {

enum class TokenKind : uint8_t {
    Identifier,
    Keyword,
    Number,
    String,
    Char,
    Punct,
    Preproc,   // one whole directive, '#' through end of line
    Eof,
};

struct Token {
    TokenKind kind = TokenKind::Eof;
    uint32_t start = 0;  // byte offset, inclusive
    uint32_t end = 0;    // byte offset, exclusive
    std::string_view text;
};

struct LexDiagnostic {
    uint32_t offset = 0;
    std::string message;
};

struct LexResult {
    std::vector<Token> tokens;  // always terminated by an Eof token
    std::vector<LexDiagnostic> diagnostics;
};

// Tokenizes C source. Comments are skipped (they carry no identifiers);
// an unterminated string or block comment is reported but lexing continues.
LexResult lex(std::string_view source);

bool is_c_keyword(std::string_view word);

// Identifier-shaped at both ends: [A-Za-z_][A-Za-z0-9_]*
bool is_identifier_token(std::string_view word);

// Names from the standard headers that behave as types (size_t, FILE,
// fixed-width integer types, ...). Preloaded into the parser's typedef
// registry and always reserved by obfuscation.
const std::unordered_set<std::string>& standard_type_names();

// NULL / true / false: language-level constants, always reserved but
// never treated as type names by the parser.
const std::unordered_set<std::string>& standard_constant_names();

} // namespace dk::ast
