#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dk::ast {

// The four identifier categories the rename maps are keyed on.
enum class Category : uint8_t { Func, Type, Field, Var };

constexpr const char* category_name(Category c) {
    switch (c) {
        case Category::Func: return "func";
        case Category::Type: return "type";
        case Category::Field: return "field";
        case Category::Var: return "var";
    }
    return "var";
}

enum class NodeKind : uint16_t {
    TranslationUnit,
    PreprocDirective,
    Attribute,        // __attribute__((...)) / asm(...) blob, opaque
    FunctionDefinition,
    Declaration,
    TypedefDeclaration,
    StructSpecifier,
    UnionSpecifier,
    EnumSpecifier,
    FieldDeclaration,
    Enumerator,
    ParameterList,
    ParameterDeclaration,
    Declarator,
    InitDeclarator,
    CompoundStatement,
    ExpressionStatement,
    IfStatement,
    WhileStatement,
    DoStatement,
    ForStatement,
    SwitchStatement,
    CaseStatement,
    LabeledStatement,
    GotoStatement,
    ReturnStatement,
    BreakStatement,
    ContinueStatement,
    EmptyStatement,
    InitializerList,
    Designator,
    BinaryExpr,
    UnaryExpr,
    UpdateExpr,
    AssignmentExpr,
    TernaryExpr,
    CallExpr,
    MemberExpr,      // a.b or a->b; punctuation distinguishes which
    SubscriptExpr,
    CastExpr,
    CompoundLiteral,
    SizeofExpr,
    ParenExpr,
    CommaExpr,
    TypeName,        // type in casts / sizeof
    Identifier,      // leaf; carries Category
    NumberLiteral,
    StringLiteral,
    CharLiteral,
    PunctToken,      // leaf punctuation kept for span bookkeeping
    KeywordToken,
    ErrorNode,       // recovered region; identifier leaves inside survive
};

struct Node {
    NodeKind kind = NodeKind::ErrorNode;
    uint32_t start = 0;
    uint32_t end = 0;
    // Leaf payload for Identifier nodes.
    Category category = Category::Var;
    bool decl_site = false;
    std::vector<Node> children;

    bool is_identifier() const { return kind == NodeKind::Identifier; }
};

struct Diagnostic {
    uint32_t offset = 0;
    std::string message;
};

enum class ParseStatus : uint8_t { Ok, RecoveredWithErrors, Failed };

// Position-annotated concrete tree over header+source. Node offsets are
// absolute within `text`; identifier enumeration reports spans relative
// to the source portion (bytes at and after header_len).
class SyntaxTree {
public:
    std::string text;       // header + source, as parsed
    uint32_t header_len = 0;
    Node root;

    std::string_view source() const {
        return std::string_view(text).substr(header_len);
    }
    std::string_view slice(uint32_t start, uint32_t end) const {
        return std::string_view(text).substr(start, end - start);
    }
};

struct ParseOutcome {
    ParseStatus status = ParseStatus::Failed;
    std::optional<SyntaxTree> tree;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return status != ParseStatus::Failed; }
};

struct Span {
    uint32_t start = 0;
    uint32_t end = 0;
    bool operator==(const Span&) const = default;
};

struct IdentifierOccurrence {
    std::string name;
    Category category = Category::Var;
    Span span;                 // relative to the source text (header excluded)
    bool decl_site = false;
};

} // namespace dk::ast
