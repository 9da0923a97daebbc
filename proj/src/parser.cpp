#include "decompkit/ast/parser.hpp"

#include "decompkit/ast/token.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace dk::ast {

namespace {

struct ParseError {
    uint32_t offset;
    std::string message;
};

bool is_type_keyword(std::string_view t) {
    static const std::unordered_set<std::string_view> s = {
        "void", "char", "short", "int", "long", "float", "double", "signed",
        "unsigned", "_Bool", "_Complex", "_Imaginary", "__int128", "_Float128"};
    return s.count(t) > 0;
}

bool is_storage_keyword(std::string_view t) {
    static const std::unordered_set<std::string_view> s = {
        "typedef", "extern", "static", "auto", "register", "inline", "__inline",
        "__inline__", "_Noreturn", "_Thread_local", "__extension__", "_Alignas"};
    return s.count(t) > 0;
}

bool is_qualifier_keyword(std::string_view t) {
    static const std::unordered_set<std::string_view> s = {
        "const",       "volatile",     "restrict", "__restrict",
        "__restrict__", "_Atomic",     "__const",  "__signed__"};
    return s.count(t) > 0;
}

bool is_tag_keyword(std::string_view t) {
    return t == "struct" || t == "union" || t == "enum";
}

bool is_assignment_op(std::string_view t) {
    static const std::unordered_set<std::string_view> s = {
        "=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "^=", "|="};
    return s.count(t) > 0;
}

int binary_precedence(std::string_view t) {
    if (t == "||") return 1;
    if (t == "&&") return 2;
    if (t == "|") return 3;
    if (t == "^") return 4;
    if (t == "&") return 5;
    if (t == "==" || t == "!=") return 6;
    if (t == "<" || t == ">" || t == "<=" || t == ">=") return 7;
    if (t == "<<" || t == ">>") return 8;
    if (t == "+" || t == "-") return 9;
    if (t == "*" || t == "/" || t == "%") return 10;
    return 0;
}

constexpr int kMaxDepth = 1200;

class Parser {
public:
    Parser(std::string_view text, const std::vector<Token>& tokens,
           std::vector<Diagnostic>& diags)
        : text_(text), diags_(diags) {
        toks_.reserve(tokens.size());
        for (const auto& t : tokens) {
            if (t.kind == TokenKind::Preproc) continue;  // re-attached after the parse
            toks_.push_back(t);
        }
        for (const auto& n : standard_type_names()) known_types_.insert(n);
    }

    Node parse_translation_unit() {
        Node tu;
        tu.kind = NodeKind::TranslationUnit;
        tu.start = 0;
        tu.end = uint32_t(text_.size());
        while (!at_eof()) {
            size_t before = p_;
            try {
                if (accept(";")) continue;  // stray semicolon
                tu.children.push_back(parse_external_item());
            } catch (const ParseError& e) {
                diags_.push_back({e.offset, e.message});
                if (p_ == before && !at_eof()) ++p_;  // guarantee progress
                tu.children.push_back(make_error_node(before, sync_top_level()));
            }
        }
        return tu;
    }

private:
    std::string_view text_;
    std::vector<Token> toks_;
    size_t p_ = 0;
    int depth_ = 0;
    std::vector<Diagnostic>& diags_;
    std::unordered_set<std::string> known_types_;

    struct DepthGuard {
        Parser& parser;
        explicit DepthGuard(Parser& p) : parser(p) {
            if (++parser.depth_ > kMaxDepth)
                throw ParseError{parser.cur().start, "nesting too deep"};
        }
        ~DepthGuard() { --parser.depth_; }
    };

    // --- token access -----------------------------------------------------

    const Token& cur() const { return toks_[p_]; }
    const Token& peek(size_t k) const {
        size_t i = p_ + k;
        return toks_[std::min(i, toks_.size() - 1)];
    }
    bool at_eof() const { return cur().kind == TokenKind::Eof; }
    uint32_t prev_end() const { return p_ > 0 ? toks_[p_ - 1].end : 0; }

    bool is(std::string_view s) const { return cur().text == s; }
    bool is_kw(std::string_view s) const {
        return cur().kind == TokenKind::Keyword && cur().text == s;
    }
    bool is_ident() const { return cur().kind == TokenKind::Identifier; }

    Token advance() {
        Token t = cur();
        if (!at_eof()) ++p_;
        return t;
    }
    bool accept(std::string_view s) {
        if (cur().text == s &&
            (cur().kind == TokenKind::Punct || cur().kind == TokenKind::Keyword)) {
            advance();
            return true;
        }
        return false;
    }
    void expect(std::string_view s) {
        if (!accept(s))
            throw ParseError{cur().start,
                             "expected '" + std::string(s) + "', found '" +
                                 std::string(cur().text) + "'"};
    }

    bool known_type(std::string_view name) const {
        return known_types_.count(std::string(name)) > 0;
    }

    // --- node construction -------------------------------------------------

    static Node leaf(NodeKind k, const Token& t) {
        Node n;
        n.kind = k;
        n.start = t.start;
        n.end = t.end;
        return n;
    }

    static Node ident_leaf(const Token& t, Category c, bool decl) {
        Node n = leaf(NodeKind::Identifier, t);
        n.category = c;
        n.decl_site = decl;
        return n;
    }

    Node finish(Node n, uint32_t start) const {
        n.start = start;
        n.end = prev_end();
        return n;
    }

    // Consumes tokens until a top-level sync point and returns the end index.
    size_t sync_top_level() {
        int brace_depth = 0;
        while (!at_eof()) {
            std::string_view t = cur().text;
            if (t == "{") ++brace_depth;
            if (t == "}") {
                if (brace_depth == 0) {
                    ++p_;
                    break;
                }
                --brace_depth;
            }
            if (t == ";" && brace_depth == 0) {
                ++p_;
                break;
            }
            ++p_;
        }
        return p_;
    }

    size_t sync_statement() {
        int brace_depth = 0;
        while (!at_eof()) {
            std::string_view t = cur().text;
            if (t == "{") ++brace_depth;
            if (t == "}") {
                if (brace_depth == 0) break;  // let the caller close the block
                --brace_depth;
            }
            if (t == ";" && brace_depth == 0) {
                ++p_;
                break;
            }
            ++p_;
        }
        return p_;
    }

    // An ErrorNode covering tokens [from, to); identifiers inside survive as
    // var-category leaves so downstream renaming never drops them silently.
    Node make_error_node(size_t from, size_t to) {
        Node err;
        err.kind = NodeKind::ErrorNode;
        err.start = from < toks_.size() ? toks_[from].start : uint32_t(text_.size());
        err.end = prev_end();
        if (err.end < err.start) err.end = err.start;
        for (size_t i = from; i < to && i < toks_.size(); ++i) {
            if (toks_[i].kind == TokenKind::Identifier) {
                err.children.push_back(ident_leaf(toks_[i], Category::Var, false));
                diags_.push_back(
                    {toks_[i].start, "identifier in unparsed region classified as var"});
            }
        }
        return err;
    }

    // --- attribute / opaque blobs -------------------------------------------

    bool at_attribute() const {
        return is_kw("__attribute__") || is_kw("__attribute") || is_kw("asm") ||
               is_kw("__asm") || is_kw("__asm__") || is_kw("_Static_assert") ||
               is_kw("_Generic") || is_kw("__builtin_va_arg") ||
               is_kw("__builtin_offsetof") || is_kw("_Alignof") || is_kw("__label__");
    }

    // keyword (possibly) followed by balanced parens; no identifiers inside
    // are enumerated.
    Node parse_attribute() {
        uint32_t start = cur().start;
        advance();
        if (is("(")) {
            int depth = 0;
            do {
                if (is("(")) ++depth;
                if (is(")")) --depth;
                advance();
            } while (!at_eof() && depth > 0);
        }
        Node n;
        n.kind = NodeKind::Attribute;
        return finish(n, start);
    }

    // --- specifiers ----------------------------------------------------------

    struct Specs {
        std::vector<Node> nodes;
        bool is_typedef = false;
        bool saw_type = false;
    };

    // declaration-specifiers; `allow_unknown_type` permits one unknown
    // identifier to act as the type (the tolerant path for headerless code).
    Specs parse_specifiers(bool allow_unknown_type) {
        Specs specs;
        for (;;) {
            if (at_attribute()) {
                specs.nodes.push_back(parse_attribute());
                continue;
            }
            if (cur().kind == TokenKind::Keyword) {
                std::string_view t = cur().text;
                if (t == "typedef") {
                    specs.is_typedef = true;
                    specs.nodes.push_back(leaf(NodeKind::KeywordToken, advance()));
                    continue;
                }
                if (is_storage_keyword(t) || is_qualifier_keyword(t)) {
                    specs.nodes.push_back(leaf(NodeKind::KeywordToken, advance()));
                    continue;
                }
                if (is_type_keyword(t)) {
                    specs.saw_type = true;
                    specs.nodes.push_back(leaf(NodeKind::KeywordToken, advance()));
                    continue;
                }
                if (is_tag_keyword(t)) {
                    specs.nodes.push_back(parse_tag_specifier());
                    specs.saw_type = true;
                    continue;
                }
                break;
            }
            if (is_ident() && !specs.saw_type) {
                bool known = known_type(cur().text);
                if (known || allow_unknown_type) {
                    specs.nodes.push_back(ident_leaf(advance(), Category::Type, false));
                    specs.saw_type = true;
                    continue;
                }
            }
            break;
        }
        if (specs.nodes.empty())
            throw ParseError{cur().start, "expected declaration specifiers"};
        return specs;
    }

    // struct/union/enum specifier
    Node parse_tag_specifier() {
        uint32_t start = cur().start;
        std::string_view kw = advance().text;
        Node n;
        n.kind = kw == "struct"  ? NodeKind::StructSpecifier
                 : kw == "union" ? NodeKind::UnionSpecifier
                                 : NodeKind::EnumSpecifier;
        while (at_attribute()) n.children.push_back(parse_attribute());
        bool has_tag = is_ident();
        size_t tag_index = 0;
        if (has_tag) {
            Token tag = advance();
            tag_index = n.children.size();
            n.children.push_back(ident_leaf(tag, Category::Type, false));
        }
        if (is("{")) {
            if (has_tag) n.children[tag_index].decl_site = true;
            advance();
            if (n.kind == NodeKind::EnumSpecifier) {
                parse_enumerator_list(n);
            } else {
                parse_field_declarations(n);
            }
            expect("}");
        } else if (!has_tag) {
            throw ParseError{cur().start, "expected tag or body"};
        }
        return finish(n, start);
    }

    void parse_enumerator_list(Node& parent) {
        while (!at_eof() && !is("}")) {
            if (!is_ident())
                throw ParseError{cur().start, "expected enumerator name"};
            uint32_t start = cur().start;
            Node e;
            e.kind = NodeKind::Enumerator;
            e.children.push_back(ident_leaf(advance(), Category::Var, true));
            if (accept("=")) e.children.push_back(parse_conditional());
            parent.children.push_back(finish(e, start));
            if (!accept(",")) break;
        }
    }

    void parse_field_declarations(Node& parent) {
        while (!at_eof() && !is("}")) {
            size_t before = p_;
            try {
                parent.children.push_back(parse_field_declaration());
            } catch (const ParseError& e) {
                diags_.push_back({e.offset, e.message});
                if (p_ == before && !at_eof()) ++p_;
                parent.children.push_back(make_error_node(before, sync_statement()));
            }
        }
    }

    Node parse_field_declaration() {
        uint32_t start = cur().start;
        Node n;
        n.kind = NodeKind::FieldDeclaration;
        Specs specs = parse_specifiers(true);
        for (auto& s : specs.nodes) n.children.push_back(std::move(s));
        if (!is(";")) {
            for (;;) {
                if (is(":")) {  // unnamed bitfield
                    advance();
                    n.children.push_back(parse_conditional());
                } else {
                    DeclaratorResult d = parse_declarator(Category::Field, false);
                    n.children.push_back(std::move(d.node));
                    if (accept(":")) n.children.push_back(parse_conditional());
                }
                if (!accept(",")) break;
            }
        }
        expect(";");
        return finish(n, start);
    }

    // --- declarators ----------------------------------------------------------

    struct DeclaratorResult {
        Node node;
        bool is_function = false;
        std::string name;  // empty for abstract declarators
    };

    // name_category: category given to the declared name (Func is decided
    // here when the name is directly followed by a parameter list).
    DeclaratorResult parse_declarator(Category name_category, bool force_type) {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node n;
        n.kind = NodeKind::Declarator;
        while (is("*") || (cur().kind == TokenKind::Keyword &&
                           is_qualifier_keyword(cur().text))) {
            n.children.push_back(leaf(NodeKind::PunctToken, advance()));
        }
        while (at_attribute()) n.children.push_back(parse_attribute());

        DeclaratorResult result;
        bool name_direct = false;  // name immediately at this nesting level
        if (is("(") && (peek(1).text == "*" || peek(1).text == "(")) {
            advance();
            DeclaratorResult inner = parse_declarator(name_category, force_type);
            expect(")");
            result.name = inner.name;
            n.children.push_back(std::move(inner.node));
        } else if (is_ident()) {
            Token name_tok = advance();
            result.name = std::string(name_tok.text);
            name_direct = true;
            // category patched below once we know whether a call suffix follows
            n.children.push_back(ident_leaf(name_tok, name_category, true));
        }
        // abstract declarator: no name at all — fine for params and casts

        size_t name_child = n.children.empty() ? 0 : n.children.size() - 1;
        bool first_suffix = true;
        for (;;) {
            if (is("(") && looks_like_parameter_list()) {
                if (name_direct && first_suffix) {
                    result.is_function = true;
                    if (!force_type && name_category != Category::Field)
                        n.children[name_child].category = Category::Func;
                }
                n.children.push_back(parse_parameter_list());
                first_suffix = false;
                continue;
            }
            if (is("[")) {
                advance();
                if (!is("]")) n.children.push_back(parse_expression());
                expect("]");
                first_suffix = false;
                continue;
            }
            break;
        }
        while (at_attribute()) n.children.push_back(parse_attribute());
        if (force_type && name_direct) {
            n.children[name_child].category = Category::Type;
        }
        result.node = finish(n, start);
        return result;
    }

    bool looks_like_parameter_list() const {
        if (!is("(")) return false;
        const Token& t1 = peek(1);
        if (t1.text == ")") return true;
        if (t1.kind == TokenKind::Keyword &&
            (is_type_keyword(t1.text) || is_qualifier_keyword(t1.text) ||
             is_tag_keyword(t1.text) || is_storage_keyword(t1.text)))
            return true;
        if (t1.kind == TokenKind::Identifier) return true;  // typed or K&R params
        if (t1.text == "...") return true;
        return false;
    }

    Node parse_parameter_list() {
        uint32_t start = cur().start;
        expect("(");
        Node n;
        n.kind = NodeKind::ParameterList;
        if (accept(")")) return finish(n, start);
        for (;;) {
            if (accept("...")) break;
            n.children.push_back(parse_parameter_declaration());
            if (!accept(",")) break;
        }
        expect(")");
        return finish(n, start);
    }

    Node parse_parameter_declaration() {
        uint32_t start = cur().start;
        Node n;
        n.kind = NodeKind::ParameterDeclaration;
        // `void` alone
        if (is_kw("void") && peek(1).text == ")") {
            n.children.push_back(leaf(NodeKind::KeywordToken, advance()));
            return finish(n, start);
        }
        Specs specs = parse_specifiers(true);
        for (auto& s : specs.nodes) n.children.push_back(std::move(s));
        if (!is(",") && !is(")")) {
            DeclaratorResult d = parse_declarator(Category::Var, false);
            n.children.push_back(std::move(d.node));
        }
        return finish(n, start);
    }

    // --- external items ---------------------------------------------------------

    Node parse_external_item() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Specs specs = parse_specifiers(true);
        Node n;
        for (auto& s : specs.nodes) n.children.push_back(std::move(s));
        if (accept(";")) {
            n.kind = specs.is_typedef ? NodeKind::TypedefDeclaration : NodeKind::Declaration;
            return finish(n, start);
        }
        Category name_cat = specs.is_typedef ? Category::Type : Category::Var;
        DeclaratorResult first = parse_declarator(name_cat, specs.is_typedef);
        if (specs.is_typedef && !first.name.empty()) known_types_.insert(first.name);

        if (!specs.is_typedef && first.is_function && (is("{") || starts_knr_decls())) {
            n.kind = NodeKind::FunctionDefinition;
            n.children.push_back(std::move(first.node));
            while (!is("{") && !at_eof()) {
                // old-style parameter declarations between ')' and '{'
                n.children.push_back(parse_block_declaration());
            }
            n.children.push_back(parse_compound_statement());
            return finish(n, start);
        }

        n.kind = specs.is_typedef ? NodeKind::TypedefDeclaration : NodeKind::Declaration;
        n.children.push_back(finish_init_declarator(std::move(first)));
        while (accept(",")) {
            DeclaratorResult d = parse_declarator(name_cat, specs.is_typedef);
            if (specs.is_typedef && !d.name.empty()) known_types_.insert(d.name);
            n.children.push_back(finish_init_declarator(std::move(d)));
        }
        expect(";");
        return finish(n, start);
    }

    bool starts_knr_decls() const {
        // After `f(a, b)` an old-style definition lists declarations next.
        if (cur().kind != TokenKind::Keyword) return false;
        std::string_view t = cur().text;
        return is_type_keyword(t) || is_qualifier_keyword(t) || is_tag_keyword(t) ||
               is_storage_keyword(t);
    }

    Node finish_init_declarator(DeclaratorResult d) {
        if (!is("=")) return std::move(d.node);
        uint32_t start = d.node.start;
        Node n;
        n.kind = NodeKind::InitDeclarator;
        n.children.push_back(std::move(d.node));
        advance();
        n.children.push_back(parse_initializer());
        return finish(n, start);
    }

    Node parse_initializer() {
        DepthGuard guard(*this);
        if (!is("{")) return parse_assignment();
        uint32_t start = cur().start;
        advance();
        Node n;
        n.kind = NodeKind::InitializerList;
        while (!at_eof() && !is("}")) {
            if (is(".") || is("[")) {
                uint32_t dstart = cur().start;
                Node des;
                des.kind = NodeKind::Designator;
                while (is(".") || is("[")) {
                    if (accept(".")) {
                        if (!is_ident())
                            throw ParseError{cur().start, "expected field designator"};
                        des.children.push_back(
                            ident_leaf(advance(), Category::Field, false));
                    } else {
                        advance();
                        des.children.push_back(parse_conditional());
                        expect("]");
                    }
                }
                expect("=");
                des.children.push_back(parse_initializer());
                n.children.push_back(finish(des, dstart));
            } else {
                n.children.push_back(parse_initializer());
            }
            if (!accept(",")) break;
        }
        expect("}");
        return finish(n, start);
    }

    // --- statements -----------------------------------------------------------

    Node parse_compound_statement() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        expect("{");
        Node n;
        n.kind = NodeKind::CompoundStatement;
        while (!at_eof() && !is("}")) {
            size_t before = p_;
            try {
                if (starts_declaration()) {
                    n.children.push_back(parse_block_declaration());
                } else {
                    n.children.push_back(parse_statement());
                }
            } catch (const ParseError& e) {
                diags_.push_back({e.offset, e.message});
                if (p_ == before && !at_eof()) ++p_;
                n.children.push_back(make_error_node(before, sync_statement()));
            }
        }
        expect("}");
        return finish(n, start);
    }

    bool starts_declaration() const {
        if (cur().kind == TokenKind::Keyword) {
            std::string_view t = cur().text;
            return is_type_keyword(t) || is_storage_keyword(t) ||
                   is_qualifier_keyword(t) || is_tag_keyword(t) || t == "typedef";
        }
        if (!is_ident()) return false;
        if (peek(1).text == ":") return false;  // label
        if (known_type(cur().text)) return true;
        // Table x ... | Table *x ... | Table (*fp)( ...
        size_t k = 1;
        while (peek(k).text == "*") ++k;
        if (k > 1 && peek(k).kind == TokenKind::Identifier) {
            std::string_view after = peek(k + 1).text;
            if (after == ";" || after == "=" || after == "," || after == "[" ||
                after == ")" || after == "(")
                return true;
        }
        if (k == 1 && peek(1).kind == TokenKind::Identifier) {
            std::string_view after = peek(2).text;
            if (after == ";" || after == "=" || after == "," || after == "[" ||
                after == "(")
                return true;
        }
        if (peek(1).text == "(" && peek(2).text == "*") {
            size_t j = 3;
            while (peek(j).text == "*") ++j;
            if (peek(j).kind == TokenKind::Identifier && peek(j + 1).text == ")")
                return true;
        }
        return false;
    }

    Node parse_block_declaration() {
        uint32_t start = cur().start;
        Node n;
        Specs specs = parse_specifiers(true);
        for (auto& s : specs.nodes) n.children.push_back(std::move(s));
        n.kind = specs.is_typedef ? NodeKind::TypedefDeclaration : NodeKind::Declaration;
        if (accept(";")) return finish(n, start);
        Category name_cat = specs.is_typedef ? Category::Type : Category::Var;
        for (;;) {
            DeclaratorResult d = parse_declarator(name_cat, specs.is_typedef);
            if (specs.is_typedef && !d.name.empty()) known_types_.insert(d.name);
            n.children.push_back(finish_init_declarator(std::move(d)));
            if (!accept(",")) break;
        }
        expect(";");
        return finish(n, start);
    }

    Node parse_statement() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        if (is("{")) return parse_compound_statement();
        if (accept(";")) {
            Node n;
            n.kind = NodeKind::EmptyStatement;
            return finish(n, start);
        }
        if (cur().kind == TokenKind::Keyword) {
            std::string_view t = cur().text;
            if (t == "if") return parse_if();
            if (t == "while") return parse_while();
            if (t == "do") return parse_do();
            if (t == "for") return parse_for();
            if (t == "switch") return parse_switch();
            if (t == "case" || t == "default") return parse_case();
            if (t == "goto") return parse_goto();
            if (t == "return") {
                advance();
                Node n;
                n.kind = NodeKind::ReturnStatement;
                if (!is(";")) n.children.push_back(parse_expression());
                expect(";");
                return finish(n, start);
            }
            if (t == "break" || t == "continue") {
                Node n;
                n.kind = t == "break" ? NodeKind::BreakStatement
                                      : NodeKind::ContinueStatement;
                advance();
                expect(";");
                return finish(n, start);
            }
        }
        // label
        if (is_ident() && peek(1).text == ":") {
            Node n;
            n.kind = NodeKind::LabeledStatement;
            n.children.push_back(ident_leaf(advance(), Category::Var, true));
            advance();  // ':'
            if (!is("}")) n.children.push_back(parse_statement());
            return finish(n, start);
        }
        Node n;
        n.kind = NodeKind::ExpressionStatement;
        n.children.push_back(parse_expression());
        expect(";");
        return finish(n, start);
    }

    Node parse_if() {
        uint32_t start = cur().start;
        advance();
        expect("(");
        Node n;
        n.kind = NodeKind::IfStatement;
        n.children.push_back(parse_expression());
        expect(")");
        n.children.push_back(parse_statement());
        if (accept("else")) n.children.push_back(parse_statement());
        return finish(n, start);
    }

    Node parse_while() {
        uint32_t start = cur().start;
        advance();
        expect("(");
        Node n;
        n.kind = NodeKind::WhileStatement;
        n.children.push_back(parse_expression());
        expect(")");
        n.children.push_back(parse_statement());
        return finish(n, start);
    }

    Node parse_do() {
        uint32_t start = cur().start;
        advance();
        Node n;
        n.kind = NodeKind::DoStatement;
        n.children.push_back(parse_statement());
        expect("while");
        expect("(");
        n.children.push_back(parse_expression());
        expect(")");
        expect(";");
        return finish(n, start);
    }

    Node parse_for() {
        uint32_t start = cur().start;
        advance();
        expect("(");
        Node n;
        n.kind = NodeKind::ForStatement;
        if (!accept(";")) {
            if (starts_declaration()) {
                n.children.push_back(parse_block_declaration());
            } else {
                n.children.push_back(parse_expression());
                expect(";");
            }
        }
        if (!is(";")) n.children.push_back(parse_expression());
        expect(";");
        if (!is(")")) n.children.push_back(parse_expression());
        expect(")");
        n.children.push_back(parse_statement());
        return finish(n, start);
    }

    Node parse_switch() {
        uint32_t start = cur().start;
        advance();
        expect("(");
        Node n;
        n.kind = NodeKind::SwitchStatement;
        n.children.push_back(parse_expression());
        expect(")");
        n.children.push_back(parse_statement());
        return finish(n, start);
    }

    Node parse_case() {
        uint32_t start = cur().start;
        Node n;
        n.kind = NodeKind::CaseStatement;
        if (accept("case")) {
            n.children.push_back(parse_conditional());
            // GNU case ranges: case 1 ... 5:
            if (accept("...")) n.children.push_back(parse_conditional());
        } else {
            expect("default");
        }
        expect(":");
        if (!is("}") && !is_kw("case") && !is_kw("default"))
            n.children.push_back(parse_statement());
        return finish(n, start);
    }

    Node parse_goto() {
        uint32_t start = cur().start;
        advance();
        Node n;
        n.kind = NodeKind::GotoStatement;
        if (is_ident()) {
            n.children.push_back(ident_leaf(advance(), Category::Var, false));
        } else {
            throw ParseError{cur().start, "expected label after goto"};
        }
        expect(";");
        return finish(n, start);
    }

    // --- expressions -------------------------------------------------------------

    Node parse_expression() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node first = parse_assignment();
        if (!is(",")) return first;
        Node n;
        n.kind = NodeKind::CommaExpr;
        n.children.push_back(std::move(first));
        while (accept(",")) n.children.push_back(parse_assignment());
        return finish(n, start);
    }

    Node parse_assignment() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node lhs = parse_conditional();
        if (cur().kind == TokenKind::Punct && is_assignment_op(cur().text)) {
            advance();
            Node n;
            n.kind = NodeKind::AssignmentExpr;
            n.children.push_back(std::move(lhs));
            n.children.push_back(parse_assignment());
            return finish(n, start);
        }
        return lhs;
    }

    Node parse_conditional() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node cond = parse_binary(1);
        if (!is("?")) return cond;
        advance();
        Node n;
        n.kind = NodeKind::TernaryExpr;
        n.children.push_back(std::move(cond));
        if (!is(":")) n.children.push_back(parse_expression());  // GNU a ?: b
        expect(":");
        n.children.push_back(parse_conditional());
        return finish(n, start);
    }

    Node parse_binary(int min_prec) {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node lhs = parse_cast_expression();
        for (;;) {
            if (cur().kind != TokenKind::Punct) break;
            int prec = binary_precedence(cur().text);
            if (prec < min_prec || prec == 0) break;
            advance();
            Node rhs = parse_binary(prec + 1);
            Node n;
            n.kind = NodeKind::BinaryExpr;
            n.children.push_back(std::move(lhs));
            n.children.push_back(std::move(rhs));
            lhs = finish(n, start);
        }
        return lhs;
    }

    // Is '(' at p_ the start of a type, judged without consuming?
    bool paren_starts_type() const {
        const Token& t1 = peek(1);
        if (t1.kind == TokenKind::Keyword &&
            (is_type_keyword(t1.text) || is_qualifier_keyword(t1.text) ||
             is_tag_keyword(t1.text)))
            return true;
        if (t1.kind == TokenKind::Identifier) {
            if (known_type(t1.text)) return true;
            // (Name * ...) or (Name [ — a type only when shaped like one
            size_t k = 2;
            bool saw_star = false;
            while (peek(k).text == "*" || (peek(k).kind == TokenKind::Keyword &&
                                           is_qualifier_keyword(peek(k).text))) {
                if (peek(k).text == "*") saw_star = true;
                ++k;
            }
            if (saw_star && (peek(k).text == ")" || peek(k).text == "(")) return true;
        }
        return false;
    }

    Node parse_type_name() {
        uint32_t start = cur().start;
        Node n;
        n.kind = NodeKind::TypeName;
        Specs specs = parse_specifiers(true);
        for (auto& s : specs.nodes) n.children.push_back(std::move(s));
        if (!is(")") && !is(",") && !is("]")) {
            DeclaratorResult d = parse_declarator(Category::Var, false);  // abstract
            n.children.push_back(std::move(d.node));
        }
        return finish(n, start);
    }

    Node parse_cast_expression() {
        DepthGuard guard(*this);
        if (is("(") && paren_starts_type()) {
            uint32_t start = cur().start;
            advance();
            Node type = parse_type_name();
            expect(")");
            if (is("{")) {
                Node n;
                n.kind = NodeKind::CompoundLiteral;
                n.children.push_back(std::move(type));
                n.children.push_back(parse_initializer());
                return finish(n, start);
            }
            Node n;
            n.kind = NodeKind::CastExpr;
            n.children.push_back(std::move(type));
            n.children.push_back(parse_cast_expression());
            return finish(n, start);
        }
        return parse_unary();
    }

    Node parse_unary() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        if (is("++") || is("--")) {
            advance();
            Node n;
            n.kind = NodeKind::UpdateExpr;
            n.children.push_back(parse_unary());
            return finish(n, start);
        }
        if (is("*") || is("&") || is("+") || is("-") || is("!") || is("~")) {
            Node op = leaf(NodeKind::PunctToken, cur());
            advance();
            Node n;
            n.kind = NodeKind::UnaryExpr;
            n.children.push_back(std::move(op));
            n.children.push_back(parse_cast_expression());
            return finish(n, start);
        }
        if (is_kw("sizeof") || is_kw("_Alignof")) {
            advance();
            Node n;
            n.kind = NodeKind::SizeofExpr;
            if (is("(") && paren_starts_type()) {
                advance();
                n.children.push_back(parse_type_name());
                expect(")");
            } else {
                n.children.push_back(parse_unary());
            }
            return finish(n, start);
        }
        return parse_postfix();
    }

    Node parse_postfix() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        Node expr = parse_primary();
        for (;;) {
            if (is("(")) {
                if (expr.kind == NodeKind::Identifier) expr.category = Category::Func;
                advance();
                Node n;
                n.kind = NodeKind::CallExpr;
                n.children.push_back(std::move(expr));
                while (!at_eof() && !is(")")) {
                    n.children.push_back(parse_call_argument());
                    if (!accept(",")) break;
                }
                expect(")");
                expr = finish(n, start);
                continue;
            }
            if (is("[")) {
                advance();
                Node n;
                n.kind = NodeKind::SubscriptExpr;
                n.children.push_back(std::move(expr));
                n.children.push_back(parse_expression());
                expect("]");
                expr = finish(n, start);
                continue;
            }
            if (is(".") || is("->")) {
                Node punct = leaf(NodeKind::PunctToken, cur());
                advance();
                if (!is_ident())
                    throw ParseError{cur().start, "expected member name"};
                Node n;
                n.kind = NodeKind::MemberExpr;
                n.children.push_back(std::move(expr));
                n.children.push_back(std::move(punct));
                n.children.push_back(ident_leaf(advance(), Category::Field, false));
                expr = finish(n, start);
                continue;
            }
            if (is("++") || is("--")) {
                advance();
                Node n;
                n.kind = NodeKind::UpdateExpr;
                n.children.push_back(std::move(expr));
                expr = finish(n, start);
                continue;
            }
            break;
        }
        return expr;
    }

    // Arguments tolerate bare type names (sizeof/va_arg-like macros survive).
    Node parse_call_argument() {
        if (cur().kind == TokenKind::Keyword &&
            (is_type_keyword(cur().text) || is_tag_keyword(cur().text))) {
            return parse_type_name();
        }
        if (is_ident() && known_type(cur().text) &&
            (peek(1).text == "," || peek(1).text == ")")) {
            return parse_type_name();
        }
        return parse_assignment();
    }

    Node parse_primary() {
        DepthGuard guard(*this);
        uint32_t start = cur().start;
        if (at_attribute()) return parse_attribute();
        if (is_ident()) {
            return ident_leaf(advance(), Category::Var, false);
        }
        if (cur().kind == TokenKind::Number)
            return leaf(NodeKind::NumberLiteral, advance());
        if (cur().kind == TokenKind::String) {
            Node n = leaf(NodeKind::StringLiteral, advance());
            while (cur().kind == TokenKind::String) {  // adjacent literal pieces
                n.end = cur().end;
                advance();
            }
            return n;
        }
        if (cur().kind == TokenKind::Char) return leaf(NodeKind::CharLiteral, advance());
        if (is("(")) {
            advance();
            Node n;
            n.kind = NodeKind::ParenExpr;
            if (is("{")) {  // GNU statement expression
                n.children.push_back(parse_compound_statement());
            } else {
                n.children.push_back(parse_expression());
            }
            expect(")");
            return finish(n, start);
        }
        if (cur().kind == TokenKind::Keyword && is_tag_keyword(cur().text)) {
            return parse_type_name();  // tolerated type operand
        }
        throw ParseError{cur().start,
                         "unexpected token '" + std::string(cur().text) + "'"};
    }
};

// Promote bare references to names that are declared (or called) as
// functions and never declared as values. Keeps the category of every
// occurrence of one name stable across the unit.
void collect_names(const Node& n, const SyntaxTree& tree,
                   std::unordered_set<std::string>& funcs,
                   std::unordered_set<std::string>& value_decls) {
    if (n.kind == NodeKind::Identifier) {
        std::string name(tree.slice(n.start, n.end));
        if (n.category == Category::Func) funcs.insert(name);
        if (n.category == Category::Var && n.decl_site) value_decls.insert(name);
    }
    for (const auto& c : n.children) collect_names(c, tree, funcs, value_decls);
}

void promote_references(Node& n, const SyntaxTree& tree,
                        const std::unordered_set<std::string>& funcs,
                        const std::unordered_set<std::string>& value_decls) {
    if (n.kind == NodeKind::Identifier && n.category == Category::Var &&
        !n.decl_site) {
        std::string name(tree.slice(n.start, n.end));
        if (funcs.count(name) && !value_decls.count(name))
            n.category = Category::Func;
    }
    for (auto& c : n.children) promote_references(c, tree, funcs, value_decls);
}

// Preproc directives are parsed around; re-attach each one as a child of
// the deepest node whose span contains it so span invariants hold.
void attach_preproc(Node& node, const Token& tok) {
    for (auto& child : node.children) {
        if (child.start <= tok.start && tok.end <= child.end &&
            child.kind != NodeKind::Identifier) {
            attach_preproc(child, tok);
            return;
        }
    }
    Node p;
    p.kind = NodeKind::PreprocDirective;
    p.start = tok.start;
    p.end = tok.end;
    auto it = std::upper_bound(
        node.children.begin(), node.children.end(), tok.start,
        [](uint32_t pos, const Node& n) { return pos < n.start; });
    node.children.insert(it, std::move(p));
}

bool all_whitespace(std::string_view s) {
    for (char c : s)
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n' && c != '\v' && c != '\f')
            return false;
    return true;
}

} // namespace

ParseOutcome parse(std::string_view source, std::optional<std::string_view> header) {
    ParseOutcome outcome;
    if (source.empty() || all_whitespace(source)) {
        outcome.status = ParseStatus::Failed;
        outcome.diagnostics.push_back({0, "empty input"});
        return outcome;
    }

    SyntaxTree tree;
    if (header && !header->empty()) {
        tree.text.reserve(header->size() + source.size());
        tree.text.append(*header);
        tree.header_len = uint32_t(tree.text.size());
        tree.text.append(source);
    } else {
        tree.text.assign(source);
    }

    LexResult lexed = lex(tree.text);
    std::vector<Diagnostic> diags;
    for (const auto& d : lexed.diagnostics) diags.push_back({d.offset, d.message});

    size_t real_tokens = 0;
    for (const auto& t : lexed.tokens)
        if (t.kind != TokenKind::Eof && t.kind != TokenKind::Preproc) ++real_tokens;

    Parser parser(tree.text, lexed.tokens, diags);
    tree.root = parser.parse_translation_unit();

    std::unordered_set<std::string> funcs, value_decls;
    collect_names(tree.root, tree, funcs, value_decls);
    promote_references(tree.root, tree, funcs, value_decls);

    for (const auto& t : lexed.tokens)
        if (t.kind == TokenKind::Preproc) attach_preproc(tree.root, t);

    bool any_structural = false;
    bool any_error = false;
    for (const auto& c : tree.root.children) {
        if (c.kind == NodeKind::ErrorNode) {
            any_error = true;
        } else if (c.kind != NodeKind::PreprocDirective) {
            any_structural = true;
        }
    }

    // Offsets in diagnostics are reported relative to the source portion.
    for (auto& d : outcome.diagnostics) (void)d;
    for (auto& d : diags) {
        if (d.offset >= tree.header_len) {
            d.offset -= tree.header_len;
        } else {
            d.message = "in synthesized header: " + d.message;
            d.offset = 0;
        }
    }
    outcome.diagnostics = std::move(diags);

    if (real_tokens == 0 || (any_error && !any_structural)) {
        outcome.status = ParseStatus::Failed;
        if (outcome.diagnostics.empty())
            outcome.diagnostics.push_back({0, "no parsable content"});
        return outcome;
    }

    outcome.status = outcome.diagnostics.empty() ? ParseStatus::Ok
                                                 : ParseStatus::RecoveredWithErrors;
    outcome.tree = std::move(tree);
    return outcome;
}

std::vector<IdentifierOccurrence> enumerate_identifiers(const SyntaxTree& tree) {
    std::vector<IdentifierOccurrence> out;
    auto walk = [&](auto&& self, const Node& n) -> void {
        if (n.kind == NodeKind::Identifier) {
            if (n.start >= tree.header_len) {
                IdentifierOccurrence occ;
                occ.name = std::string(tree.slice(n.start, n.end));
                occ.category = n.category;
                occ.decl_site = n.decl_site;
                occ.span = {n.start - tree.header_len, n.end - tree.header_len};
                out.push_back(std::move(occ));
            }
            return;
        }
        for (const auto& c : n.children) self(self, c);
    };
    walk(walk, tree.root);
    return out;
}

} // namespace dk::ast
