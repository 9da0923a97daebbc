#include "decompkit/reward/header_synth.hpp"

#include "decompkit/ast/parser.hpp"

#include <map>
#include <set>
#include <sstream>

namespace dk::reward {

namespace {

using ast::Category;
using ast::Node;
using ast::NodeKind;
using ast::SyntaxTree;

struct FieldUse {
    bool arrow = false;   // base of ->, unary *, or subscript: needs pointer
    bool dot = false;     // base of .: needs a by-value record
    bool called = false;  // used as a function pointer
};

struct TypeUse {
    bool tagged = false;    // appeared as `struct T`
    bool plain = false;     // appeared as a bare typedef-style name
    bool by_value = false;  // declared or cast without a pointer
    std::set<std::string> fields;  // members reached through its variables
};

struct Analysis {
    const SyntaxTree& tree;
    std::set<std::string> declared[4];
    std::set<std::string> used[4];
    std::map<std::string, TypeUse> types;
    std::map<std::string, FieldUse> fields;
    std::set<std::string> deref_funcs;
    std::set<std::string> deref_vars;
    std::map<std::string, std::string> var_type;

    explicit Analysis(const SyntaxTree& t) : tree(t) {}

    std::string name_of(const Node& n) const {
        return std::string(tree.slice(n.start, n.end));
    }

    bool any_declared(const std::string& name) const {
        for (const auto& s : declared)
            if (s.count(name)) return true;
        return false;
    }

    const Node* named_identifier(const Node& n) const {
        if (n.kind == NodeKind::Identifier) return &n;
        for (const auto& c : n.children) {
            if (c.kind == NodeKind::ParameterList) continue;
            if (const Node* found = named_identifier(c)) return found;
        }
        return nullptr;
    }

    void collect_occurrences(const Node& n) {
        if (n.kind == NodeKind::Identifier) {
            std::string name = name_of(n);
            size_t c = size_t(n.category);
            used[c].insert(name);
            if (n.decl_site) declared[c].insert(name);
            if (n.category == Category::Type) types[name];
            if (n.category == Category::Field) fields[name];
            return;
        }
        for (const auto& c : n.children) collect_occurrences(c);
    }

    // First unknown-or-known type token among declaration specifiers, plus
    // whether it came from a `struct`/`union` tag.
    struct SpecType {
        std::string token;
        bool tagged = false;
    };

    SpecType spec_type(const Node& n) {
        SpecType st;
        for (const auto& child : n.children) {
            if (child.kind == NodeKind::Identifier &&
                child.category == Category::Type) {
                st.token = name_of(child);
                return st;
            }
            if (child.kind == NodeKind::StructSpecifier ||
                child.kind == NodeKind::UnionSpecifier ||
                child.kind == NodeKind::EnumSpecifier) {
                bool has_body = false;
                const Node* tag = nullptr;
                for (const auto& g : child.children) {
                    if (g.kind == NodeKind::Identifier && g.category == Category::Type)
                        tag = &g;
                    if (g.kind == NodeKind::FieldDeclaration ||
                        g.kind == NodeKind::Enumerator)
                        has_body = true;
                }
                if (tag) {
                    st.token = name_of(*tag);
                    st.tagged = child.kind != NodeKind::EnumSpecifier;
                    if (has_body) declared[size_t(Category::Type)].insert(st.token);
                }
                return st;
            }
            if (child.kind == NodeKind::Declarator ||
                child.kind == NodeKind::InitDeclarator)
                break;
        }
        return st;
    }

    static bool declarator_is_pointer(const Node& decl) {
        const Node* d = &decl;
        if (d->kind == NodeKind::InitDeclarator && !d->children.empty())
            d = &d->children.front();
        for (const auto& g : d->children) {
            if (g.kind == NodeKind::PunctToken) return true;  // leading '*'
            if (g.kind == NodeKind::Identifier || g.kind == NodeKind::Declarator)
                return false;
        }
        return false;
    }

    void note_declarator(const SpecType& st, const Node& decl) {
        if (st.token.empty()) return;
        auto& tu = types[st.token];
        if (st.tagged) tu.tagged = true; else tu.plain = true;
        if (!declarator_is_pointer(decl)) tu.by_value = true;
        const Node* d = &decl;
        if (d->kind == NodeKind::InitDeclarator && !d->children.empty())
            d = &d->children.front();
        if (const Node* id = named_identifier(*d)) {
            if (id->category == Category::Var || id->category == Category::Field)
                var_type[name_of(*id)] = st.token;
        }
    }

    void collect_declarations(const Node& n) {
        switch (n.kind) {
            case NodeKind::Declaration:
            case NodeKind::TypedefDeclaration:
            case NodeKind::ParameterDeclaration:
            case NodeKind::FieldDeclaration:
            case NodeKind::FunctionDefinition: {
                SpecType st = spec_type(n);
                bool saw_declarator = false;
                for (const auto& child : n.children) {
                    if (child.kind == NodeKind::Declarator ||
                        child.kind == NodeKind::InitDeclarator) {
                        note_declarator(st, child);
                        saw_declarator = true;
                    }
                }
                if (!st.token.empty() && !saw_declarator) types[st.token];
                break;
            }
            case NodeKind::TypeName: {
                SpecType st = spec_type(n);
                if (!st.token.empty()) {
                    auto& tu = types[st.token];
                    if (st.tagged) tu.tagged = true; else tu.plain = true;
                    bool pointer = false;
                    for (const auto& child : n.children)
                        if (child.kind == NodeKind::Declarator &&
                            declarator_is_pointer(child))
                            pointer = true;
                    if (!pointer) tu.by_value = true;
                }
                break;
            }
            default:
                break;
        }
        for (const auto& c : n.children) collect_declarations(c);
    }

    std::string cast_type_token(const Node& cast) const {
        if (cast.children.empty()) return "";
        const Node& tn = cast.children[0];
        if (tn.kind != NodeKind::TypeName) return "";
        for (const auto& child : tn.children) {
            if (child.kind == NodeKind::Identifier && child.category == Category::Type)
                return name_of(child);
            if (child.kind == NodeKind::StructSpecifier ||
                child.kind == NodeKind::UnionSpecifier) {
                for (const auto& g : child.children)
                    if (g.kind == NodeKind::Identifier) return name_of(g);
            }
        }
        return "";
    }

    void collect_access_shapes(const Node& n) {
        if (n.kind == NodeKind::MemberExpr && n.children.size() == 3) {
            const Node& base = n.children[0];
            const Node& punct = n.children[1];
            const Node& member = n.children[2];
            mark_base(base, name_of(punct) == "->");
            fields[name_of(member)];
            const Node* b = &base;
            while (b->kind == NodeKind::ParenExpr && !b->children.empty())
                b = &b->children[0];
            if (b->kind == NodeKind::Identifier) {
                auto it = var_type.find(name_of(*b));
                if (it != var_type.end())
                    types[it->second].fields.insert(name_of(member));
            } else if (b->kind == NodeKind::CastExpr) {
                std::string tok = cast_type_token(*b);
                if (!tok.empty()) types[tok].fields.insert(name_of(member));
            } else if (b->kind == NodeKind::MemberExpr && b->children.size() == 3) {
                // chain through a field whose declared type is known
                auto it = var_type.find(name_of(b->children[2]));
                if (it != var_type.end())
                    types[it->second].fields.insert(name_of(member));
            }
        }
        if (n.kind == NodeKind::UnaryExpr && n.children.size() == 2 &&
            n.children[0].kind == NodeKind::PunctToken &&
            name_of(n.children[0]) == "*") {
            mark_base(n.children[1], true);
        }
        if (n.kind == NodeKind::SubscriptExpr && !n.children.empty()) {
            mark_base(n.children[0], true);
        }
        if (n.kind == NodeKind::CallExpr && !n.children.empty() &&
            n.children[0].kind == NodeKind::MemberExpr &&
            n.children[0].children.size() == 3) {
            fields[name_of(n.children[0].children[2])].called = true;
        }
        for (const auto& c : n.children) collect_access_shapes(c);
    }

    void mark_base(const Node& base, bool arrow) {
        const Node* b = &base;
        while (b->kind == NodeKind::ParenExpr && !b->children.empty())
            b = &b->children[0];
        if (b->kind == NodeKind::MemberExpr && b->children.size() == 3) {
            auto& fu = fields[name_of(b->children[2])];
            if (arrow) fu.arrow = true; else fu.dot = true;
        } else if (b->kind == NodeKind::CallExpr && !b->children.empty() &&
                   b->children[0].kind == NodeKind::Identifier) {
            if (arrow) deref_funcs.insert(name_of(b->children[0]));
        } else if (b->kind == NodeKind::Identifier) {
            if (arrow && b->category == Category::Var) deref_vars.insert(name_of(*b));
        } else if (b->kind == NodeKind::CastExpr && b->children.size() == 2) {
            mark_base(b->children[1], arrow);
        }
    }
};

} // namespace

std::string synthesize_header(std::string_view ir_text,
                              std::optional<std::string_view> reference_header,
                              const ir::StandardWhitelist& whitelist) {
    if (reference_header) return std::string(*reference_header);

    ast::ParseOutcome outcome = ast::parse(ir_text);
    if (!outcome.ok()) return "";

    Analysis a(*outcome.tree);
    a.collect_occurrences(outcome.tree->root);
    a.collect_declarations(outcome.tree->root);
    a.collect_access_shapes(outcome.tree->root);

    auto standard = [&](const std::string& name) {
        return ast::standard_type_names().count(name) > 0 ||
               ast::standard_constant_names().count(name) > 0;
    };

    std::set<std::string> includes;
    for (const auto& names : a.used) {
        for (const auto& name : names) {
            if (a.any_declared(name)) continue;
            std::string hdr = whitelist.header_for(name);
            if (!hdr.empty()) includes.insert(hdr);
        }
    }

    std::map<std::string, TypeUse> unresolved;
    for (const auto& [name, use] : a.types) {
        if (a.declared[size_t(Category::Type)].count(name) || standard(name) ||
            whitelist.contains(name))
            continue;
        unresolved[name] = use;
    }

    // Pool of fields that no in-unit struct declares; chains through
    // unresolved types resolve against one shared record so arbitrary
    // a->b->c nesting compiles.
    std::set<std::string> pool_fields;
    for (const auto& [fname, fuse] : a.fields)
        if (!a.declared[size_t(Category::Field)].count(fname)) pool_fields.insert(fname);

    bool pool_needed = false;
    for (const auto& [tname, tuse] : unresolved)
        if (!tuse.fields.empty()) pool_needed = true;
    for (const auto& fname : pool_fields) {
        const FieldUse& fu = a.fields.at(fname);
        if (fu.arrow || fu.dot || fu.called) pool_needed = true;
    }
    for (const auto& vname : a.deref_vars)
        if (!a.any_declared(vname) && !whitelist.contains(vname)) pool_needed = true;
    if (!a.deref_funcs.empty()) pool_needed = true;
    if (pool_fields.empty()) pool_needed = false;

    bool need_val_struct = false;
    for (const auto& fname : pool_fields)
        if (a.fields.at(fname).dot) need_val_struct = true;

    std::ostringstream out;
    for (const auto& inc : includes) out << "#include <" << inc << ">\n";

    if (pool_needed) {
        if (need_val_struct) {
            out << "struct __dk_val {\n";
            for (const auto& f : pool_fields) out << "    long long " << f << ";\n";
            out << "};\n";
        }
        out << "struct __dk_rec {\n";
        for (const auto& f : pool_fields) {
            const FieldUse& fu = a.fields.at(f);
            if (fu.called) {
                out << "    long long (*" << f << ")();\n";
            } else if (fu.arrow) {
                out << "    struct __dk_rec *" << f << ";\n";
            } else if (fu.dot) {
                out << "    struct __dk_val " << f << ";\n";
            } else {
                out << "    long long " << f << ";\n";
            }
        }
        out << "};\n";
    }

    for (const auto& [tname, tuse] : unresolved) {
        if (!tuse.fields.empty() && pool_needed) {
            if (tuse.tagged) {
                out << "#define " << tname << " __dk_rec\n";
            } else {
                out << "typedef struct __dk_rec " << tname << ";\n";
            }
        } else if (tuse.by_value) {
            out << "typedef long long " << tname << ";\n";
        } else if (tuse.tagged) {
            out << "struct " << tname << ";\n";
        } else {
            out << "typedef struct " << tname << " " << tname << ";\n";
        }
    }

    for (const auto& fname : a.used[size_t(Category::Func)]) {
        if (a.declared[size_t(Category::Func)].count(fname) ||
            whitelist.contains(fname) || ast::is_c_keyword(fname))
            continue;
        if (a.deref_funcs.count(fname)) {
            out << "extern struct __dk_rec *" << fname << "();\n";
        } else {
            out << "extern long long " << fname << "();\n";
        }
    }

    for (const auto& vname : a.used[size_t(Category::Var)]) {
        if (a.any_declared(vname) || whitelist.contains(vname) || standard(vname))
            continue;
        if (a.deref_vars.count(vname)) {
            out << "extern struct __dk_rec *" << vname << ";\n";
        } else {
            out << "extern long long " << vname << ";\n";
        }
    }

    return out.str();
}

} // namespace dk::reward
