#include "pf/dsl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pf {

std::shared_ptr<TypedGraph> clone_graph(const TypedGraph& g) {
    auto copy = std::make_shared<TypedGraph>(g.meta());
    for (const auto& [id, node] : g.nodes()) copy->add_node(node);
    for (const auto& [id, edge] : g.edges()) copy->add_edge(edge);
    for (const auto& atom : g.atoms()) copy->add_atom(atom);
    return copy;
}

GraphMorphism inclusion_morphism(GraphPtr sub, GraphPtr super) {
    GraphMorphism m;
    m.source = std::move(sub);
    m.target = std::move(super);
    for (const auto& [id, node] : m.source->nodes()) {
        if (!m.target->has_node(id))
            throw PfError("inclusion target lacks node '" + id + "'");
        m.node_map[id] = id;
    }
    for (const auto& [id, edge] : m.source->edges()) {
        if (!m.target->has_edge(id))
            throw PfError("inclusion target lacks edge '" + id + "'");
        m.edge_map[id] = id;
    }
    return m;
}

namespace {

// ---------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------

enum class TokKind { Ident, String, Int, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    long long ivalue = 0;
    SourceSpan span;
};

class Lexer {
public:
    Lexer(const std::string& text, std::string filename)
        : text_(text), filename_(std::move(filename)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_trivia();
            Token t = next_token();
            bool end = t.kind == TokKind::End;
            out.push_back(std::move(t));
            if (end) break;
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg, int line, int col, int len) {
        throw ParseError(
            Diagnostic{Severity::Error, msg, SourceSpan{filename_, line, col, len}});
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

    void advance() {
        if (pos_ >= text_.size()) return;
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token next_token() {
        Token t;
        t.span = SourceSpan{filename_, line_, col_, 1};
        if (pos_ >= text_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                word += peek();
                advance();
            }
            t.kind = TokKind::Ident;
            t.text = std::move(word);
            t.span.length = static_cast<int>(t.text.size());
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(peek()))) {
                digits += peek();
                advance();
            }
            t.kind = TokKind::Int;
            t.text = digits;
            try {
                t.ivalue = std::stoll(digits);
            } catch (const std::exception&) {
                fail("integer literal out of range", t.span.line, t.span.column,
                     static_cast<int>(digits.size()));
            }
            t.span.length = static_cast<int>(digits.size());
            return t;
        }
        if (c == '"') {
            int sline = line_, scol = col_;
            advance();
            std::string value;
            while (true) {
                if (pos_ >= text_.size() || peek() == '\n')
                    fail("unterminated string literal", sline, scol, 1);
                char d = peek();
                if (d == '"') {
                    advance();
                    break;
                }
                if (d == '\\') {
                    advance();
                    char e = peek();
                    switch (e) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default: fail("unknown escape sequence", line_, col_, 2);
                    }
                    advance();
                } else {
                    value += d;
                    advance();
                }
            }
            t.kind = TokKind::String;
            t.text = std::move(value);
            t.span.length = col_ - scol;
            return t;
        }
        // Two-character punctuation first.
        static const char* two_chars[] = {"->", "<=", ">=", "!="};
        for (const char* tc : two_chars) {
            if (c == tc[0] && peek2() == tc[1]) {
                t.kind = TokKind::Punct;
                t.text = tc;
                t.span.length = 2;
                advance();
                advance();
                return t;
            }
        }
        static const std::string singles = "{}(),;:.=<>+-*?";
        if (singles.find(c) != std::string::npos) {
            t.kind = TokKind::Punct;
            t.text = std::string(1, c);
            advance();
            return t;
        }
        fail(std::string("unexpected character '") + c + "'", line_, col_, 1);
    }

    const std::string& text_;
    std::string filename_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ---------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------

bool uppercase_initial(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

/// A part while the document is being read; the tree is assembled once
/// the whole file is known.
struct FlatPart {
    std::string name;
    std::string parent; // empty for the root
    std::shared_ptr<TypedGraph> graph;
    std::map<std::string, std::string> role_labels;
};

class Parser {
public:
    Parser(const std::string& text, std::string filename, bool pattern_file)
        : filename_(std::move(filename)), pattern_file_(pattern_file) {
        tokens_ = Lexer(text, filename_).run();
    }

    Pattern run_pattern();
    GraphPtr run_model();

private:
    // --- token plumbing -------------------------------------------------
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    Token take() {
        Token t = peek();
        if (t.kind != TokKind::End) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, const SourceSpan& span) {
        throw ParseError(Diagnostic{Severity::Error, msg, span});
    }

    [[noreturn]] void fail_here(const std::string& msg) { fail(msg, peek().span); }

    bool at_punct(const std::string& p) const {
        return peek().kind == TokKind::Punct && peek().text == p;
    }

    bool at_word(const std::string& w) const {
        return peek().kind == TokKind::Ident && peek().text == w;
    }

    void expect_punct(const std::string& p) {
        if (!at_punct(p)) fail_here("expected '" + p + "'");
        take();
    }

    void expect_word(const std::string& w) {
        if (!at_word(w)) fail_here("expected '" + w + "'");
        take();
    }

    Token expect_ident(const char* what) {
        if (peek().kind != TokKind::Ident) fail_here(std::string("expected ") + what);
        Token t = take();
        if (!t.text.empty() && t.text[0] == '_')
            fail("identifiers starting with '_' are reserved", t.span);
        return t;
    }

    /// Identifier or quoted string used as a name/id.
    Token expect_name(const char* what) {
        if (peek().kind == TokKind::Ident) return expect_ident(what);
        if (peek().kind == TokKind::String) return take();
        fail_here(std::string("expected ") + what);
    }

    /// Dotted reference such as a.b or subjects."odd id".
    std::string parse_ref(const char* what) {
        std::string out = expect_name(what).text;
        while (at_punct(".")) {
            take();
            out += "." + expect_name("identifier after '.'").text;
        }
        return out;
    }

    // --- element parsing ------------------------------------------------

    std::string fresh_var() { return "_a" + std::to_string(++anon_counter_); }

    AttributeValue default_slot(const AttrDecl& decl, const SourceSpan& span) {
        if (pattern_file_) // unwritten pattern slots are don't-care variables
            return AttributeValue::var(fresh_var(), decl.sort);
        switch (decl.sort) {
        case Sort::String: return AttributeValue::string_const(decl.default_value);
        case Sort::Boolean: return AttributeValue::bool_const(decl.default_value == "true");
        case Sort::Enum:
            if (decl.default_value.empty())
                fail("attribute '" + decl.name + "' needs a value", span);
            return AttributeValue::enum_const(decl.default_value);
        case Sort::Integer:
            return AttributeValue::int_const(
                decl.default_value.empty() ? 0 : std::stoll(decl.default_value));
        }
        fail("attribute '" + decl.name + "' needs a value", span);
    }

    AttributeValue parse_value(const AttrDecl& decl) {
        const Token& t = peek();
        if (t.kind == TokKind::Punct && t.text == "?") {
            take();
            Token name = expect_name("variable name after '?'");
            return AttributeValue::var(name.text, decl.sort);
        }
        if (t.kind == TokKind::Int) {
            if (decl.sort != Sort::Integer)
                fail("attribute '" + decl.name + "' is not integer-sorted", t.span);
            return AttributeValue::int_const(take().ivalue);
        }
        if (t.kind == TokKind::String) {
            Token s = take();
            switch (decl.sort) {
            case Sort::String: return AttributeValue::string_const(s.text);
            case Sort::Enum:
                if (!decl.valid_enum_member(s.text))
                    fail("'" + s.text + "' is not a member of enum '" + decl.name + "'",
                         s.span);
                return AttributeValue::enum_const(s.text);
            default:
                fail("attribute '" + decl.name + "' cannot take a string", s.span);
            }
        }
        if (t.kind == TokKind::Ident) {
            Token w = take();
            if (decl.sort == Sort::Boolean) {
                if (w.text == "true") return AttributeValue::bool_const(true);
                if (w.text == "false") return AttributeValue::bool_const(false);
                if (pattern_file_ && uppercase_initial(w.text))
                    return AttributeValue::var(w.text, Sort::Boolean);
                fail("expected true, false or a variable", w.span);
            }
            if (pattern_file_ && uppercase_initial(w.text))
                return AttributeValue::var(w.text, decl.sort);
            switch (decl.sort) {
            case Sort::String: return AttributeValue::string_const(w.text);
            case Sort::Enum:
                if (!decl.valid_enum_member(w.text))
                    fail("'" + w.text + "' is not a member of enum '" + decl.name + "'",
                         w.span);
                return AttributeValue::enum_const(w.text);
            case Sort::Integer:
                fail("attribute '" + decl.name + "' takes a number or a variable",
                     w.span);
            default: break;
            }
        }
        fail_here("expected a value");
    }

    const NodeType& node_type(const std::string& name, const SourceSpan& span) {
        const NodeType* nt = meta_->find_node_type(name);
        if (!nt) fail("unknown node type '" + name + "'", span);
        return *nt;
    }

    void add_node_checked(TypedGraph& g, GraphNode node, const SourceSpan& span) {
        try {
            g.add_node(std::move(node));
        } catch (const PfError& e) {
            fail(e.what(), span);
        }
    }

    void add_edge_checked(TypedGraph& g, GraphEdge edge, const SourceSpan& span) {
        try {
            g.add_edge(std::move(edge));
        } catch (const PfError& e) {
            fail(e.what(), span);
        }
    }

    std::string auto_edge_id(const TypedGraph& g) {
        std::string id;
        std::size_t n = g.edges().size() + 1;
        do {
            id = "e" + std::to_string(n++);
        } while (g.has_edge(id));
        return id;
    }

    /// Remaining class body sections after an optional leading `name:`:
    /// `ops: F() mods as R, ...; attrs: a mods, ...` up to the closing brace.
    void parse_class_body(TypedGraph& g, const std::string& class_id,
                          std::map<std::string, std::string>* roles) {
        const NodeType& op_type = node_type("Operation", peek().span);
        const NodeType& attr_type = node_type("Attribute", peek().span);
        while (!at_punct("}")) {
            Token section = expect_ident("section (ops or attrs)");
            expect_punct(":");
            if (section.text == "name") {
                fail("'name' must be the first section of a class body", section.span);
            } else if (section.text == "ops" || section.text == "attrs") {
                bool ops = section.text == "ops";
                while (true) {
                    Token item = expect_name(ops ? "operation name" : "attribute name");
                    if (ops) {
                        expect_punct("(");
                        expect_punct(")");
                    }
                    GraphNode member;
                    member.id = class_id + "." + item.text;
                    member.type = ops ? "Operation" : "Attribute";
                    const NodeType& nt = ops ? op_type : attr_type;
                    AttributeValue name_value =
                        pattern_file_ && uppercase_initial(item.text)
                            ? AttributeValue::var(item.text, Sort::String)
                            : AttributeValue::string_const(item.text);
                    member.attrs["name"] = name_value;
                    std::optional<std::string> role;
                    while (peek().kind == TokKind::Ident) {
                        Token mod = take();
                        if (mod.text == "abstract" && ops)
                            member.attrs["abstract"] = AttributeValue::bool_const(true);
                        else if (mod.text == "concrete" && ops)
                            member.attrs["abstract"] = AttributeValue::bool_const(false);
                        else if (mod.text == "static")
                            member.attrs["static"] = AttributeValue::bool_const(true);
                        else if (mod.text == "public" || mod.text == "private" ||
                                 mod.text == "protected")
                            member.attrs["visibility"] =
                                AttributeValue::enum_const(mod.text);
                        else if (mod.text == "as")
                            role = expect_ident("role name").text;
                        else
                            fail("unknown modifier '" + mod.text + "'", mod.span);
                    }
                    for (const auto& decl : nt.attrs)
                        if (!member.attrs.count(decl.name))
                            member.attrs[decl.name] = default_slot(decl, item.span);
                    std::string member_id = member.id;
                    add_node_checked(g, std::move(member), item.span);
                    GraphEdge owns;
                    owns.id = auto_edge_id(g);
                    owns.type = ops ? "owns_op" : "owns_attr";
                    owns.src = class_id;
                    owns.dst = member_id;
                    add_edge_checked(g, std::move(owns), item.span);
                    if (role) {
                        if (!roles) fail("role labels are not allowed here", item.span);
                        (*roles)[member_id] = *role;
                    }
                    if (at_punct(",")) {
                        take();
                        continue;
                    }
                    break;
                }
            } else {
                fail("unknown section '" + section.text + "'", section.span);
            }
            if (at_punct(";")) take();
        }
        take(); // closing brace
    }

    /// One element declaration inside root/part/constraint blocks.
    void parse_element(TypedGraph& g, std::map<std::string, std::string>* roles) {
        Token head = expect_ident("element keyword");
        if (head.text == "class") {
            if (meta_->tag() != "classdiagram")
                fail("'class' needs a classdiagram", head.span);
            Token id = expect_name("class name");
            GraphNode node;
            node.id = id.text;
            node.type = "Class";
            std::optional<std::string> role;
            while (peek().kind == TokKind::Ident && (at_word("abstract") ||
                                                     at_word("concrete") || at_word("as"))) {
                Token mod = take();
                if (mod.text == "abstract")
                    node.attrs["abstract"] = AttributeValue::bool_const(true);
                else if (mod.text == "concrete")
                    node.attrs["abstract"] = AttributeValue::bool_const(false);
                else
                    role = expect_ident("role name").text;
            }
            bool has_body = at_punct("{");
            if (has_body) {
                take();
                if (at_word("name")) {
                    take();
                    expect_punct(":");
                    node.attrs["name"] =
                        parse_value(*node_type("Class", id.span).find_attr("name"));
                    if (at_punct(";")) take();
                }
            }
            finish_class_node(g, node, id);
            if (role) record_role(roles, node.id, *role, id.span);
            if (has_body) parse_class_body(g, id.text, roles);
            expect_punct(";");
            return;
        }
        if (head.text == "node") {
            Token type_tok = expect_ident("node type");
            const NodeType& nt = node_type(type_tok.text, type_tok.span);
            Token id = expect_name("node id");
            GraphNode node;
            node.id = id.text;
            node.type = nt.name;
            std::optional<std::string> role;
            if (at_word("as")) {
                take();
                role = expect_ident("role name").text;
            }
            if (at_punct("{")) {
                take();
                while (!at_punct("}")) {
                    Token attr = expect_ident("attribute name");
                    const AttrDecl* decl = nt.find_attr(attr.text);
                    if (!decl)
                        fail("attribute '" + attr.text + "' not declared on " + nt.name,
                             attr.span);
                    expect_punct(":");
                    if (node.attrs.count(attr.text))
                        fail("attribute '" + attr.text + "' set twice", attr.span);
                    node.attrs[attr.text] = parse_value(*decl);
                    if (at_punct(",")) take();
                }
                take();
            }
            for (const auto& decl : nt.attrs)
                if (!node.attrs.count(decl.name))
                    node.attrs[decl.name] = default_slot(decl, id.span);
            add_node_checked(g, node, id.span);
            if (role) record_role(roles, node.id, *role, id.span);
            expect_punct(";");
            return;
        }
        if (head.text == "lifeline") {
            if (meta_->tag() != "collaboration")
                fail("'lifeline' needs a collaboration diagram", head.span);
            Token id = expect_name("lifeline id");
            GraphNode node;
            node.id = id.text;
            node.type = "Lifeline";
            std::optional<std::string> role;
            if (at_word("as")) {
                take();
                role = expect_ident("role name").text;
            }
            if (at_punct("{")) {
                take();
                expect_word("name");
                expect_punct(":");
                node.attrs["name"] =
                    parse_value(*node_type("Lifeline", id.span).find_attr("name"));
                expect_punct("}");
            } else {
                node.attrs["name"] = pattern_file_ && uppercase_initial(id.text)
                                         ? AttributeValue::var(id.text, Sort::String)
                                         : AttributeValue::string_const(id.text);
            }
            add_node_checked(g, node, id.span);
            if (role) record_role(roles, node.id, *role, id.span);
            expect_punct(";");
            return;
        }
        if (head.text == "message") {
            if (meta_->tag() != "collaboration")
                fail("'message' needs a collaboration diagram", head.span);
            const NodeType& nt = node_type("Message", head.span);
            Token id = expect_name("message id");
            GraphNode node;
            node.id = id.text;
            node.type = "Message";
            std::optional<std::string> role;
            if (at_word("as")) {
                take();
                role = expect_ident("role name").text;
            }
            if (at_punct("{")) {
                take();
                while (!at_punct("}")) {
                    Token attr = expect_ident("attribute name");
                    const AttrDecl* decl = nt.find_attr(attr.text);
                    if (!decl)
                        fail("attribute '" + attr.text + "' not declared on Message",
                             attr.span);
                    expect_punct(":");
                    node.attrs[attr.text] = parse_value(*decl);
                    if (at_punct(",")) take();
                }
                take();
            }
            for (const auto& decl : nt.attrs)
                if (!node.attrs.count(decl.name))
                    node.attrs[decl.name] = default_slot(decl, id.span);
            add_node_checked(g, node, id.span);
            if (role) record_role(roles, node.id, *role, id.span);
            expect_punct(";");
            return;
        }
        if (head.text == "edge") {
            Token type_tok = expect_ident("edge type");
            const EdgeType* et = meta_->find_edge_type(type_tok.text);
            if (!et) fail("unknown edge type '" + type_tok.text + "'", type_tok.span);
            std::string src = parse_ref("source node");
            expect_punct("->");
            std::string dst = parse_ref("target node");
            GraphEdge edge;
            edge.type = et->name;
            edge.src = src;
            edge.dst = dst;
            if (peek().kind == TokKind::Ident || peek().kind == TokKind::String)
                edge.id = expect_name("edge id").text;
            else
                edge.id = auto_edge_id(g);
            add_edge_checked(g, edge, type_tok.span);
            expect_punct(";");
            return;
        }
        if (head.text == "where") {
            while (true) {
                RelAtom atom = parse_atom();
                g.add_atom(atom);
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            expect_punct(";");
            return;
        }
        fail("unknown element '" + head.text + "'", head.span);
    }

    void record_role(std::map<std::string, std::string>* roles, const std::string& node,
                     const std::string& role, const SourceSpan& span) {
        if (!roles) fail("role labels are not allowed here", span);
        (*roles)[node] = role;
    }

    void finish_class_node(TypedGraph& g, GraphNode& node, const Token& id) {
        if (!node.attrs.count("name"))
            node.attrs["name"] = pattern_file_ && uppercase_initial(id.text)
                                     ? AttributeValue::var(id.text, Sort::String)
                                     : AttributeValue::string_const(id.text);
        const NodeType& nt = node_type("Class", id.span);
        for (const auto& decl : nt.attrs)
            if (!node.attrs.count(decl.name))
                node.attrs[decl.name] = default_slot(decl, id.span);
        add_node_checked(g, node, id.span);
    }

    RelOp parse_relop() {
        if (peek().kind == TokKind::Punct) {
            const std::string& p = peek().text;
            std::optional<RelOp> op;
            if (p == "<") op = RelOp::Lt;
            else if (p == "<=") op = RelOp::Le;
            else if (p == "=") op = RelOp::Eq;
            else if (p == ">") op = RelOp::Gt;
            else if (p == ">=") op = RelOp::Ge;
            if (op) {
                take();
                return *op;
            }
        }
        fail_here("expected one of < <= = > >=");
    }

    RelAtom parse_atom() {
        // operand op operand, at least one side a variable
        auto operand = [&]() -> std::pair<bool, std::pair<std::string, long long>> {
            if (peek().kind == TokKind::Int) {
                long long v = take().ivalue;
                return {false, {"", v}};
            }
            Token t = expect_name("condition operand");
            return {true, {t.text, 0}};
        };
        auto lhs = operand();
        SourceSpan op_span = peek().span;
        RelOp op = parse_relop();
        auto rhs = operand();
        if (lhs.first && rhs.first)
            return RelAtom::var_var(lhs.second.first, op, rhs.second.first);
        if (lhs.first) return RelAtom::var_const(lhs.second.first, op, rhs.second.second);
        if (rhs.first)
            return RelAtom::var_const(rhs.second.first, flip_rel_op(op),
                                      lhs.second.second);
        fail("a condition needs at least one variable", op_span);
    }

    // --- equation terms -------------------------------------------------

    CountTerm parse_term() {
        CountTerm t = parse_factor();
        while (at_punct("+") || at_punct("-")) {
            bool add = take().text == "+";
            CountTerm r = parse_factor();
            t = add ? CountTerm::add(std::move(t), std::move(r))
                    : CountTerm::sub(std::move(t), std::move(r));
        }
        return t;
    }

    CountTerm parse_factor() {
        CountTerm t = parse_primary();
        while (at_punct("*")) {
            take();
            CountTerm r = parse_primary();
            t = CountTerm::mul(std::move(t), std::move(r));
        }
        return t;
    }

    CountTerm parse_primary() {
        if (peek().kind == TokKind::Int) return CountTerm::constant(take().ivalue);
        if (peek().kind == TokKind::Ident)
            return CountTerm::variable(expect_ident("count variable").text);
        if (at_punct("(")) {
            take();
            CountTerm t = parse_term();
            expect_punct(")");
            return t;
        }
        fail_here("expected a count term");
    }

    CountRelation parse_relation() {
        CountRelation rel;
        rel.lhs = parse_term();
        rel.op = parse_relop();
        rel.rhs = parse_term();
        return rel;
    }

    // --- pattern structure ----------------------------------------------

    FlatPart* find_flat(const std::string& name) {
        for (auto& part : flat_parts_)
            if (part.name == name) return &part;
        return nullptr;
    }

    std::shared_ptr<TypedGraph> parse_block_into(std::shared_ptr<TypedGraph> g,
                                                 std::map<std::string, std::string>* roles) {
        expect_punct("{");
        while (!at_punct("}")) parse_element(*g, roles);
        take();
        return g;
    }

    Pattern assemble(Pattern&& p) {
        auto build = [&](auto&& self, const FlatPart& flat) -> VariablePart {
            VariablePart part;
            part.name = flat.name;
            part.graph = flat.graph;
            part.role_labels = flat.role_labels;
            if (!flat.parent.empty()) {
                FlatPart* parent = find_flat(flat.parent);
                part.embedding = inclusion_morphism(parent->graph, flat.graph);
            }
            for (const auto& child : flat_parts_)
                if (child.parent == flat.name) part.children.push_back(self(self, child));
            return part;
        };
        p.root = build(build, *find_flat("root"));
        return std::move(p);
    }

    const std::string filename_;
    const bool pattern_file_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    MetamodelPtr meta_;
    int anon_counter_ = 0;
    int constraint_counter_ = 0;
    std::vector<FlatPart> flat_parts_;
};

Pattern Parser::run_pattern() {
    Pattern p;
    expect_word("pattern");
    p.name = expect_ident("pattern name").text;
    expect_punct("{");

    while (!at_punct("}")) {
        Token item = expect_ident("pattern item");
        if (item.text == "diagram") {
            if (meta_) fail("'diagram' must precede every graph block", item.span);
            Token tag = expect_ident("diagram kind");
            meta_ = metamodel_by_tag(tag.text);
            if (!meta_) fail("unknown diagram kind '" + tag.text + "'", tag.span);
            expect_punct(";");
            continue;
        }
        if (!meta_ && (item.text == "root" || item.text == "part" ||
                       item.text == "nac" || item.text == "require"))
            meta_ = class_diagram_metamodel(); // the default diagram kind
        if (item.text == "intent") {
            if (peek().kind != TokKind::String) fail_here("expected the intent string");
            p.intent = take().text;
            expect_punct(";");
        } else if (item.text == "roles") {
            while (true) {
                p.roles.push_back(expect_ident("role name").text);
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            expect_punct(";");
        } else if (item.text == "root") {
            if (find_flat("root")) fail("duplicate root block", item.span);
            FlatPart flat;
            flat.name = "root";
            flat.graph = std::make_shared<TypedGraph>(meta_);
            flat_parts_.push_back(std::move(flat));
            FlatPart& stored = flat_parts_.back();
            parse_block_into(stored.graph, &stored.role_labels);
        } else if (item.text == "part") {
            Token name = expect_ident("part name");
            expect_word("in");
            Token parent = expect_ident("parent part");
            FlatPart* parent_flat = find_flat(parent.text);
            if (!parent_flat)
                fail("unknown parent part '" + parent.text +
                         "' (declare parts after their parent)",
                     parent.span);
            if (find_flat(name.text)) fail("duplicate part name", name.span);
            FlatPart flat;
            flat.name = name.text;
            flat.parent = parent.text;
            flat.graph = clone_graph(*parent_flat->graph);
            flat_parts_.push_back(std::move(flat));
            FlatPart& stored = flat_parts_.back();
            parse_block_into(stored.graph, &stored.role_labels);
        } else if (item.text == "equations") {
            while (true) {
                p.equations.push_back(parse_relation());
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            expect_punct(";");
        } else if (item.text == "nac" || item.text == "require") {
            bool is_nac = item.text == "nac";
            Token anchor = expect_ident("anchor part");
            FlatPart* anchor_flat = find_flat(anchor.text);
            if (!anchor_flat) fail("unknown part '" + anchor.text + "'", anchor.span);
            AtomicConstraint c;
            c.anchor = anchor.text;
            if (peek().kind == TokKind::String)
                c.label = take().text;
            else
                c.label = (is_nac ? "nac-" : "require-") +
                          std::to_string(++constraint_counter_);
            if (is_nac) {
                auto premise = clone_graph(*anchor_flat->graph);
                parse_block_into(premise, nullptr);
                c.premise = premise;
                c.premise_embedding = inclusion_morphism(anchor_flat->graph, premise);
            } else {
                expect_punct("{");
                expect_word("premise");
                auto premise = clone_graph(*anchor_flat->graph);
                parse_block_into(premise, nullptr);
                c.premise = premise;
                c.premise_embedding = inclusion_morphism(anchor_flat->graph, premise);
                if (!at_word("consequence"))
                    fail_here("'require' needs at least one consequence");
                while (at_word("consequence")) {
                    take();
                    auto cons = clone_graph(*premise);
                    parse_block_into(cons, nullptr);
                    AtomicConstraint::Consequence done;
                    done.graph = cons;
                    done.embedding = inclusion_morphism(c.premise, cons);
                    c.consequences.push_back(std::move(done));
                }
                expect_punct("}");
            }
            p.constraints.push_back(std::move(c));
        } else if (item.text == "sync") {
            SyncDecl decl;
            decl.secondary = expect_ident("companion pattern name").text;
            expect_punct("{");
            while (at_word("link")) {
                take();
                SyncDecl::Link link;
                link.primary_part = expect_ident("part name").text;
                expect_punct(".");
                link.primary_node = parse_ref("node id");
                expect_punct("=");
                link.secondary_part = expect_ident("part name").text;
                expect_punct(".");
                link.secondary_node = parse_ref("node id");
                expect_punct(";");
                decl.links.push_back(std::move(link));
            }
            expect_punct("}");
            p.sync_decls.push_back(std::move(decl));
        } else {
            fail("unknown pattern item '" + item.text + "'", item.span);
        }
    }
    take(); // closing brace
    if (peek().kind != TokKind::End) fail_here("trailing input after pattern");
    if (!find_flat("root")) fail_here("pattern lacks a root block");
    p.meta = meta_ ? meta_ : class_diagram_metamodel();
    return assemble(std::move(p));
}

GraphPtr Parser::run_model() {
    if (at_word("model")) {
        take();
        Token tag = expect_ident("diagram kind");
        meta_ = metamodel_by_tag(tag.text);
        if (!meta_) fail("unknown diagram kind '" + tag.text + "'", tag.span);
        expect_punct(";");
    } else {
        meta_ = class_diagram_metamodel();
    }
    auto g = std::make_shared<TypedGraph>(meta_);
    while (peek().kind != TokKind::End) parse_element(*g, nullptr);
    return g;
}

} // namespace

Pattern parse_pattern(const std::string& text, const std::string& filename) {
    return Parser(text, filename, true).run_pattern();
}

GraphPtr parse_model(const std::string& text, const std::string& filename) {
    return Parser(text, filename, false).run_model();
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PfError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}
} // namespace

Pattern parse_pattern_file(const std::string& path) {
    return parse_pattern(read_file(path), path);
}

GraphPtr parse_model_file(const std::string& path) {
    return parse_model(read_file(path), path);
}

} // namespace pf
