#include "doctest.h"

#include <algorithm>

#include "helpers.hpp"
#include "pf/dsl.hpp"
#include "pf/pattern.hpp"

using namespace pf;
using namespace pf::test;

namespace {

bool has_error(const ValidationReport& report, const std::string& needle) {
    return std::any_of(report.begin(), report.end(), [&](const Issue& issue) {
        return issue.message.find(needle) != std::string::npos;
    });
}

CountRelation rel(CountTerm lhs, RelOp op, CountTerm rhs) {
    return CountRelation{std::move(lhs), op, std::move(rhs)};
}

/// Hand-built three-part pattern over the class-diagram metamodel:
/// root {base}, part a {+derived inherits base}, a's child a1 {+op on
/// derived}, part b {+client assoc base}; one NAC, one premise with a
/// consequence, one sync declaration.
Pattern make_widget() {
    Pattern p;
    p.name = "Widget";
    p.intent = "exercise the pattern container";
    p.meta = class_diagram_metamodel();
    p.roles = {"Root", "Leaf"};

    auto root_g = std::make_shared<TypedGraph>(p.meta);
    root_g->add_node(class_node("base", svar("B"), AttributeValue::bool_const(true)));
    p.root.name = "root";
    p.root.graph = root_g;
    p.root.role_labels["base"] = "Root";

    auto a_g = clone_graph(*root_g);
    a_g->add_node(class_node("derived", svar("D")));
    a_g->add_edge(edge("inh", "inherits", "derived", "base"));
    VariablePart a;
    a.name = "a";
    a.graph = a_g;
    a.embedding = inclusion_morphism(root_g, a_g);
    a.role_labels["derived"] = "Leaf";

    auto a1_g = clone_graph(*a_g);
    a1_g->add_node(op_node("op", svar("O")));
    a1_g->add_edge(edge("own", "owns_op", "derived", "op"));
    VariablePart a1;
    a1.name = "a1";
    a1.graph = a1_g;
    a1.embedding = inclusion_morphism(a_g, a1_g);
    a.children.push_back(std::move(a1));

    auto b_g = clone_graph(*root_g);
    b_g->add_node(class_node("client", AttributeValue::string_const("Client")));
    b_g->add_edge(edge("use", "assoc", "client", "base"));
    VariablePart b;
    b.name = "b";
    b.graph = b_g;
    b.embedding = inclusion_morphism(root_g, b_g);

    p.root.children.push_back(std::move(a));
    p.root.children.push_back(std::move(b));

    p.equations.push_back(
        rel(CountTerm::variable("Widget"), RelOp::Ge, CountTerm::constant(0)));
    p.equations.push_back(rel(CountTerm::variable("a"), RelOp::Gt, CountTerm::constant(0)));
    p.equations.push_back(rel(CountTerm::variable("b"), RelOp::Eq, CountTerm::variable("a")));

    auto nac_g = clone_graph(*a_g);
    nac_g->add_node(class_node("other", svar("X")));
    nac_g->add_edge(edge("inh2", "inherits", "derived", "other"));
    AtomicConstraint nac;
    nac.anchor = "a";
    nac.label = "single-parent";
    nac.premise = nac_g;
    nac.premise_embedding = inclusion_morphism(a_g, nac_g);
    p.constraints.push_back(std::move(nac));

    auto req_g = clone_graph(*root_g);
    req_g->add_node(op_node("ctor", AttributeValue::string_const("make")));
    req_g->add_edge(edge("e_own", "owns_op", "base", "ctor"));
    auto cons_g = clone_graph(*req_g);
    cons_g->add_node(attr_node("inst", svar("I")));
    cons_g->add_edge(edge("e_attr", "owns_attr", "base", "inst"));
    AtomicConstraint req;
    req.anchor = "root";
    req.label = "holder-for-ctor";
    req.premise = req_g;
    req.premise_embedding = inclusion_morphism(root_g, req_g);
    AtomicConstraint::Consequence cons;
    cons.graph = cons_g;
    cons.embedding = inclusion_morphism(req_g, cons_g);
    req.consequences.push_back(std::move(cons));
    p.constraints.push_back(std::move(req));

    SyncDecl decl;
    decl.secondary = "Seq";
    decl.links.push_back({"a", "derived", "lines", "obs"});
    p.sync_decls.push_back(std::move(decl));
    return p;
}

/// Companion pattern over the collaboration metamodel with one part.
Pattern make_seq() {
    Pattern p;
    p.name = "Seq";
    p.intent = "companion";
    p.meta = collaboration_metamodel();

    auto root_g = std::make_shared<TypedGraph>(p.meta);
    root_g->add_node(lifeline_node("subj", svar("S")));
    p.root.name = "root";
    p.root.graph = root_g;

    auto lines_g = clone_graph(*root_g);
    lines_g->add_node(lifeline_node("obs", svar("T")));
    VariablePart lines;
    lines.name = "lines";
    lines.graph = lines_g;
    lines.embedding = inclusion_morphism(root_g, lines_g);
    p.root.children.push_back(std::move(lines));

    p.equations.push_back(
        rel(CountTerm::variable("lines"), RelOp::Gt, CountTerm::constant(0)));
    return p;
}

SynchronizedPatternSet make_set() {
    SynchronizedPatternSet set;
    set.primary = make_widget();
    set.primary.sync_decls.clear(); // links live on the set in this form
    set.secondaries.push_back(make_seq());
    set.links.push_back({"Seq", "a", "derived", "lines", "obs"});
    set.links.push_back({"Seq", "root", "base", "root", "subj"});
    return set;
}

} // namespace

TEST_CASE("part tree navigation walks preorder and resolves parents") {
    Pattern p = make_widget();

    auto parts = p.parts_preorder();
    REQUIRE(parts.size() == 4);
    CHECK(parts[0]->name == "root");
    CHECK(parts[1]->name == "a");
    CHECK(parts[2]->name == "a1");
    CHECK(parts[3]->name == "b");

    CHECK(p.find_part("root") == parts[0]);
    CHECK(p.find_part("a1") == parts[2]);
    CHECK(p.find_part("nothere") == nullptr);

    CHECK(p.parent_of("a") == parts[0]);
    CHECK(p.parent_of("a1") == parts[1]);
    CHECK(p.parent_of("b") == parts[0]);
    CHECK(p.parent_of("root") == nullptr);
    CHECK(p.parent_of("nothere") == nullptr);
}

TEST_CASE("equations split into root relations and the part system") {
    Pattern p = make_widget();

    auto roots = p.root_relations();
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].display() == "Widget >= 0");

    EquationSystem sys = p.part_system();
    REQUIRE(sys.relations().size() == 2);
    CHECK(sys.relations()[0].display() == "a > 0");
    CHECK(sys.relations()[1].display() == "b = a");

    // relation variables first (appearance order), then unconstrained parts
    REQUIRE(sys.variables() == std::vector<std::string>{"a", "b", "a1"});

    auto sols = sys.enumerate_solutions(1);
    REQUIRE(sols.size() == 2); // a=b=1, a1 free in {0,1}
    for (const auto& s : sols) {
        CHECK(s.at("a") == 1);
        CHECK(s.at("b") == 1);
    }
    CHECK(sols[0].at("a1") == 0);
    CHECK(sols[1].at("a1") == 1);
}

TEST_CASE("a well-formed pattern validates cleanly") {
    Pattern p = make_widget();
    ValidationReport report = validate_pattern(p);
    CAPTURE(report.size());
    for (const auto& issue : report) CAPTURE(issue.subject + ": " + issue.message);
    CHECK(!has_errors(report));
    CHECK(report.empty());
}

TEST_CASE("validate_pattern flags each malformation") {
    Pattern p = make_widget();

    SUBCASE("empty pattern name") {
        p.name = "";
        CHECK(has_error(validate_pattern(p), "pattern name is empty"));
    }
    SUBCASE("missing metamodel stops validation with a single issue") {
        p.meta = nullptr;
        ValidationReport report = validate_pattern(p);
        REQUIRE(report.size() == 1);
        CHECK(report[0].message == "pattern lacks a metamodel");
    }
    SUBCASE("root part must carry the reserved name") {
        p.root.name = "r";
        CHECK(has_error(validate_pattern(p), "root part must be named 'root'"));
    }
    SUBCASE("root part must not have an embedding") {
        p.root.embedding = GraphMorphism::identity(p.root.graph);
        CHECK(has_error(validate_pattern(p), "root part has an embedding"));
    }
    SUBCASE("non-root part may not reuse reserved names") {
        p.root.children[1].name = "Widget";
        CHECK(has_error(validate_pattern(p), "collides with a reserved name"));
    }
    SUBCASE("parts need embeddings") {
        p.root.children[0].embedding.reset();
        CHECK(has_error(validate_pattern(p), "part lacks an embedding"));
    }
    SUBCASE("embedding must start at the parent graph") {
        p.root.children[0].embedding->source = clone_graph(*p.root.graph);
        CHECK(has_error(validate_pattern(p), "does not start at the parent graph"));
    }
    SUBCASE("embedding must end at the part graph") {
        p.root.children[0].embedding->target =
            clone_graph(*p.root.children[0].graph);
        CHECK(has_error(validate_pattern(p), "does not end at the part graph"));
    }
    SUBCASE("embedding must be injective") {
        VariablePart& a1 = p.root.children[0].children[0];
        a1.embedding->node_map["base"] = "derived";
        CHECK(has_error(validate_pattern(p), "embedding is not injective"));
    }
    SUBCASE("parts need graphs") {
        p.root.children[0].children[0].graph = nullptr;
        CHECK(has_error(validate_pattern(p), "part lacks a graph"));
    }
    SUBCASE("part graphs share the pattern metamodel") {
        auto collab = std::make_shared<TypedGraph>(collaboration_metamodel());
        collab->add_node(lifeline_node("l", svar("L")));
        VariablePart& b = p.root.children[1];
        b.graph = collab;
        b.embedding.reset();
        CHECK(has_error(validate_pattern(p), "different metamodel"));
    }
    SUBCASE("role labels must name existing nodes") {
        p.root.children[0].role_labels["ghost"] = "Leaf";
        CHECK(has_error(validate_pattern(p), "role label on unknown node 'ghost'"));
    }
    SUBCASE("role labels must come from the vocabulary") {
        p.root.children[0].role_labels["derived"] = "Hero";
        CHECK(has_error(validate_pattern(p), "'Hero' is not in the role vocabulary"));
    }
    SUBCASE("part names are unique") {
        p.root.children[0].children[0].name = "b";
        CHECK(has_error(validate_pattern(p), "duplicate part name"));
    }
    SUBCASE("count variables must be known") {
        p.equations.push_back(
            rel(CountTerm::variable("c"), RelOp::Gt, CountTerm::constant(0)));
        CHECK(has_error(validate_pattern(p), "unknown count variable 'c'"));
    }
    SUBCASE("relations may not mix the pattern name with part counts") {
        p.equations.push_back(
            rel(CountTerm::variable("Widget"), RelOp::Eq, CountTerm::variable("a")));
        CHECK(has_error(validate_pattern(p), "mixes the pattern name with part counts"));
    }
    SUBCASE("single-variable relations empty over the naturals are rejected") {
        p.equations.push_back(
            rel(CountTerm::variable("a"), RelOp::Lt, CountTerm::constant(0)));
        CHECK(has_error(validate_pattern(p), "no solution over the naturals"));
    }
    SUBCASE("ground false relations are rejected") {
        p.equations.push_back(
            rel(CountTerm::constant(1), RelOp::Eq, CountTerm::constant(2)));
        CHECK(has_error(validate_pattern(p), "no solution over the naturals"));
    }
    SUBCASE("constraint anchors must exist") {
        p.constraints[0].anchor = "zzz";
        CHECK(has_error(validate_pattern(p), "anchored at unknown part 'zzz'"));
    }
    SUBCASE("constraints may not anchor below the first level") {
        p.constraints[0].anchor = "a1";
        CHECK(has_error(validate_pattern(p),
                        "anchor only at the root or its direct parts"));
    }
    SUBCASE("constraints need premise graphs") {
        p.constraints[0].premise = nullptr;
        CHECK(has_error(validate_pattern(p), "constraint lacks a premise graph"));
    }
    SUBCASE("premise embeddings must link anchor and premise") {
        p.constraints[0].premise_embedding.source = clone_graph(*p.root.graph);
        CHECK(has_error(validate_pattern(p),
                        "premise embedding does not link anchor and premise"));
    }
    SUBCASE("consequence embeddings must link premise and consequence") {
        p.constraints[1].consequences[0].embedding.target =
            clone_graph(*p.root.graph);
        CHECK(has_error(validate_pattern(p),
                        "consequence embedding does not link premise and consequence"));
    }
    SUBCASE("sync links must name known parts") {
        p.sync_decls[0].links[0].primary_part = "zzz";
        CHECK(has_error(validate_pattern(p), "link names unknown part 'zzz'"));
    }
    SUBCASE("sync links must name known nodes") {
        p.sync_decls[0].links[0].primary_node = "nope";
        CHECK(has_error(validate_pattern(p), "link names unknown node 'nope'"));
    }
    SUBCASE("sync links may not reach below the first level") {
        p.sync_decls[0].links[0].primary_part = "a1";
        p.sync_decls[0].links[0].primary_node = "op";
        CHECK(has_error(validate_pattern(p),
                        "touch only the root or its direct parts"));
    }
}

TEST_CASE("synchronized sets validate across both patterns") {
    SUBCASE("a consistent set is clean") {
        SynchronizedPatternSet set = make_set();
        ValidationReport report = validate_sync_set(set);
        for (const auto& issue : report) CAPTURE(issue.subject + ": " + issue.message);
        CHECK(report.empty());
    }
    SUBCASE("part names may not collide between primary and companion") {
        SynchronizedPatternSet set = make_set();
        Pattern& seq = set.secondaries[0];
        seq.root.children[0].name = "a";
        seq.equations.clear(); // keep 'lines' out of the equations
        set.links.clear();
        CHECK(has_error(validate_sync_set(set),
                        "used by both primary and companion"));
    }
    SUBCASE("companion names are unique") {
        SynchronizedPatternSet set = make_set();
        set.secondaries.push_back(set.secondaries[0]);
        CHECK(has_error(validate_sync_set(set), "duplicate companion pattern"));
    }
    SUBCASE("links must name present companions") {
        SynchronizedPatternSet set = make_set();
        set.links[0].secondary = "Nope";
        CHECK(has_error(validate_sync_set(set), "absent companion pattern"));
    }
    SUBCASE("links must resolve on the companion side too") {
        SynchronizedPatternSet set = make_set();
        set.links[0].secondary_node = "ghost";
        CHECK(has_error(validate_sync_set(set), "unknown node 'ghost'"));
    }
}

TEST_CASE("the joint system adds one equality per part-to-part link") {
    SynchronizedPatternSet set = make_set();
    // a second link over the same part pair must not add a second equality
    set.links.push_back({"Seq", "a", "base", "lines", "subj"});

    EquationSystem joint = joint_equation_system(set);

    // appearance order over the merged relations, unconstrained parts last
    REQUIRE(joint.variables() == std::vector<std::string>{"a", "b", "lines", "a1"});

    std::size_t equalities = 0;
    for (const auto& r : joint.relations())
        if (r.display() == "a = lines") ++equalities;
    CHECK(equalities == 1);

    // primary and companion part relations all survive
    REQUIRE(joint.relations().size() == 4); // a > 0, b = a, lines > 0, a = lines

    auto sols = joint.minimal_solutions(2);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].at("a") == 1);
    CHECK(sols[0].at("b") == 1);
    CHECK(sols[0].at("lines") == 1);
    CHECK(sols[0].at("a1") == 0);
}

TEST_CASE("list_roles walks parts in preorder and nodes in id order") {
    Pattern p = make_widget();
    p.root.children[0].role_labels["base"] = "Root"; // second label on part a

    auto roles = list_roles(p);
    REQUIRE(roles.size() == 3);
    CHECK(roles[0].part == "root");
    CHECK(roles[0].node == "base");
    CHECK(roles[0].role == "Root");
    CHECK(roles[1].part == "a");
    CHECK(roles[1].node == "base");
    CHECK(roles[1].role == "Root");
    CHECK(roles[2].part == "a");
    CHECK(roles[2].node == "derived");
    CHECK(roles[2].role == "Leaf");
}
