#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amrt/edit.hpp"
#include "amrt/model.hpp"

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace amrt;
using namespace amrt::testfix;

TEST_CASE("conformance: empty model conforms vacuously") {
    ReflectionModel m;
    CHECK(validate_conformance(m, cs_metamodel()).empty());
}

TEST_CASE("conformance: dangling edge is reported") {
    ReflectionModel m;
    m.add_node("C1", make_component("Shop", "RUNNING", 100, 5));
    m.add_edge_unchecked("e1", Edge{"deployedOn", "C1", "S1"}); // S1 absent
    auto v = validate_conformance(m, cs_metamodel());
    // dangling target plus the multiplicity count both point at the issue;
    // at least one violation must name the dangling edge
    bool dangling = false;
    for (const auto& viol : v) dangling |= (viol.element_id == "e1" && viol.rule == "dangling-edge");
    CHECK(dangling);
}

TEST_CASE("conformance: M0 conforms (hand-walked fixture)") {
    CHECK(validate_conformance(m0(), cs_metamodel()).empty());
}

TEST_CASE("conformance: violations carry element id and rule") {
    auto mm = cs_metamodel();
    ReflectionModel m = m0();
    m.set_attr("C2", "state", std::string("BROKEN")); // outside enum domain
    auto v = validate_conformance(m, mm);
    REQUIRE(v.size() == 1);
    CHECK(v[0].element_id == "C2");
    CHECK(v[0].rule == "enum-domain");

    ReflectionModel m2 = m0();
    m2.set_attr("S1", "capacity", 0.0); // capacity > 0 strict
    auto v2 = validate_conformance(m2, mm);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].rule == "range");

    ReflectionModel m3 = m0();
    m3.remove_edge(dep_edge_id("C3", "S1"));
    auto v3 = validate_conformance(m3, mm);
    REQUIRE(v3.size() == 1);
    CHECK(v3[0].element_id == "C3");
    CHECK(v3[0].rule == "multiplicity");
}

TEST_CASE("transactions: apply, inverse, cancellation, errors") {
    auto mm = cs_metamodel();
    ReflectionModel m = m0();
    TransactionManager txm(m);

    SUBCASE("set_attr records old value and yields the mirror inverse") {
        auto& txn = txm.begin();
        auto [op, inv] = txn.apply(SetAttrOp{"C2", "state", {}, std::string("FAILED")});
        CHECK(std::get<std::string>(*m.attr("C2", "state")) == "FAILED");
        const auto& i = std::get<SetAttrOp>(inv);
        CHECK(std::get<std::string>(i.old_value) == "FAILED");
        CHECK(std::get<std::string>(i.new_value) == "RUNNING");
        txn.commit();
    }

    SUBCASE("add then remove of the same id leaves the model unchanged") {
        std::string before = snapshot_digest(m);
        auto& txn = txm.begin();
        txn.apply(AddNodeOp{"CX", make_component("Cache", "RUNNING", 1, 1)});
        txn.apply(RemoveNodeOp{"CX", {}});
        CHECK(snapshot_digest(m) == before);
        txn.commit();
    }

    SUBCASE("set_attr on absent node is a stale op") {
        auto& txn = txm.begin();
        CHECK_THROWS_WITH_AS(txn.apply(SetAttrOp{"nope", "rt", {}, 1.0}),
                             doctest::Contains("does not exist"), ModelError);
        txn.commit();
    }

    SUBCASE("second begin before commit is rejected; ids are monotone") {
        auto& t1 = txm.begin();
        CHECK(t1.id() == 1);
        CHECK_THROWS_AS(txm.begin(), ModelError);
        t1.commit();
        auto& t2 = txm.begin();
        CHECK(t2.id() == 2);
        t2.rollback();
    }

    SUBCASE("commit returns the delta in application order; commit twice fails") {
        auto& txn = txm.begin();
        txn.apply(SetAttrOp{"C2", "state", {}, std::string("FAILED")});
        txn.apply(SetAttrOp{"C2", "state", {}, std::string("RUNNING")});
        txn.apply(SetAttrOp{"C1", "rt", {}, 123.0});
        auto delta = txn.commit();
        CHECK(delta.size() == 3);
        CHECK(edit_op_target(delta[0]) == "C2");
        CHECK(edit_op_target(delta[2]) == "C1");
        CHECK_THROWS_AS(txn.commit(), ModelError);
        CHECK_THROWS_AS(txn.rollback(), ModelError);
    }

    SUBCASE("rollback restores the pre-transaction digest") {
        std::string before = snapshot_digest(m);
        auto& txn = txm.begin();
        txn.apply(AddNodeOp{"CX", make_component("Cache", "RUNNING", 5, 5)});
        txn.apply(SetAttrOp{"CX", "rt", {}, 99.0});
        txn.apply(AddEdgeOp{"ex", Edge{"connects", "C1", "CX"}});
        CHECK(snapshot_digest(m) != before);
        txn.rollback();
        CHECK(snapshot_digest(m) == before);
    }

    CHECK(validate_conformance(m, mm).empty());
}

TEST_CASE("digest: canonical over insertion order, sensitive to content") {
    ReflectionModel a;
    a.add_node("B", make_server(10));
    a.add_node("A", make_component("Shop", "RUNNING", 1, 1));
    ReflectionModel b;
    b.add_node("A", make_component("Shop", "RUNNING", 1, 1));
    b.add_node("B", make_server(10));
    CHECK(snapshot_digest(a) == snapshot_digest(b));

    b.set_attr("A", "rt", 2.0);
    CHECK(snapshot_digest(a) != snapshot_digest(b));
}

TEST_CASE("digest: golden value for M0 is stable") {
    // pinned once from the canonical serializer
    CHECK(snapshot_digest(m0()) ==
          "663919aa254995da88cbf09dbe2aa7aeed174e51e8b50508ca19cad885f4614c");
}

TEST_CASE("annotations: round-trip, digest-neutral, stale flagging") {
    ReflectionModel m = m0();
    std::string before = snapshot_digest(m);

    ChangeEvent ev;
    ev.event_id = 1;
    ev.tick = 3;
    ev.kind = EventKind::AttrChanged;
    ev.element_id = "C2";
    ev.attribute = "state";
    ev.old_value = std::string("RUNNING");
    ev.new_value = std::string("FAILED");
    m.annotate_event(ev);

    EvaluationResult res;
    res.result_id = 1;
    res.condition_id = "CompFailed";
    res.tick = 3;
    res.violated = true;
    res.bindings = {{{"c", "C2"}}};
    res.anchor_element_id = "C2";
    m.annotate_result(res);

    auto view = m.read_annotations("C2");
    REQUIRE(view.events.size() == 1);
    REQUIRE(view.results.size() == 1);
    CHECK(view.events[0].event_id == 1);
    CHECK(view.results[0].condition_id == "CompFailed");
    CHECK_FALSE(view.stale);
    CHECK(snapshot_digest(m) == before);

    CHECK_THROWS_AS(m.annotate_event([] {
        ChangeEvent e;
        e.element_id = "ghost";
        return e;
    }()),
                    ModelError);

    // annotation on a removed node is flagged stale on read
    m.remove_edge(conn_edge_id("C1", "C2"));
    m.remove_edge(conn_edge_id("C2", "C3"));
    m.remove_edge(dep_edge_id("C2", "S1"));
    m.remove_node("C2");
    CHECK(m.read_annotations("C2").stale);
    CHECK(m.read_annotations("C2").events.size() == 1);
}

TEST_CASE("match: pattern over absent type yields nothing") {
    Pattern p;
    p.nodes.push_back({"x", "Component"});
    ReflectionModel m;
    m.add_node("S1", make_server(5));
    CHECK(match_pattern(m, cs_metamodel(), p).empty());
}

TEST_CASE("match: rt threshold on M0, before and after the attribute flip") {
    auto mm = cs_metamodel();
    ReflectionModel m = m0();
    Pattern p;
    p.nodes.push_back({"c", "Component"});
    p.predicates.push_back({"c", "rt", CmpOp::Gt, 500.0});

    CHECK(match_pattern(m, mm, p).empty());
    m.set_attr("C2", "rt", 700.0);
    auto bs = match_pattern(m, mm, p);
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].at("c") == "C2");
    CHECK(bs == oracle::brute_force_match(m, p));
}

TEST_CASE("match: negative clause kills extendable matches") {
    auto mm = cs_metamodel();
    ReflectionModel m = m0();
    Pattern p; // Components with no outgoing connects edge
    p.nodes.push_back({"c", "Component"});
    NegativeClause nac;
    nac.nodes.push_back({"d", "Component"});
    nac.edges.push_back({"c", "connects", "d"});
    p.negatives.push_back(nac);

    auto bs = match_pattern(m, mm, p);
    REQUIRE(bs.size() == 1);
    CHECK(bs[0].at("c") == "C3"); // C1 and C2 have successors
    CHECK(bs == oracle::brute_force_match(m, p));
}

TEST_CASE("match: unknown anchor raises, anchored equals filtered") {
    auto mm = cs_metamodel();
    ReflectionModel m = m0();
    Pattern p;
    p.nodes.push_back({"c", "Component"});
    p.nodes.push_back({"s", "Server"});
    p.edges.push_back({"c", "deployedOn", "s"});
    p.anchor_var = "c";

    CHECK_THROWS_AS(match_pattern(m, mm, p, "nope"), ModelError);

    auto anchored = match_pattern(m, mm, p, "C2");
    REQUIRE(anchored.size() == 1);
    CHECK(anchored[0].at("c") == "C2");
    CHECK(anchored == oracle::brute_force_match(m, p, "C2"));
}

TEST_CASE("property: unanchored match equals union of anchored runs") {
    testgen::Rng rng(2024);
    for (int i = 0; i < 60; ++i) {
        ReflectionModel m = testgen::random_cs_model(rng, 5);
        Pattern p = testgen::random_cs_pattern(rng, 2);
        auto full = match_pattern(m, cs_metamodel(), p);
        std::vector<Binding> via_anchors;
        for (const auto& [id, n] : m.nodes()) {
            auto part = match_pattern(m, cs_metamodel(), p, id);
            via_anchors.insert(via_anchors.end(), part.begin(), part.end());
        }
        std::sort(via_anchors.begin(), via_anchors.end());
        via_anchors.erase(std::unique(via_anchors.begin(), via_anchors.end()), via_anchors.end());
        CHECK(full == via_anchors);
    }
}

TEST_CASE("property: matcher equals brute-force enumeration (random models <= 12 nodes)") {
    testgen::Rng rng(7);
    for (int i = 0; i < 120; ++i) {
        ReflectionModel m = testgen::random_cs_model(rng, 9);
        Pattern p = testgen::random_cs_pattern(rng, 3);
        CHECK(match_pattern(m, cs_metamodel(), p) == oracle::brute_force_match(m, p));
    }
}

TEST_CASE("property: apply(inverse(o), apply(o, m)) is digest-identity, 1000 cases") {
    testgen::Rng rng(99);
    int fresh = 1000;
    int done = 0;
    while (done < 1000) {
        ReflectionModel m = testgen::random_cs_model(rng, 8);
        auto op = testgen::random_edit_op(rng, m, fresh);
        if (!op) continue;
        TransactionManager txm(m);
        std::string before = snapshot_digest(m);
        auto& txn = txm.begin();
        auto [applied, inv] = txn.apply(*op);
        apply_edit_op(m, inv);
        CHECK(snapshot_digest(m) == before);
        ++done;
        txn.commit(); // model is discarded; commit just seals the txn
    }
}

TEST_CASE("property: rollback after random op sequences restores the digest") {
    testgen::Rng rng(4242);
    int fresh = 1;
    for (int i = 0; i < 150; ++i) {
        ReflectionModel m = testgen::random_cs_model(rng, 8);
        std::string before = snapshot_digest(m);
        ReflectionModel copy = m; // deep-copy oracle
        TransactionManager txm(m);
        auto& txn = txm.begin();
        std::size_t len = rng.below(50);
        for (std::size_t k = 0; k < len; ++k) {
            auto op = testgen::random_edit_op(rng, m, fresh);
            if (!op) continue;
            try {
                txn.apply(*op);
            } catch (const ModelError&) {
                // op raced against its own earlier edits (e.g. duplicate edge); skip
            }
        }
        txn.rollback();
        CHECK(snapshot_digest(m) == before);
        CHECK(snapshot_digest(m) == snapshot_digest(copy));
        CHECK(m == copy);
    }
}

TEST_CASE("rollback_to: savepoints unwind partial suffixes") {
    ReflectionModel m = m0();
    TransactionManager txm(m);
    auto& txn = txm.begin();
    txn.apply(SetAttrOp{"C1", "rt", {}, 111.0});
    auto mark = txn.mark();
    std::string at_mark = snapshot_digest(m);
    txn.apply(SetAttrOp{"C2", "rt", {}, 222.0});
    txn.apply(AddNodeOp{"CX", make_component("Cache", "RUNNING", 1, 1)});
    txn.rollback_to(mark);
    CHECK(snapshot_digest(m) == at_mark);
    CHECK(txn.ops().size() == 1);
    txn.rollback();
    CHECK(snapshot_digest(m) == snapshot_digest(m0()));
}
