#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amrt/sim.hpp"

#include "fixtures.hpp"

#include <sstream>

using namespace amrt;
using namespace amrt::testfix;

namespace {

// M0-equivalent running system: base rts 200/300/250, loads 10 each.
SimSystem shop_system() {
    SimSystem sys;
    sys.servers["S1"] = 100.0;
    sys.components["C1"] = SimComponent{"Shop", "RUNNING", 200, 200, 10, "S1"};
    sys.components["C2"] = SimComponent{"Auth", "RUNNING", 300, 300, 10, "S1"};
    sys.components["C3"] = SimComponent{"DB", "RUNNING", 250, 250, 10, "S1"};
    sys.connections.insert({"C1", "C2"});
    sys.connections.insert({"C2", "C3"});
    return sys;
}

std::string event_signature(const ChangeEvent& e) {
    std::ostringstream os;
    os << e.event_id << '|' << e.tick << '|' << event_kind_name(e.kind) << '|' << e.element_id
       << '|' << (e.attribute ? *e.attribute : "") << '|'
       << (e.old_value ? scalar_to_string(*e.old_value) : "") << '|'
       << (e.new_value ? scalar_to_string(*e.new_value) : "");
    return os.str();
}

std::string stream_signature(const std::vector<ChangeEvent>& evs) {
    std::string out;
    for (const auto& e : evs) out += event_signature(e) + "\n";
    return out;
}

double total_load(const SimSystem& sys) {
    double t = 0;
    for (const auto& [id, c] : sys.components) t += c.load;
    return t;
}

} // namespace

TEST_CASE("tick: rt follows baseRt * (1 + serverLoad/capacity)") {
    SimSystem sys = shop_system();
    WorkloadSchedule empty;
    sys.tick(empty);
    // serverLoad 30, capacity 100 -> factor 1.3 (hand-computed oracle)
    CHECK(sys.components["C1"].rt == doctest::Approx(260.0).epsilon(1e-12));
    CHECK(sys.components["C2"].rt == doctest::Approx(390.0).epsilon(1e-12));
    CHECK(sys.components["C3"].rt == doctest::Approx(325.0).epsilon(1e-12));
}

TEST_CASE("tick: scheduled fault emits the state event at its tick") {
    SimSystem sys = shop_system();
    WorkloadSchedule sched;
    sched.faults[3] = {"C2"};
    std::vector<ChangeEvent> at3;
    for (int t = 1; t <= 3; ++t) at3 = sys.tick(sched);
    bool found = false;
    for (const auto& e : at3)
        if (e.kind == EventKind::AttrChanged && e.element_id == "C2" && *e.attribute == "state" &&
            std::get<std::string>(*e.new_value) == "FAILED" && e.tick == 3)
            found = true;
    CHECK(found);
    CHECK(sys.components["C2"].state == "FAILED");
    CHECK(sys.components["C2"].rt == 0.0);
    CHECK(sys.components["C2"].load == 0.0); // Auth has no replica: demand dropped
}

TEST_CASE("tick: determinism under equal seed and schedule") {
    WorkloadSchedule sched;
    sched.loads[2] = {{"C1", 40.0}};
    sched.faults[4] = {"C3"};
    auto run = [&] {
        SimSystem sys = shop_system();
        std::string sig;
        for (int t = 1; t <= 6; ++t) sig += stream_signature(sys.tick(sched));
        return sig;
    };
    CHECK(run() == run());
}

TEST_CASE("execute_command: restart brings a failed component back") {
    SimSystem sys = shop_system();
    sys.inject_fault("C2");
    auto evs = sys.execute_command(RestartCmd{"C2"});
    REQUIRE(evs.size() == 1);
    CHECK(evs[0].kind == EventKind::AttrChanged);
    CHECK(evs[0].source == EventSource::Adaptation);
    CHECK(sys.components["C2"].state == "RUNNING");

    CHECK_THROWS_AS(sys.execute_command(RestartCmd{"nope"}), ModelError);
}

TEST_CASE("execute_command: add replica halves the load and conserves the total") {
    SimSystem sys = shop_system();
    double before = total_load(sys);
    auto evs = sys.execute_command(AddReplicaCmd{"C1", "C1#r1"});
    CHECK(sys.components.count("C1#r1") == 1);
    CHECK(sys.components["C1"].load == doctest::Approx(5.0));
    CHECK(sys.components["C1#r1"].load == doctest::Approx(5.0));
    CHECK(total_load(sys) == doctest::Approx(before).epsilon(1e-9));
    bool node_added = false, edge_added = false;
    for (const auto& e : evs) {
        node_added |= e.kind == EventKind::NodeAdded && e.element_id == "C1#r1";
        edge_added |= e.kind == EventKind::EdgeAdded;
    }
    CHECK(node_added);
    CHECK(edge_added);

    SUBCASE("remove replica restores and conserves") {
        sys.execute_command(RemoveReplicaCmd{"C1#r1"});
        CHECK(sys.components.count("C1#r1") == 0);
        CHECK(sys.components["C1"].load == doctest::Approx(10.0));
        CHECK(total_load(sys) == doctest::Approx(before).epsilon(1e-9));
    }
    SUBCASE("removing the last instance is invalid") {
        sys.execute_command(RemoveReplicaCmd{"C1#r1"});
        CHECK_THROWS_AS(sys.execute_command(RemoveReplicaCmd{"C1"}), ModelError);
    }
}

TEST_CASE("inject_fault: single state event; double injection refused") {
    SimSystem sys = shop_system();
    auto ev = sys.inject_fault("C2");
    CHECK(ev.element_id == "C2");
    CHECK(*ev.attribute == "state");
    CHECK_THROWS_AS(sys.inject_fault("C2"), ModelError);
    CHECK_THROWS_AS(sys.inject_fault("ghost"), ModelError);
    sys.execute_command(RestartCmd{"C2"});
    CHECK(sys.components["C2"].state == "RUNNING");
}

TEST_CASE("monitor_sync: fixpoint, single-diff, and conformance of projections") {
    auto mm = cs_metamodel();
    SimSystem sys = shop_system();
    ReflectionModel model;
    monitor_sync(sys, model, mm); // initial projection
    CHECK(validate_conformance(model, mm).empty());
    CHECK(monitor_sync(sys, model, mm).empty()); // already synced

    sys.inject_fault("C2");
    auto evs = monitor_sync(sys, model, mm);
    REQUIRE(evs.size() == 1);
    CHECK(evs[0].element_id == "C2");
    CHECK(*evs[0].attribute == "state");
    auto ann = model.read_annotations("C2");
    CHECK(!ann.events.empty());
    CHECK(monitor_sync(sys, model, mm).empty());
}

TEST_CASE("monitor_sync: projections of randomly driven systems conform (200 ticks)") {
    auto mm = cs_metamodel();
    SimSystem sys = shop_system();
    WorkloadSchedule sched;
    // mixed workload bumps + faults + repairs, all deterministic
    for (int t = 1; t <= 200; ++t) {
        if (t % 7 == 0) sched.loads[t] = {{"C1", static_cast<double>((t * 13) % 90)}};
        if (t % 31 == 0) sched.faults[t] = {"C3"};
    }
    ReflectionModel model;
    for (int t = 1; t <= 200; ++t) {
        sys.tick(sched);
        if (t % 31 == 5 && sys.components["C3"].state == "FAILED")
            sys.execute_command(RestartCmd{"C3"});
        CHECK_NOTHROW(monitor_sync(sys, model, mm));
    }
    CHECK(validate_conformance(model, mm).empty());
}

TEST_CASE("execute_sync: delta-to-command translation table") {
    auto mm = cs_metamodel();

    SUBCASE("state FAILED->RUNNING maps to Restart") {
        SimSystem sys = shop_system();
        sys.inject_fault("C2");
        std::vector<EditOp> delta = {
            SetAttrOp{"C2", "state", std::string("FAILED"), std::string("RUNNING")}};
        auto out = execute_sync(delta, sys);
        REQUIRE(out.commands.size() == 1);
        CHECK(command_to_string(out.commands[0]) == "Restart(C2)");
        CHECK(sys.components["C2"].state == "RUNNING");
    }

    SUBCASE("rt write is unmappable: the attribute is sensor-owned") {
        SimSystem sys = shop_system();
        std::vector<EditOp> delta = {SetAttrOp{"C2", "rt", 300.0, 100.0}};
        CHECK_THROWS_AS(execute_sync(delta, sys), ModelError);
    }

    SUBCASE("empty delta does nothing") {
        SimSystem sys = shop_system();
        auto out = execute_sync({}, sys);
        CHECK(out.commands.empty());
        CHECK(out.events.empty());
    }

    SUBCASE("add node + deployedOn maps to AddReplica") {
        SimSystem sys = shop_system();
        std::vector<EditOp> delta = {
            AddNodeOp{"C1#r1", make_component("Shop", "RUNNING", 200, 5)},
            AddEdgeOp{dep_edge_id("C1#r1", "S1"), Edge{"deployedOn", "C1#r1", "S1"}}};
        auto out = execute_sync(delta, sys);
        REQUIRE(out.commands.size() == 1);
        CHECK(command_to_string(out.commands[0]) == "AddReplica(C1,C1#r1)");
        CHECK(sys.components.count("C1#r1") == 1);
    }

    SUBCASE("deployedOn retarget maps to Migrate") {
        SimSystem sys = shop_system();
        sys.servers["S2"] = 80.0;
        std::vector<EditOp> delta = {
            RemoveEdgeOp{dep_edge_id("C3", "S1"), Edge{"deployedOn", "C3", "S1"}},
            AddEdgeOp{dep_edge_id("C3", "S2"), Edge{"deployedOn", "C3", "S2"}}};
        auto out = execute_sync(delta, sys);
        REQUIRE(out.commands.size() == 1);
        CHECK(command_to_string(out.commands[0]) == "Migrate(C3,S2)");
        CHECK(sys.components["C3"].server == "S2");
    }

    SUBCASE("connects edges map to SetLoadRouting") {
        SimSystem sys = shop_system();
        std::vector<EditOp> delta = {
            AddEdgeOp{conn_edge_id("C1", "C3"), Edge{"connects", "C1", "C3"}}};
        auto out = execute_sync(delta, sys);
        REQUIRE(out.commands.size() == 1);
        CHECK(sys.connections.count({"C1", "C3"}) == 1);
    }

    SUBCASE("round trip: executed delta re-syncs to the committed model digest") {
        SimSystem sys = shop_system();
        ReflectionModel model;
        monitor_sync(sys, model, cs_metamodel());
        sys.inject_fault("C2");
        monitor_sync(sys, model, cs_metamodel());

        TransactionManager txm(model);
        auto& txn = txm.begin();
        txn.apply(SetAttrOp{"C2", "state", {}, std::string("RUNNING")});
        auto delta = txn.commit();
        std::string committed = snapshot_digest(model);

        execute_sync(delta, sys);
        auto evs = monitor_sync(sys, model, cs_metamodel());
        CHECK(evs.empty());
        CHECK(snapshot_digest(model) == committed);
    }
}
