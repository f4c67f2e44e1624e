#pragma once

#include "amrt/metamodel.hpp"
#include "amrt/model.hpp"

#include <string>

namespace amrt::testfix {

// Shop metamodel: Server{capacity:float>0}, Component{state in {RUNNING,FAILED},
// rt:float>=0, load:float>=0, ctype:string}; deployedOn(Component->Server,
// exactly-one), connects(Component->Component, any).
inline Metamodel cs_metamodel() {
    Metamodel mm;
    NodeTypeDecl server;
    server.attributes["capacity"] = AttrDecl{ScalarKind::Float, {}, AttrRange{0.0, {}, true, false}, false};
    NodeTypeDecl component;
    component.attributes["state"] = AttrDecl{ScalarKind::String, {"RUNNING", "FAILED"}, {}, false};
    component.attributes["rt"] = AttrDecl{ScalarKind::Float, {}, AttrRange{0.0, {}, false, false}, true};
    component.attributes["load"] = AttrDecl{ScalarKind::Float, {}, AttrRange{0.0, {}, false, false}, true};
    component.attributes["ctype"] = AttrDecl{ScalarKind::String, {}, {}, false};
    mm.node_types["Server"] = server;
    mm.node_types["Component"] = component;
    mm.edge_types["deployedOn"] = EdgeTypeDecl{"Component", "Server", Multiplicity::ExactlyOne};
    mm.edge_types["connects"] = EdgeTypeDecl{"Component", "Component", Multiplicity::Any};
    return mm;
}

inline Node make_component(const std::string& ctype, const std::string& state, double rt,
                           double load) {
    Node n;
    n.type = "Component";
    n.attrs["ctype"] = ctype;
    n.attrs["state"] = state;
    n.attrs["rt"] = rt;
    n.attrs["load"] = load;
    return n;
}

inline Node make_server(double capacity) {
    Node n;
    n.type = "Server";
    n.attrs["capacity"] = capacity;
    return n;
}

inline std::string dep_edge_id(const std::string& c, const std::string& s) {
    return "deployedOn:" + c + "->" + s;
}
inline std::string conn_edge_id(const std::string& a, const std::string& b) {
    return "connects:" + a + "->" + b;
}

// M0: S1{100}; C1 Shop rt=200, C2 Auth rt=300, C3 DB rt=250, load 10 each,
// all RUNNING on S1; C1->C2, C2->C3.
inline ReflectionModel m0() {
    ReflectionModel m;
    m.add_node("S1", make_server(100));
    m.add_node("C1", make_component("Shop", "RUNNING", 200, 10));
    m.add_node("C2", make_component("Auth", "RUNNING", 300, 10));
    m.add_node("C3", make_component("DB", "RUNNING", 250, 10));
    for (const char* c : {"C1", "C2", "C3"})
        m.add_edge(dep_edge_id(c, "S1"), Edge{"deployedOn", c, "S1"});
    m.add_edge(conn_edge_id("C1", "C2"), Edge{"connects", "C1", "C2"});
    m.add_edge(conn_edge_id("C2", "C3"), Edge{"connects", "C2", "C3"});
    return m;
}

} // namespace amrt::testfix
