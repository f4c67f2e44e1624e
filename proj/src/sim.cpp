#include "amrt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace amrt {

namespace {

std::string dep_edge_id(const std::string& c, const std::string& s) {
    return "deployedOn:" + c + "->" + s;
}
std::string conn_edge_id(const std::string& a, const std::string& b) {
    return "connects:" + a + "->" + b;
}

// `<sourceId>#r<k>` replica ids; returns the source id or empty.
std::string replica_source(const std::string& id) {
    auto pos = id.rfind("#r");
    if (pos == std::string::npos || pos == 0) return "";
    for (std::size_t i = pos + 2; i < id.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(id[i]))) return "";
    if (pos + 2 >= id.size()) return "";
    return id.substr(0, pos);
}

} // namespace

std::string command_to_string(const Command& cmd) {
    std::ostringstream os;
    std::visit(
        [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, RestartCmd>) {
                os << "Restart(" << c.component << ")";
            } else if constexpr (std::is_same_v<T, AddReplicaCmd>) {
                os << "AddReplica(" << c.component << "," << c.new_id << ")";
            } else if constexpr (std::is_same_v<T, RemoveReplicaCmd>) {
                os << "RemoveReplica(" << c.component << ")";
            } else if constexpr (std::is_same_v<T, MigrateCmd>) {
                os << "Migrate(" << c.component << "," << c.server << ")";
            } else {
                os << "SetLoadRouting(" << c.from << "," << c.to << "," << (c.add ? "add" : "remove")
                   << ")";
            }
        },
        cmd);
    return os.str();
}

ChangeEvent SimSystem::attr_event(const std::string& element, const std::string& attr, Scalar oldv,
                                  Scalar newv, EventSource src) {
    ChangeEvent ev;
    ev.event_id = next_event_id();
    ev.tick = clock;
    ev.kind = EventKind::AttrChanged;
    ev.element_id = element;
    ev.attribute = attr;
    ev.old_value = std::move(oldv);
    ev.new_value = std::move(newv);
    ev.source = src;
    return ev;
}

double SimSystem::server_load(const std::string& server_id) const {
    double total = 0;
    for (const auto& [id, c] : components)
        if (c.server == server_id && c.state == "RUNNING") total += c.load;
    return total;
}

std::vector<ChangeEvent> SimSystem::recompute_rts() {
    std::vector<ChangeEvent> events;
    std::map<std::string, double> loads;
    for (const auto& [sid, cap] : servers) loads[sid] = server_load(sid);
    for (auto& [id, c] : components) {
        double rt = 0;
        if (c.state == "RUNNING") {
            double cap = servers.at(c.server);
            rt = c.base_rt * (1.0 + loads[c.server] / cap);
        }
        if (rt != c.rt) {
            events.push_back(attr_event(id, "rt", c.rt, rt, EventSource::System));
            c.rt = rt;
        }
    }
    return events;
}

std::vector<ChangeEvent> SimSystem::apply_fault(const std::string& component_id) {
    auto it = components.find(component_id);
    if (it == components.end())
        throw ModelError(ErrorCode::UnknownTarget, "inject_fault: unknown component '" + component_id + "'");
    SimComponent& victim = it->second;
    if (victim.state == "FAILED")
        throw ModelError(ErrorCode::AlreadyFailed, "inject_fault: '" + component_id + "' already failed");

    std::vector<ChangeEvent> events;
    events.push_back(attr_event(component_id, "state", std::string("RUNNING"),
                                std::string("FAILED"), EventSource::System));
    victim.state = "FAILED";
    return events;
}

ChangeEvent SimSystem::inject_fault(const std::string& component_id) {
    return apply_fault(component_id).front();
}

// FAILED components serve no load: their demand moves equally onto RUNNING
// same-ctype replicas, or is dropped when none remain.
std::vector<ChangeEvent> SimSystem::redistribute_failed_load() {
    std::vector<ChangeEvent> events;
    for (auto& [id, c] : components) {
        if (c.state != "FAILED" || c.load == 0) continue;
        std::vector<std::string> peers;
        for (const auto& [pid, p] : components)
            if (pid != id && p.ctype == c.ctype && p.state == "RUNNING") peers.push_back(pid);
        double moved = c.load;
        events.push_back(attr_event(id, "load", c.load, 0.0, EventSource::System));
        c.load = 0;
        if (peers.empty()) continue;
        double share = moved / static_cast<double>(peers.size());
        for (const auto& pid : peers) {
            SimComponent& p = components.at(pid);
            events.push_back(attr_event(pid, "load", p.load, p.load + share, EventSource::System));
            p.load += share;
        }
    }
    return events;
}

std::vector<ChangeEvent> SimSystem::tick(const WorkloadSchedule& schedule) {
    clock += 1;
    std::vector<ChangeEvent> events;

    if (auto it = schedule.loads.find(clock); it != schedule.loads.end()) {
        for (const auto& [cid, demand] : it->second) {
            auto cit = components.find(cid);
            if (cit == components.end()) continue; // component gone, demand dropped
            // demand is split across the RUNNING replica group of the ctype
            std::vector<std::string> group;
            for (const auto& [id, c] : components)
                if (c.ctype == cit->second.ctype && c.state == "RUNNING") group.push_back(id);
            if (group.empty()) continue;
            double share = demand / static_cast<double>(group.size());
            for (const auto& id : group) {
                SimComponent& c = components.at(id);
                if (c.load != share) {
                    events.push_back(attr_event(id, "load", c.load, share, EventSource::System));
                    c.load = share;
                }
            }
        }
    }

    if (auto it = schedule.faults.find(clock); it != schedule.faults.end()) {
        for (const auto& cid : it->second) {
            auto cit = components.find(cid);
            if (cit == components.end() || cit->second.state == "FAILED") continue;
            auto evs = apply_fault(cid);
            events.insert(events.end(), evs.begin(), evs.end());
        }
    }

    auto moved = redistribute_failed_load();
    events.insert(events.end(), moved.begin(), moved.end());
    auto rts = recompute_rts();
    events.insert(events.end(), rts.begin(), rts.end());
    return events;
}

std::vector<ChangeEvent> SimSystem::execute_command(const Command& cmd) {
    std::vector<ChangeEvent> events;
    auto require_component = [&](const std::string& id) -> SimComponent& {
        auto it = components.find(id);
        if (it == components.end())
            throw ModelError(ErrorCode::UnknownTarget, "command targets unknown component '" + id + "'");
        return it->second;
    };
    auto emit = [&](ChangeEvent ev) {
        ev.source = EventSource::Adaptation;
        events.push_back(std::move(ev));
    };

    if (const auto* r = std::get_if<RestartCmd>(&cmd)) {
        SimComponent& c = require_component(r->component);
        if (c.state != "RUNNING") {
            emit(attr_event(r->component, "state", c.state, std::string("RUNNING"),
                            EventSource::Adaptation));
            c.state = "RUNNING";
        }
    } else if (const auto* a = std::get_if<AddReplicaCmd>(&cmd)) {
        SimComponent& src = require_component(a->component);
        if (components.count(a->new_id))
            throw ModelError(ErrorCode::Invalid, "replica id '" + a->new_id + "' already exists");
        std::vector<std::string> group;
        for (const auto& [id, c] : components)
            if (c.ctype == src.ctype && c.state == "RUNNING") group.push_back(id);
        double total = 0;
        for (const auto& id : group) total += components.at(id).load;

        SimComponent replica;
        replica.ctype = src.ctype;
        replica.base_rt = src.base_rt;
        replica.rt = src.rt;
        replica.state = "RUNNING";
        replica.server = src.server;
        replica.load = 0;
        components[a->new_id] = replica;
        group.push_back(a->new_id);
        std::sort(group.begin(), group.end());

        ChangeEvent added;
        added.event_id = next_event_id();
        added.tick = clock;
        added.kind = EventKind::NodeAdded;
        added.element_id = a->new_id;
        emit(added);
        ChangeEvent edge;
        edge.event_id = next_event_id();
        edge.tick = clock;
        edge.kind = EventKind::EdgeAdded;
        edge.element_id = dep_edge_id(a->new_id, replica.server);
        emit(edge);

        double share = total / static_cast<double>(group.size());
        for (const auto& id : group) {
            SimComponent& c = components.at(id);
            if (c.load != share) {
                emit(attr_event(id, "load", c.load, share, EventSource::Adaptation));
                c.load = share;
            }
        }
    } else if (const auto* d = std::get_if<RemoveReplicaCmd>(&cmd)) {
        SimComponent victim = require_component(d->component);
        std::vector<std::string> peers;
        for (const auto& [id, c] : components)
            if (id != d->component && c.ctype == victim.ctype && c.state == "RUNNING")
                peers.push_back(id);
        if (peers.empty())
            throw ModelError(ErrorCode::Invalid,
                             "RemoveReplica would remove the last '" + victim.ctype + "' instance");

        for (auto it = connections.begin(); it != connections.end();) {
            if (it->first == d->component || it->second == d->component) {
                ChangeEvent er;
                er.event_id = next_event_id();
                er.tick = clock;
                er.kind = EventKind::EdgeRemoved;
                er.element_id = conn_edge_id(it->first, it->second);
                emit(er);
                it = connections.erase(it);
            } else {
                ++it;
            }
        }
        ChangeEvent dep;
        dep.event_id = next_event_id();
        dep.tick = clock;
        dep.kind = EventKind::EdgeRemoved;
        dep.element_id = dep_edge_id(d->component, victim.server);
        emit(dep);
        components.erase(d->component);
        ChangeEvent rm;
        rm.event_id = next_event_id();
        rm.tick = clock;
        rm.kind = EventKind::NodeRemoved;
        rm.element_id = d->component;
        emit(rm);

        double share = victim.load / static_cast<double>(peers.size());
        if (share != 0) {
            for (const auto& id : peers) {
                SimComponent& p = components.at(id);
                emit(attr_event(id, "load", p.load, p.load + share, EventSource::Adaptation));
                p.load += share;
            }
        }
    } else if (const auto* mg = std::get_if<MigrateCmd>(&cmd)) {
        SimComponent& c = require_component(mg->component);
        if (!servers.count(mg->server))
            throw ModelError(ErrorCode::UnknownTarget, "command targets unknown server '" + mg->server + "'");
        if (c.server != mg->server) {
            ChangeEvent er;
            er.event_id = next_event_id();
            er.tick = clock;
            er.kind = EventKind::EdgeRemoved;
            er.element_id = dep_edge_id(mg->component, c.server);
            emit(er);
            c.server = mg->server;
            ChangeEvent ea;
            ea.event_id = next_event_id();
            ea.tick = clock;
            ea.kind = EventKind::EdgeAdded;
            ea.element_id = dep_edge_id(mg->component, c.server);
            emit(ea);
        }
    } else if (const auto* lr = std::get_if<SetLoadRoutingCmd>(&cmd)) {
        require_component(lr->from);
        require_component(lr->to);
        auto key = std::make_pair(lr->from, lr->to);
        if (lr->add) {
            if (connections.count(key))
                throw ModelError(ErrorCode::Invalid, "routing already present");
            connections.insert(key);
            ChangeEvent ea;
            ea.event_id = next_event_id();
            ea.tick = clock;
            ea.kind = EventKind::EdgeAdded;
            ea.element_id = conn_edge_id(lr->from, lr->to);
            emit(ea);
        } else {
            if (!connections.count(key))
                throw ModelError(ErrorCode::Invalid, "routing not present");
            connections.erase(key);
            ChangeEvent er;
            er.event_id = next_event_id();
            er.tick = clock;
            er.kind = EventKind::EdgeRemoved;
            er.element_id = conn_edge_id(lr->from, lr->to);
            emit(er);
        }
    }
    return events;
}

ReflectionModel project_model(const SimSystem& sys) {
    ReflectionModel m;
    for (const auto& [id, cap] : sys.servers) {
        Node n;
        n.type = "Server";
        n.attrs["capacity"] = cap;
        m.add_node(id, std::move(n));
    }
    for (const auto& [id, c] : sys.components) {
        Node n;
        n.type = "Component";
        n.attrs["ctype"] = c.ctype;
        n.attrs["state"] = c.state;
        n.attrs["rt"] = c.rt;
        n.attrs["load"] = c.load;
        m.add_node(id, std::move(n));
    }
    for (const auto& [id, c] : sys.components)
        m.add_edge(dep_edge_id(id, c.server), Edge{"deployedOn", id, c.server});
    for (const auto& [from, to] : sys.connections)
        m.add_edge(conn_edge_id(from, to), Edge{"connects", from, to});
    return m;
}

std::vector<ChangeEvent> monitor_sync(SimSystem& sys, ReflectionModel& model, const Metamodel& mm) {
    if (model.mode() != ModelMode::Descriptive)
        throw ModelError(ErrorCode::Invalid, "monitor_sync requires a descriptive model");

    ReflectionModel target = project_model(sys);
    auto conf = validate_conformance(target, mm);
    if (!conf.empty())
        throw ModelError(ErrorCode::ConformanceAbort,
                         "projected model does not conform: " + conf.front().message);

    std::vector<ChangeEvent> events;
    auto push = [&](EventKind kind, const std::string& element) {
        ChangeEvent ev;
        ev.event_id = sys.next_event_id();
        ev.tick = sys.clock;
        ev.kind = kind;
        ev.element_id = element;
        ev.source = EventSource::System;
        events.push_back(ev);
        return events.size() - 1;
    };

    // removals first (edges, then nodes), then additions (nodes, then
    // edges), then attribute diffs; each pass in id order
    std::vector<std::string> doomed_edges, doomed_nodes;
    for (const auto& [id, e] : model.edges())
        if (!target.has_edge(id) || !(*target.edge(id) == e)) doomed_edges.push_back(id);
    for (const auto& [id, n] : model.nodes())
        if (!target.has_node(id)) doomed_nodes.push_back(id);
    for (const auto& id : doomed_edges) {
        model.remove_edge(id);
        push(EventKind::EdgeRemoved, id);
    }
    for (const auto& id : doomed_nodes) {
        model.remove_node(id);
        push(EventKind::NodeRemoved, id);
    }
    for (const auto& [id, n] : target.nodes()) {
        if (!model.has_node(id)) {
            model.add_node(id, n);
            model.annotate_event(events[push(EventKind::NodeAdded, id)]);
        }
    }
    for (const auto& [id, e] : target.edges()) {
        if (!model.has_edge(id)) {
            model.add_edge(id, e);
            model.annotate_event(events[push(EventKind::EdgeAdded, id)]);
        }
    }
    for (const auto& [id, n] : target.nodes()) {
        const Node* cur = model.node(id);
        for (const auto& [attr, value] : n.attrs) {
            auto it = cur->attrs.find(attr);
            if (it != cur->attrs.end() && scalar_eq(it->second, value) &&
                it->second.index() == value.index())
                continue;
            ChangeEvent ev;
            ev.event_id = sys.next_event_id();
            ev.tick = sys.clock;
            ev.kind = EventKind::AttrChanged;
            ev.element_id = id;
            ev.attribute = attr;
            if (it != cur->attrs.end()) ev.old_value = it->second;
            ev.new_value = value;
            ev.source = EventSource::System;
            model.set_attr(id, attr, value);
            model.annotate_event(ev);
            events.push_back(std::move(ev));
        }
    }
    return events;
}

ExecOutcome execute_sync(const std::vector<EditOp>& delta, SimSystem& sys) {
    ExecOutcome out;
    std::vector<bool> consumed(delta.size(), false);
    auto unmappable = [&](std::size_t i, const std::string& why) {
        throw ModelError(ErrorCode::UnmappableDelta,
                         "delta op " + std::to_string(i) + " (" + edit_op_name(delta[i]) + " " +
                             edit_op_target(delta[i]) + "): " + why);
    };

    std::vector<Command> commands;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (consumed[i]) continue;
        const EditOp& op = delta[i];
        if (const auto* sa = std::get_if<SetAttrOp>(&op)) {
            if (sa->attr != "state") unmappable(i, "attribute '" + sa->attr + "' is not adaptable");
            const auto* newv = std::get_if<std::string>(&sa->new_value);
            if (!newv || *newv != "RUNNING") unmappable(i, "only FAILED->RUNNING maps to Restart");
            commands.push_back(RestartCmd{sa->id});
        } else if (const auto* an = std::get_if<AddNodeOp>(&op)) {
            if (an->node.type != "Component") unmappable(i, "only Component nodes can be added");
            std::string source = replica_source(an->id);
            if (source.empty()) unmappable(i, "added node id lacks the replica suffix");
            // the paired deployedOn edge determines the target server
            std::string server;
            for (std::size_t j = i + 1; j < delta.size(); ++j) {
                const auto* ae = std::get_if<AddEdgeOp>(&delta[j]);
                if (ae && !consumed[j] && ae->edge.type == "deployedOn" && ae->edge.src == an->id) {
                    server = ae->edge.tgt;
                    consumed[j] = true;
                    break;
                }
            }
            if (server.empty()) unmappable(i, "added component has no deployedOn edge in the delta");
            commands.push_back(AddReplicaCmd{source, an->id});
            auto src_it = sys.components.find(source);
            if (src_it == sys.components.end())
                throw ModelError(ErrorCode::UnknownTarget, "replica source '" + source + "' not in system");
            if (src_it->second.server != server) commands.push_back(MigrateCmd{an->id, server});
        } else if (const auto* re = std::get_if<RemoveEdgeOp>(&op)) {
            if (re->captured.type == "connects") {
                commands.push_back(SetLoadRoutingCmd{re->captured.src, re->captured.tgt, false});
            } else if (re->captured.type == "deployedOn") {
                const std::string& comp = re->captured.src;
                bool matched = false;
                for (std::size_t j = i + 1; j < delta.size() && !matched; ++j) {
                    if (consumed[j]) continue;
                    if (const auto* rn = std::get_if<RemoveNodeOp>(&delta[j]);
                        rn && rn->id == comp) {
                        commands.push_back(RemoveReplicaCmd{comp});
                        consumed[j] = true;
                        matched = true;
                    } else if (const auto* ae = std::get_if<AddEdgeOp>(&delta[j]);
                               ae && ae->edge.type == "deployedOn" && ae->edge.src == comp) {
                        commands.push_back(MigrateCmd{comp, ae->edge.tgt});
                        consumed[j] = true;
                        matched = true;
                    }
                }
                if (!matched) unmappable(i, "deployedOn removal without replacement or node removal");
            } else {
                unmappable(i, "edge type has no command equivalent");
            }
        } else if (const auto* ae = std::get_if<AddEdgeOp>(&op)) {
            if (ae->edge.type != "connects") unmappable(i, "unpaired structural edge");
            commands.push_back(SetLoadRoutingCmd{ae->edge.src, ae->edge.tgt, true});
        } else if (std::get_if<RemoveNodeOp>(&op)) {
            unmappable(i, "node removal without its deployedOn removal");
        }
    }

    for (const auto& cmd : commands) {
        auto evs = sys.execute_command(cmd);
        out.events.insert(out.events.end(), evs.begin(), evs.end());
    }
    out.commands = std::move(commands);
    return out;
}

} // namespace amrt
