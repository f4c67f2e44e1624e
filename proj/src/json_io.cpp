#include "amrt/json_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace amrt {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& origin) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) throw ConfigError(origin + ": not valid JSON");
    return doc;
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Scalar scalar_from_json(const json& v, const std::string& origin) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError(origin + ": unsupported attribute value " + v.dump());
}

Scalar coerce_to_decl(const Scalar& v, const AttrDecl* decl) {
    if (decl && decl->kind == ScalarKind::Float && kind_of(v) == ScalarKind::Int)
        return as_number(v);
    return v;
}

} // namespace

Metamodel load_metamodel_json(const std::string& text, const std::string& origin) {
    json doc = parse_json(text, origin);
    Metamodel mm;
    if (!doc.contains("nodeTypes") || !doc["nodeTypes"].is_object())
        throw ConfigError(origin + ": missing 'nodeTypes' object");
    for (const auto& [tname, tdef] : doc["nodeTypes"].items()) {
        NodeTypeDecl nt;
        const json attrs = tdef.value("attributes", json::object());
        for (const auto& [aname, adef] : attrs.items()) {
            AttrDecl decl;
            auto kind = kind_from_name(adef.value("kind", "string"));
            if (!kind)
                throw ConfigError(origin + ": unknown kind '" + adef.value("kind", "") + "' for " +
                                  tname + "." + aname);
            decl.kind = *kind;
            if (adef.contains("enum"))
                for (const auto& e : adef["enum"]) decl.enum_domain.push_back(e.get<std::string>());
            if (adef.contains("min") || adef.contains("max")) {
                AttrRange range;
                if (adef.contains("min")) range.min = adef["min"].get<double>();
                if (adef.contains("max")) range.max = adef["max"].get<double>();
                range.min_exclusive = adef.value("minExclusive", false);
                range.max_exclusive = adef.value("maxExclusive", false);
                decl.range = range;
            }
            decl.sensor = adef.value("sensor", false);
            nt.attributes[aname] = std::move(decl);
        }
        mm.node_types[tname] = std::move(nt);
    }
    const json edge_types = doc.value("edgeTypes", json::object());
    for (const auto& [ename, edef] : edge_types.items()) {
        EdgeTypeDecl et;
        et.source = edef.value("source", "");
        et.target = edef.value("target", "");
        std::string mult = edef.value("sourceMultiplicity", "any");
        if (mult == "exactly-one") et.source_multiplicity = Multiplicity::ExactlyOne;
        else if (mult == "any") et.source_multiplicity = Multiplicity::Any;
        else throw ConfigError(origin + ": unknown multiplicity '" + mult + "'");
        mm.edge_types[ename] = std::move(et);
    }
    auto errs = mm.self_check();
    if (!errs.empty()) throw ConfigError(origin + ": " + errs.front());
    return mm;
}

Metamodel load_metamodel_file(const std::string& path) {
    return load_metamodel_json(read_file_or_throw(path), path);
}

ReflectionModel load_model_json(const std::string& text, const Metamodel& mm,
                                const std::string& origin) {
    json doc = parse_json(text, origin);
    ReflectionModel m;
    if (doc.value("mode", "descriptive") == "prescriptive") m.set_mode(ModelMode::Prescriptive);
    const json nodes = doc.value("nodes", json::object());
    for (const auto& [id, ndef] : nodes.items()) {
        Node n;
        n.type = ndef.value("type", "");
        const json attrs = ndef.value("attrs", json::object());
        for (const auto& [aname, avalue] : attrs.items())
            n.attrs[aname] = coerce_to_decl(scalar_from_json(avalue, origin),
                                            mm.attr_decl(n.type, aname));
        m.add_node(id, std::move(n));
    }
    const json edges = doc.value("edges", json::object());
    for (const auto& [id, edef] : edges.items()) {
        Edge e{edef.value("type", ""), edef.value("src", ""), edef.value("tgt", "")};
        m.add_edge_unchecked(id, std::move(e));
    }
    return m;
}

std::string dump_model_json(const ReflectionModel& model) {
    nlohmann::ordered_json doc;
    doc["mode"] = model.mode() == ModelMode::Descriptive ? "descriptive" : "prescriptive";
    auto& nodes = doc["nodes"] = nlohmann::ordered_json::object();
    for (const auto& [id, n] : model.nodes()) {
        nlohmann::ordered_json nd;
        nd["type"] = n.type;
        auto& attrs = nd["attrs"] = nlohmann::ordered_json::object();
        for (const auto& [aname, v] : n.attrs) {
            switch (v.index()) {
                case 0: attrs[aname] = std::get<std::int64_t>(v); break;
                case 1: attrs[aname] = std::get<double>(v); break;
                case 2: attrs[aname] = std::get<std::string>(v); break;
                case 3: attrs[aname] = std::get<bool>(v); break;
            }
        }
        nodes[id] = std::move(nd);
    }
    auto& edges = doc["edges"] = nlohmann::ordered_json::object();
    for (const auto& [id, e] : model.edges())
        edges[id] = {{"type", e.type}, {"src", e.src}, {"tgt", e.tgt}};
    return doc.dump(2);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    namespace fs = std::filesystem;
    json doc = parse_json(read_file_or_throw(path), path);
    fs::path base = fs::path(path).parent_path();
    auto resolve_path = [&](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };

    ScenarioConfig cfg;
    if (doc.value("schemaVersion", 0) != 1)
        throw ConfigError(path + ": unsupported schemaVersion (expected 1)");

    if (!doc.contains("metamodel")) throw ConfigError(path + ": missing 'metamodel'");
    if (doc["metamodel"].is_string())
        cfg.metamodel = load_metamodel_file(resolve_path(doc["metamodel"].get<std::string>()));
    else
        cfg.metamodel = load_metamodel_json(doc["metamodel"].dump(), path + "#metamodel");

    const json& sys = doc.value("system", json::object());
    const json servers = sys.value("servers", json::object());
    for (const auto& [id, cap] : servers.items())
        cfg.system.servers[id] = cap.get<double>();
    const json components = sys.value("components", json::object());
    for (const auto& [id, cdef] : components.items()) {
        SimComponent c;
        c.ctype = cdef.value("ctype", "");
        c.state = cdef.value("state", "RUNNING");
        c.base_rt = cdef.value("baseRt", 0.0);
        c.rt = cdef.value("rt", c.base_rt);
        c.load = cdef.value("load", 0.0);
        c.server = cdef.value("server", "");
        if (!cfg.system.servers.count(c.server))
            throw ConfigError(path + ": component '" + id + "' hosted on unknown server '" +
                              c.server + "'");
        cfg.system.components[id] = std::move(c);
    }
    for (const auto& conn : sys.value("connections", json::array())) {
        if (!conn.is_array() || conn.size() != 2)
            throw ConfigError(path + ": connections are [from, to] pairs");
        std::string from = conn[0].get<std::string>(), to = conn[1].get<std::string>();
        for (const auto& idref : {from, to})
            if (!cfg.system.components.count(idref))
                throw ConfigError(path + ": connection references unknown component '" + idref + "'");
        cfg.system.connections.insert({from, to});
    }

    const json& wl = doc.value("workload", json::object());
    for (const auto& entry : wl.value("loads", json::array())) {
        std::int64_t tick = entry.value("tick", -1);
        std::string comp = entry.value("component", "");
        if (tick < 0) throw ConfigError(path + ": workload loads need non-negative 'tick'");
        if (!cfg.system.components.count(comp))
            throw ConfigError(path + ": workload references unknown component '" + comp + "'");
        cfg.workload.loads[tick][comp] = entry.value("load", 0.0);
    }
    for (const auto& entry : wl.value("faults", json::array())) {
        std::int64_t tick = entry.value("tick", -1);
        std::string comp = entry.value("component", "");
        if (tick < 0) throw ConfigError(path + ": faults need non-negative 'tick'");
        if (!cfg.system.components.count(comp))
            throw ConfigError(path + ": fault references unknown component '" + comp + "'");
        cfg.workload.faults[tick].push_back(comp);
    }

    for (const auto& f : doc.value("admFiles", json::array()))
        cfg.adm_files.push_back(resolve_path(f.get<std::string>()));

    std::string engine = doc.value("engine", "both");
    if (engine == "coupled") cfg.engine = EngineMode::Coupled;
    else if (engine == "decoupled") cfg.engine = EngineMode::Decoupled;
    else if (engine == "both") cfg.engine = EngineMode::Both;
    else throw ConfigError(path + ": engine must be coupled, decoupled, or both");

    cfg.ticks = doc.value("ticks", 0);
    if (cfg.ticks < 1) throw ConfigError(path + ": ticks must be >= 1");
    cfg.seed = doc.value("seed", 0);
    cfg.system.seed = cfg.seed;

    const json& pl = doc.value("planner", json::object());
    cfg.planner.max_depth = pl.value("maxDepth", cfg.planner.max_depth);
    cfg.planner.beam_width = pl.value("beamWidth", cfg.planner.beam_width);
    cfg.planner.cost_weight = pl.value("costWeight", cfg.planner.cost_weight);
    cfg.planner.full_sweep_period = pl.value("fullSweepPeriod", cfg.planner.full_sweep_period);
    cfg.planner.slow_lane_period = pl.value("slowLanePeriod", cfg.planner.slow_lane_period);
    cfg.planner.critical_priority = pl.value("criticalPriority", cfg.planner.critical_priority);
    if (cfg.planner.max_depth < 1 || cfg.planner.full_sweep_period < 1 ||
        cfg.planner.slow_lane_period < 1 || cfg.planner.cost_weight < 0)
        throw ConfigError(path + ": planner bounds out of range");

    for (const auto& h : doc.value("hotSwap", json::array())) {
        HotSwapDirective d;
        d.tick = h.value("tick", -1);
        if (d.tick < 1) throw ConfigError(path + ": hotSwap needs tick >= 1");
        for (const auto& f : h.value("admFiles", json::array()))
            d.adm_files.push_back(resolve_path(f.get<std::string>()));
        if (d.adm_files.empty()) throw ConfigError(path + ": hotSwap needs admFiles");
        cfg.hot_swaps.push_back(std::move(d));
    }

    if (cfg.adm_files.empty()) throw ConfigError(path + ": admFiles must name at least one file");
    for (const auto& f : cfg.adm_files)
        if (!fs::exists(f)) throw ConfigError(path + ": adm file '" + f + "' does not exist");
    for (const auto& h : cfg.hot_swaps)
        for (const auto& f : h.adm_files)
            if (!fs::exists(f)) throw ConfigError(path + ": adm file '" + f + "' does not exist");
    return cfg;
}

} // namespace amrt
