#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "amrt/adm/parser.hpp"

#include "fixtures.hpp"
#include "generators.hpp"

#include <fstream>
#include <sstream>

using namespace amrt;
using namespace amrt::adm;
using namespace amrt::testfix;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ResolveResult load_adm(const std::string& text, const Metamodel& mm,
                       const std::string& file = "test.adm") {
    auto pr = parse(text, file);
    REQUIRE(pr.ok());
    return resolve({pr.bundle}, mm);
}

const char* kMini = R"(
adaptation Mini;
param MAX_RT: float = 500;
quality perf {
  metric avg(Component.rt where state == "RUNNING");
  direction minimize;
  bounds [0, 1000];
}
preferences { perf = 1.0; }
condition HighRt priority 5 lane fast on (attr-changed, rt) {
  Component @c where c.rt > MAX_RT
}
option Noop() {
  pre Component @c where c.rt > MAX_RT;
  effect set c.state = "RUNNING";
  post c.state == "RUNNING";
  cost 1;
}
rule R1: when HighRt do Noop;
)";

} // namespace

TEST_CASE("parse: param declaration produces a typed literal") {
    auto pr = parse("adaptation T;\nparam MAX_RT: float = 500;\n", "t.adm");
    CHECK(pr.ok());
    REQUIRE(pr.bundle.params.size() == 1);
    CHECK(pr.bundle.params[0].name == "MAX_RT");
    CHECK(pr.bundle.params[0].kind == "float");
    CHECK(as_number(pr.bundle.params[0].value.literal) == doctest::Approx(500));
}

TEST_CASE("parse: header-only file is an empty bundle") {
    auto pr = parse("adaptation Empty;\n", "e.adm");
    CHECK(pr.ok());
    CHECK(pr.bundle.name == "Empty");
    CHECK(pr.bundle.params.empty());
    CHECK(pr.bundle.options.empty());
}

TEST_CASE("parse: missing semicolon is reported with its line") {
    auto pr = parse("adaptation T;\nparam A: int = 1\nparam B: int = 2;\n", "t.adm");
    CHECK_FALSE(pr.ok());
    REQUIRE(!pr.diagnostics.empty());
    CHECK(pr.diagnostics[0].span.line == 3); // the error surfaces where ';' was expected
    CHECK(pr.diagnostics[0].span.file == "t.adm");
    // recovery still collects both params
    CHECK(pr.bundle.params.size() == 2);
}

TEST_CASE("parse: multiple errors are all reported") {
    auto pr = parse("adaptation T;\nparam A int = 1;\nrule R: wheen X do Y;\n", "t.adm");
    CHECK_FALSE(pr.ok());
    CHECK(pr.diagnostics.size() >= 2);
}

TEST_CASE("parse: effect blocks outside options are syntax errors") {
    auto pr = parse("adaptation T;\ncondition C priority 1 lane fast { Component @c "
                    "effect set c.state = \"X\" }\n",
                    "t.adm");
    CHECK_FALSE(pr.ok());
}

TEST_CASE("resolve: fixture text binds against the CS metamodel") {
    auto mm = cs_metamodel();
    auto rr = load_adm(kMini, mm);
    REQUIRE(rr.ok());
    const auto& b = rr.bundle;
    CHECK(b.name == "Mini");
    CHECK(as_number(b.parameters.at("MAX_RT")) == doctest::Approx(500));
    REQUIRE(b.qualities.size() == 1);
    CHECK(b.qualities[0].agg == Aggregator::Avg);
    CHECK(b.qualities[0].filter.size() == 1);
    REQUIRE(b.conditions.size() == 1);
    CHECK(b.conditions[0].lane == Lane::Fast);
    CHECK(b.conditions[0].pattern.anchor_var == "c");
    // the parameter was substituted by value at the use site
    REQUIRE(b.conditions[0].pattern.predicates.size() == 1);
    CHECK(as_number(b.conditions[0].pattern.predicates[0].value) == doctest::Approx(500));
    REQUIRE(b.rules.size() == 1);
    CHECK(b.rules[0].actions[0].option_id == "Noop");
}

TEST_CASE("resolve: unknown type, attribute, and id have spans") {
    auto mm = cs_metamodel();

    auto bad_type = parse("adaptation T;\ngoal G { forbid Cmponent c }\n", "t.adm");
    REQUIRE(bad_type.ok());
    auto rr = resolve({bad_type.bundle}, mm);
    CHECK_FALSE(rr.ok());
    REQUIRE(!rr.diagnostics.empty());
    CHECK(rr.diagnostics[0].message.find("Cmponent") != std::string::npos);
    CHECK(rr.diagnostics[0].span.line == 2);

    auto bad_attr = parse(
        "adaptation T;\ngoal G { forbid Component c where c.latency > 1 }\n", "t.adm");
    auto rr2 = resolve({bad_attr.bundle}, mm);
    CHECK_FALSE(rr2.ok());

    auto bad_rule = parse("adaptation T;\ncondition C priority 1 lane fast { Component c }\n"
                          "rule R: when C do Missing;\n",
                          "t.adm");
    auto rr3 = resolve({bad_rule.bundle}, mm);
    CHECK_FALSE(rr3.ok());
    bool unknown_option = false;
    for (const auto& d : rr3.diagnostics)
        unknown_option |= d.message.find("unknown option 'Missing'") != std::string::npos;
    CHECK(unknown_option);
}

TEST_CASE("resolve: kind mismatches are rejected") {
    auto mm = cs_metamodel();
    auto pr = parse("adaptation T;\ngoal G { forbid Component c where c.state > 5 }\n", "t.adm");
    auto rr = resolve({pr.bundle}, mm);
    CHECK_FALSE(rr.ok());
}

TEST_CASE("resolve: cross-file references and global id uniqueness") {
    auto mm = cs_metamodel();
    auto f1 = parse("adaptation Base;\ncondition C priority 1 lane fast { Component @c }\n",
                    "base.adm");
    auto f2 = parse("adaptation Ext;\noption O() { pre Component @c; effect set c.state = "
                    "\"RUNNING\"; post c.state == \"RUNNING\"; cost 1; }\n"
                    "rule R: when C do O;\n",
                    "ext.adm");
    REQUIRE(f1.ok());
    REQUIRE(f2.ok());
    auto rr = resolve({f1.bundle, f2.bundle}, mm);
    CHECK(rr.ok()); // rule in ext.adm references the condition from base.adm

    auto dup = parse("adaptation Dup;\ncondition C priority 2 lane slow { Component c }\n",
                     "dup.adm");
    auto rr2 = resolve({f1.bundle, dup.bundle}, mm);
    CHECK_FALSE(rr2.ok());
}

TEST_CASE("static_check: weight sums, duplicate priorities, overlap warning") {
    auto mm = cs_metamodel();

    SUBCASE("fixture weights pass") {
        auto rr = load_adm(kMini, mm);
        auto diags = static_check_bundle(rr.bundle, mm);
        for (const auto& d : diags) CHECK(d.severity != Diagnostic::Severity::Error);
    }

    SUBCASE("weights summing to 0.9 are an error") {
        std::string text = kMini;
        auto pos = text.find("perf = 1.0");
        text.replace(pos, 10, "perf = 0.9");
        auto rr = load_adm(text, mm);
        auto diags = static_check_bundle(rr.bundle, mm);
        bool weight_error = false;
        for (const auto& d : diags)
            weight_error |= d.severity == Diagnostic::Severity::Error &&
                            d.message.find("sum") != std::string::npos;
        CHECK(weight_error);
    }

    SUBCASE("duplicate priorities are an error") {
        std::string text(kMini);
        text += "condition Another priority 5 lane slow { Component x }\n";
        auto rr = load_adm(text, mm);
        auto diags = static_check_bundle(rr.bundle, mm);
        bool dup = false;
        for (const auto& d : diags) dup |= d.message.find("priority") != std::string::npos;
        CHECK(dup);
    }

    SUBCASE("two rules on one condition writing the same attribute warn (hand oracle)") {
        std::string text(kMini);
        text += R"(
option Alt() {
  pre Component @c where c.rt > MAX_RT;
  effect set c.state = "FAILED";
  post c.state == "FAILED";
  cost 1;
}
rule R2: when HighRt do Alt;
)";
        auto rr = load_adm(text, mm);
        REQUIRE(rr.ok());
        auto diags = static_check_bundle(rr.bundle, mm);
        // pairwise effect-target intersection: both write c.state
        bool overlap = false;
        for (const auto& d : diags)
            overlap |= d.severity == Diagnostic::Severity::Warning &&
                       d.message.find("both write 'c.state'") != std::string::npos;
        CHECK(overlap);
    }

    SUBCASE("effects writing sensor-owned attributes are an error") {
        std::string text(kMini);
        text += R"(
option Cheat() {
  pre Component @c;
  effect set c.rt = 1;
  post c.rt == 1;
  cost 0;
}
)";
        auto rr = load_adm(text, mm);
        REQUIRE(rr.ok());
        auto diags = static_check_bundle(rr.bundle, mm);
        bool sensor = false;
        for (const auto& d : diags)
            sensor |= d.severity == Diagnostic::Severity::Error &&
                      d.message.find("sensor-owned") != std::string::npos;
        CHECK(sensor);
    }
}

TEST_CASE("serialize: canonical order, comments dropped, fixture round-trips") {
    auto mm = cs_metamodel();
    std::string fixture = read_file(std::string(AMRT_SCENARIO_DIR) + "/shop_rules.adm");
    auto rr = load_adm(fixture, mm, "shop_rules.adm");
    REQUIRE(rr.ok());

    std::string canon = serialize(rr.bundle);
    CHECK(canon.find("//") == std::string::npos); // comments dropped

    // canonical declaration order
    auto p_param = canon.find("param ");
    auto p_quality = canon.find("quality ");
    auto p_prefs = canon.find("preferences ");
    auto p_goal = canon.find("goal ");
    auto p_cond = canon.find("condition ");
    auto p_opt = canon.find("option ");
    auto p_rule = canon.find("rule ");
    CHECK(p_param < p_quality);
    CHECK(p_quality < p_prefs);
    CHECK(p_prefs < p_goal);
    CHECK(p_goal < p_cond);
    CHECK(p_cond < p_opt);
    CHECK(p_opt < p_rule);

    // round trip: parse(serialize(b)) resolves to a structurally equal bundle
    auto rr2 = load_adm(canon, mm, "canon.adm");
    REQUIRE(rr2.ok());
    CHECK(serialize(rr2.bundle) == canon);

    // structural spot checks, independent of the serializer
    CHECK(rr2.bundle.options.size() == rr.bundle.options.size());
    CHECK(rr2.bundle.conditions.size() == rr.bundle.conditions.size());
    CHECK(rr2.bundle.rules.size() == rr.bundle.rules.size());
    CHECK(rr2.bundle.preferences.weights == rr.bundle.preferences.weights);
    CHECK(rr2.bundle.options.at("AddReplica").effect.size() ==
          rr.bundle.options.at("AddReplica").effect.size());
    CHECK(rr2.bundle.conditions[0].priority == rr.bundle.conditions[0].priority);
}

TEST_CASE("all shipped adm fixtures parse, resolve, and check cleanly") {
    auto mm = cs_metamodel();
    for (const char* name : {"shop_rules.adm", "shop_planner.adm", "shop_scaleout_v1.adm",
                             "shop_scaleout_v2.adm"}) {
        CAPTURE(name);
        std::string text = read_file(std::string(AMRT_SCENARIO_DIR) + "/" + name);
        auto pr = parse(text, name);
        REQUIRE(pr.ok());
        auto rr = resolve({pr.bundle}, mm);
        REQUIRE_MESSAGE(rr.ok(), diagnostic_to_string(rr.diagnostics.empty()
                                                          ? Diagnostic{}
                                                          : rr.diagnostics.front()));
        for (const auto& d : static_check_bundle(rr.bundle, mm))
            CHECK(d.severity != Diagnostic::Severity::Error);
    }
}

TEST_CASE("property: generated bundles survive serialize -> parse -> resolve") {
    auto mm = cs_metamodel();
    testgen::Rng rng(86420);
    for (int i = 0; i < 60; ++i) {
        // random bundle assembled from fixture building blocks
        AdaptationModelBundle b;
        b.name = "Gen" + std::to_string(i);
        int n_params = static_cast<int>(rng.below(3));
        for (int p = 0; p < n_params; ++p) {
            std::string name = "P" + std::to_string(p);
            b.parameters[name] = rng.chance(50) ? Scalar{static_cast<std::int64_t>(rng.below(100))}
                                                : Scalar{rng.frac() * 100.0};
        }
        QualityDimension q;
        q.id = "q0";
        q.agg = rng.chance(50) ? Aggregator::Avg : Aggregator::Fraction;
        q.node_type = "Component";
        q.attribute = q.agg == Aggregator::Fraction ? "" : "rt";
        if (rng.chance(60)) q.filter.push_back({"state", CmpOp::Eq, std::string("RUNNING")});
        q.direction = rng.chance(50) ? Direction::Minimize : Direction::Maximize;
        q.lo = 0;
        q.hi = 1 + static_cast<double>(rng.below(1000));
        b.qualities.push_back(q);
        b.preferences.weights = {{"q0", 1.0}};

        GoalSpec g;
        g.id = "g0";
        g.kind = rng.chance(50) ? GoalKind::Forbid : GoalKind::Require;
        g.pattern.nodes.push_back({"c", "Component"});
        g.pattern.predicates.push_back({"c", "load", CmpOp::Le, static_cast<double>(rng.below(90))});
        if (g.kind == GoalKind::Require) g.pattern.anchor_var = "c";
        b.goals.push_back(g);

        EvaluationCondition c;
        c.id = "c0";
        c.priority = static_cast<int>(rng.below(100));
        c.lane = rng.chance(50) ? Lane::Fast : Lane::Slow;
        c.trigger_kinds = {EventKind::AttrChanged};
        c.trigger_attribute = "rt";
        c.pattern.nodes.push_back({"c", "Component"});
        c.pattern.predicates.push_back({"c", "rt", CmpOp::Gt, static_cast<double>(rng.below(900))});
        c.pattern.anchor_var = "c";
        if (rng.chance(30)) {
            NegativeClause nac;
            nac.nodes.push_back({"n", "Component"});
            nac.edges.push_back({"c", "connects", "n"});
            c.pattern.negatives.push_back(nac);
        }
        b.conditions.push_back(c);

        AdaptationOption o;
        o.id = "o0";
        o.precondition.nodes.push_back({"c", "Component"});
        o.precondition.anchor_var = "c";
        o.precondition.predicates.push_back({"c", "state", CmpOp::Eq, std::string("FAILED")});
        o.effect.push_back(SetAttrTemplate{"c", "state", ValueExpr::lit(std::string("RUNNING"))});
        o.postcondition.push_back({"c", "state", CmpOp::Eq, ValueExpr::lit(std::string("RUNNING"))});
        o.cost = static_cast<double>(rng.below(10));
        if (rng.chance(50)) o.benefit["q0"] = rng.frac();
        b.options[o.id] = o;

        CoupledRule r;
        r.id = "r0";
        r.condition_id = "c0";
        r.actions = {{"o0", {}}};
        b.rules.push_back(r);

        std::string canon = serialize(b);
        auto pr = parse(canon, "gen.adm");
        REQUIRE_MESSAGE(pr.ok(), canon);
        auto rr = resolve({pr.bundle}, mm);
        REQUIRE_MESSAGE(rr.ok(), diagnostic_to_string(rr.diagnostics.empty()
                                                          ? Diagnostic{}
                                                          : rr.diagnostics.front()));
        CHECK(serialize(rr.bundle) == canon);
    }
}
