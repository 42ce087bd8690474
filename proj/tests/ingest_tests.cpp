#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "../src/articles.hpp"
#include "../src/compact_json.hpp"
#include "../src/corpus.hpp"
#include "../src/dmn_xml.hpp"
#include "../src/engine.hpp"
#include "../src/errors.hpp"
#include "../src/outcome_eval.hpp"
#include "../src/simplify.hpp"
#include "../src/util.hpp"
#include "test_helpers.hpp"

using namespace dmnkit;
using namespace dmnkit::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kCorpusDir = fs::path(DMNKIT_SOURCE_DIR) / "data" / "mini_corpus";

std::string corpus_file(const char* rel) {
    return read_file(kCorpusDir / rel);
}

// Scratch directory for tests that need to lay out files on disk.
fs::path fresh_tmp_dir(const std::string& name) {
    fs::path dir = fs::path("ingest_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const ModelBundle* find_bundle(const Corpus& c, const std::string& id) {
    for (const ModelBundle& b : c.bundles)
        if (b.graph.id == id) return &b;
    return nullptr;
}

}  // namespace

TEST_CASE("compact json round trip is byte identical") {
    DecisionGraph wind = wind_turbine_model();
    std::string once = serialize_graph(wind);
    DecisionGraph back = deserialize_graph(once);
    CHECK(serialize_graph(back) == once);
    CHECK(validate_graph(back).ok());
    CHECK(back.id == wind.id);
    CHECK(back.nodes.size() == wind.nodes.size());
    CHECK(back.edges.size() == wind.edges.size());
}

TEST_CASE("compact json preserves every test and literal shape") {
    DecisionGraph g;
    g.id = "shapes";
    g.model_type = ModelType::Requirements;
    g.nodes.push_back(mk_input("num", ValueType::Number));
    g.nodes.push_back(mk_input("txt", ValueType::String));
    g.nodes.push_back(mk_table_node(
        "out", NodeKind::Output, HitPolicy::First, {"num", "txt"},
        {mk_rule({">= 2.50", "contains(\"ke lek\")"}, "\"both\""),
         mk_rule({"< -0.125", "not(\"x\")"}, "-17.5"),
         mk_rule({"3", "null"}, "null"),
         mk_rule({"-", "not(null)"}, "true")}));
    g.output_node_id = "out";
    add_table_edges(g);
    REQUIRE(validate_graph(g).ok());

    std::string bytes = serialize_graph(g);
    DecisionGraph back = deserialize_graph(bytes);
    CHECK(serialize_graph(back) == bytes);
    REQUIRE(back.nodes[2].table.has_value());
    CHECK(back.nodes[2].table->rules.size() == 4);
    CHECK(back.nodes[2].table->rules[1].output == Value::number(Decimal::parse("-17.5")));
}

TEST_CASE("deserialize reports field paths") {
    CHECK_THROWS_AS(deserialize_graph("not json"), SchemaError);

    auto path_of = [](const char* doc) {
        try {
            deserialize_graph(doc);
        } catch (const SchemaError& e) {
            return std::string(e.path());
        }
        return std::string("<no error>");
    };

    CHECK(path_of("[1,2]") == "$");
    CHECK(path_of(R"x({"model_type":"Outcome"})x") == "id");
    CHECK(path_of(R"x({"id":"x","model_type":"Nope"})x") == "model_type");
    CHECK(path_of(R"x({"id":"x","model_type":"Outcome","output_node":"o","nodes":[{}],"edges":[]})x") ==
          "nodes[0].id");
    CHECK(path_of(R"x({"id":"x","model_type":"Outcome","output_node":"o",
                      "nodes":[{"id":"a","name":"a","kind":"input"}],"edges":[]})x") ==
          "nodes[0].value_type");
    CHECK(path_of(R"x({"id":"x","model_type":"Outcome","output_node":"o",
                      "nodes":[{"id":"a","name":"a","kind":"output",
                                "table":{"hit_policy":"SOMETIMES","inputs":[],"output_name":"a","rules":[]}}],
                      "edges":[]})x") == "nodes[0].table.hit_policy");
    CHECK(path_of(R"x({"id":"x","model_type":"Outcome","output_node":"o",
                      "nodes":[{"id":"a","name":"a","kind":"output",
                                "table":{"hit_policy":"UNIQUE","inputs":[],"output_name":"a",
                                         "rules":[{"when":["tru"],"then":"true"}]}}],
                      "edges":[]})x") == "nodes[0].table.rules[0].when[0]");
    CHECK(path_of(R"x({"id":"x","model_type":"Outcome","output_node":"o",
                      "nodes":[{"id":"a","name":"a","kind":"output",
                                "table":{"hit_policy":"UNIQUE","inputs":[],"output_name":"a",
                                         "rules":[{"when":[],"then":"max(1)"}]}}],
                      "edges":[]})x") == "nodes[0].table.rules[0].then");
}

TEST_CASE("parse_dmn builds the wind turbine graph") {
    DecisionGraph g = parse_dmn(corpus_file("models/conclusie/GeluidProdWindturbine.xml"));
    CHECK(g.id == "GeluidProdWindturbine");
    CHECK(validate_graph(g).ok());
    CHECK(g.nodes.size() == 9);
    CHECK(g.edges.size() == 8);
    CHECK(g.output_node_id == "d_geluid");

    int inputs = 0, decisions = 0, outputs = 0;
    for (const Node& n : g.nodes) {
        if (n.kind == NodeKind::InputVariable) {
            ++inputs;
            CHECK(n.value_type == ValueType::Boolean);
        } else if (n.kind == NodeKind::Decision) {
            ++decisions;
        } else {
            ++outputs;
        }
    }
    CHECK(inputs == 4);
    CHECK(decisions == 4);
    CHECK(outputs == 1);

    const Node* root = g.find_node("d_geluid");
    REQUIRE(root);
    REQUIRE(root->table.has_value());
    CHECK(root->table->hit_policy == HitPolicy::First);
    CHECK(root->table->input_refs ==
          std::vector<std::string>{"d_elektriciteit", "d_rotor", "d_windpark", "d_noordzee"});
}

TEST_CASE("wind turbine graph evaluates the duty on exactly one combination") {
    DecisionGraph g = parse_dmn(corpus_file("models/conclusie/GeluidProdWindturbine.xml"));
    int melding = 0;
    for (int mask = 0; mask < 16; ++mask) {
        Assignment in;
        in["in_elektriciteit"] = Value::boolean(mask & 1);
        in["in_rotor"] = Value::boolean(mask & 2);
        in["in_windpark"] = Value::boolean(mask & 4);
        in["in_noordzee"] = Value::boolean(mask & 8);
        ExecutionResult res = execute(g, in, ExecMode::Strict);
        REQUIRE(res.output_value.kind() == Value::Kind::Text);
        bool duty = res.output_value == Value::text("melding geluid productie windturbine");
        if (duty) ++melding;
        CHECK(duty == (mask == 3));
        if (!duty) CHECK(res.output_value == Value::text("niet van toepassing"));
    }
    CHECK(melding == 1);
}

TEST_CASE("wind turbine pass-through layer simplifies away") {
    DecisionGraph parsed = parse_dmn(corpus_file("models/conclusie/GeluidProdWindturbine.xml"));
    auto [g, rep] = eliminate_identity_nodes(parsed);
    CHECK(rep.removed_node_ids.size() == 4);
    CHECK(rep.nodes_before == 9);
    CHECK(rep.nodes_after == 5);
    CHECK(rep.edges_after == 4);
    // All four pure decision nodes are pass-throughs; the combining table
    // lives on the output node.
    CHECK(rep.identity_fraction_before == doctest::Approx(1.0));
    CHECK(rep.identity_fraction_all_nodes == doctest::Approx(4.0 / 9.0));
    CHECK(validate_graph(g).ok());

    const Node* root = g.find_node("d_geluid");
    REQUIRE(root);
    std::set<std::string> refs(root->table->input_refs.begin(), root->table->input_refs.end());
    CHECK(refs == std::set<std::string>{"in_elektriciteit", "in_rotor", "in_windpark", "in_noordzee"});
}

TEST_CASE("parse_dmn handles a minimal two node model") {
    const char* xml = R"(<?xml version="1.0"?>
<definitions id="mini">
  <inputData id="i" name="vraag" typeRef="boolean"/>
  <decision id="d" name="antwoord">
    <informationRequirement><requiredInput href="#i"/></informationRequirement>
    <decisionTable>
      <input><inputExpression><text>vraag</text></inputExpression></input>
      <output name="antwoord"/>
      <rule><inputEntry><text>true</text></inputEntry><outputEntry><text>"ja"</text></outputEntry></rule>
      <rule><inputEntry><text>false</text></inputEntry><outputEntry><text>"nee"</text></outputEntry></rule>
    </decisionTable>
  </decision>
</definitions>)";
    DecisionGraph g = parse_dmn(xml);
    CHECK(g.nodes.size() == 2);
    CHECK(g.edges.size() == 1);
    CHECK(g.output_node_id == "d");
    CHECK(g.find_node("d")->kind == NodeKind::Output);
    CHECK(g.find_node("d")->table->hit_policy == HitPolicy::Unique);  // attribute default
    CHECK(validate_graph(g).ok());
}

TEST_CASE("parse_dmn rejects malformed documents with element paths") {
    auto message_of = [](const char* xml) {
        try {
            parse_dmn(xml);
        } catch (const XmlError& e) {
            return std::string(e.what());
        }
        return std::string("<no error>");
    };

    CHECK_THROWS_AS(parse_dmn("<definitions id='x'><decision"), XmlError);

    // No decision at all.
    CHECK(message_of(R"(<definitions id="x"><inputData id="i" name="i" typeRef="boolean"/></definitions>)")
              .find("no root decision") != std::string::npos);

    // Two roots: neither decision requires the other.
    const char* two_roots = R"(<definitions id="x">
      <inputData id="i" name="i" typeRef="boolean"/>
      <decision id="d1" name="d1">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
      <decision id="d2" name="d2">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK(message_of(two_roots).find("multiple root decisions") != std::string::npos);

    // Unknown hit policy.
    const char* bad_policy = R"(<definitions id="x">
      <inputData id="i" name="i" typeRef="boolean"/>
      <decision id="d" name="d">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable hitPolicy="PRIORITY">
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK(message_of(bad_policy).find("PRIORITY") != std::string::npos);

    // Column that names no required node.
    const char* bad_column = R"(<definitions id="x">
      <inputData id="i" name="i" typeRef="boolean"/>
      <decision id="d" name="d">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>onbekend</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK(message_of(bad_column).find("onbekend") != std::string::npos);

    // Requirement pointing at a node that does not exist.
    const char* dangling = R"(<definitions id="x">
      <inputData id="i" name="i" typeRef="boolean"/>
      <decision id="d" name="d">
        <informationRequirement><requiredInput href="#ghost"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK_THROWS_AS(parse_dmn(dangling), XmlError);

    // Non-literal output entry.
    const char* bad_output = R"(<definitions id="x">
      <inputData id="i" name="i" typeRef="boolean"/>
      <decision id="d" name="d">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>max(1,2)</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK(message_of(bad_output).find("outputEntry") != std::string::npos);

    // Input without a usable type.
    const char* no_type = R"(<definitions id="x">
      <inputData id="i" name="i"/>
      <decision id="d" name="d">
        <informationRequirement><requiredInput href="#i"/></informationRequirement>
        <decisionTable>
          <input><inputExpression><text>i</text></inputExpression></input><output name="o"/>
          <rule><inputEntry><text>-</text></inputEntry><outputEntry><text>true</text></outputEntry></rule>
        </decisionTable>
      </decision>
    </definitions>)";
    CHECK(message_of(no_type).find("typeRef") != std::string::npos);
}

TEST_CASE("parse_dmn is deterministic") {
    std::string bytes = corpus_file("models/indiening/KoelwaterLozen.xml");
    CHECK(serialize_graph(parse_dmn(bytes)) == serialize_graph(parse_dmn(bytes)));
}

TEST_CASE("extract_article_refs reads knowledge sources in order") {
    CHECK(extract_article_refs(corpus_file("models/conclusie/GeluidProdWindturbine.xml")) ==
          std::vector<std::string>{"bal-4.420"});
    CHECK(extract_article_refs(corpus_file("models/indiening/OppervlaktewaterOnttrekken.xml")) ==
          std::vector<std::string>{"bal-8.1", "bal-8.2"});

    const char* duplicated = R"(<definitions id="x">
      <knowledgeSource id="k1" locationURI="a-1"/>
      <knowledgeSource id="k2" locationURI="a-2"/>
      <knowledgeSource id="k3" locationURI="a-1"/>
    </definitions>)";
    CHECK(extract_article_refs(duplicated) == std::vector<std::string>{"a-1", "a-2"});
}

TEST_CASE("parse_articles reads the fixture act") {
    std::vector<LegalArticle> arts = parse_articles(corpus_file("articles/bal.xml"), "bal.xml");
    REQUIRE(arts.size() == 16);

    const LegalArticle* wind = nullptr;
    const LegalArticle* koelwater = nullptr;
    const LegalArticle* opslaan = nullptr;
    const LegalArticle* onttrekken = nullptr;
    for (const LegalArticle& a : arts) {
        if (a.id == "bal-4.420") wind = &a;
        if (a.id == "bal-6.1") koelwater = &a;
        if (a.id == "bal-2.11") opslaan = &a;
        if (a.id == "bal-8.1") onttrekken = &a;
    }
    REQUIRE(wind);
    REQUIRE(koelwater);
    REQUIRE(opslaan);
    REQUIRE(onttrekken);

    CHECK(wind->act == "bal");
    CHECK(wind->title == "Aanwijzing geluid productie windturbine");
    CHECK(wind->internal_refs == std::vector<std::string>{"bal-4.421", "bal-4.422"});
    CHECK(wind->list_item_count == 2);  // li elements
    CHECK(!wind->recital_text.empty());
    CHECK(wind->body_text.find("rotordiameter van meer dan 2 meter") != std::string::npos);

    CHECK(koelwater->list_item_count == 3);  // a. b. c. marker lines, no list elements
    CHECK(koelwater->internal_refs == std::vector<std::string>{"bal-6.2", "bal-6.3"});

    CHECK(opslaan->recital_text.empty());
    CHECK(opslaan->internal_refs == std::vector<std::string>{"bal-2.12", "bal-2.13", "ow-5.1"});
    CHECK(opslaan->list_item_count == 0);

    // Document order of the references, not numeric order.
    CHECK(onttrekken->internal_refs == std::vector<std::string>{"bal-8.3", "bal-8.2"});
    CHECK(onttrekken->list_item_count == 3);
}

TEST_CASE("cross reference expansion walks one level within the act") {
    ArticleStore store;
    for (const LegalArticle& a : parse_articles(corpus_file("articles/bal.xml")))
        store.add(a);
    for (const LegalArticle& a : parse_articles(corpus_file("articles/ow.xml")))
        store.add(a);
    REQUIRE(store.size() == 19);

    // One level only: bal-4.421's own reference to bal-4.423 stays out.
    ExpansionResult r = expand_cross_references({"bal-4.420"}, store);
    CHECK(r.ids == std::vector<std::string>{"bal-4.420", "bal-4.421", "bal-4.422"});
    CHECK(r.warnings.empty());

    // Reference into another act is ignored.
    r = expand_cross_references({"bal-2.11"}, store);
    CHECK(r.ids == std::vector<std::string>{"bal-2.11", "bal-2.12", "bal-2.13"});

    // No references, nothing to add.
    r = expand_cross_references({"bal-6.2"}, store);
    CHECK(r.ids == std::vector<std::string>{"bal-6.2"});

    // Dangling seed id stays, with a warning.
    r = expand_cross_references({"bal-9.99", "bal-6.2"}, store);
    CHECK(r.ids == std::vector<std::string>{"bal-9.99", "bal-6.2"});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("bal-9.99") != std::string::npos);

    // New ids sort ascending after the seed block.
    r = expand_cross_references({"bal-7.1"}, store);
    CHECK(r.ids == std::vector<std::string>{"bal-7.1", "bal-7.2", "bal-7.3"});

    // Output contains the seed and stays duplicate-free, for every singleton seed.
    for (const auto& [id, art] : store.all()) {
        ExpansionResult e = expand_cross_references({id}, store);
        REQUIRE(!e.ids.empty());
        CHECK(e.ids.front() == id);
        std::set<std::string> uniq(e.ids.begin(), e.ids.end());
        CHECK(uniq.size() == e.ids.size());
    }
}

TEST_CASE("expansion warns about dangling references without failing") {
    ArticleStore store;
    LegalArticle a;
    a.id = "x-1";
    a.act = "x";
    a.internal_refs = {"x-2", "x-ghost"};
    store.add(a);
    LegalArticle b;
    b.id = "x-2";
    b.act = "x";
    store.add(b);

    ExpansionResult r = expand_cross_references({"x-1"}, store);
    CHECK(r.ids == std::vector<std::string>{"x-1", "x-2"});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("x-ghost") != std::string::npos);
}

TEST_CASE("load_corpus assembles the mini corpus") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string(),
                           (kCorpusDir / "srl").string());
    CHECK(c.errors.empty());
    CHECK(c.warnings.empty());
    CHECK(c.articles.size() == 19);
    REQUIRE(c.bundles.size() == 6);

    std::vector<std::string> ids;
    for (const ModelBundle& b : c.bundles) ids.push_back(b.graph.id);
    CHECK(ids == std::vector<std::string>{"AlarminstallatieHebben", "GeluidProdWindturbine",
                                          "KoelwaterLozen", "MilieubelastendeActiviteit",
                                          "OppervlaktewaterOnttrekken", "OpslaanGrond"});

    for (const ModelBundle& b : c.bundles) {
        CHECK(validate_graph(b.graph).ok());
        CHECK(!b.missing_articles);
        CHECK(b.srl.has_value());
        CHECK(b.source_bytes > 0);
    }

    auto type_of = [&](const char* id) { return find_bundle(c, id)->graph.model_type; };
    CHECK(type_of("GeluidProdWindturbine") == ModelType::Outcome);
    CHECK(type_of("MilieubelastendeActiviteit") == ModelType::Outcome);
    CHECK(type_of("OpslaanGrond") == ModelType::Outcome);
    CHECK(type_of("AlarminstallatieHebben") == ModelType::Requirements);
    CHECK(type_of("KoelwaterLozen") == ModelType::Requirements);
    CHECK(type_of("OppervlaktewaterOnttrekken") == ModelType::Requirements);

    CHECK(find_bundle(c, "GeluidProdWindturbine")->article_ids ==
          std::vector<std::string>{"bal-4.420", "bal-4.421", "bal-4.422"});
    CHECK(find_bundle(c, "OpslaanGrond")->article_ids ==
          std::vector<std::string>{"bal-2.11", "bal-2.12", "bal-2.13"});
    CHECK(find_bundle(c, "MilieubelastendeActiviteit")->article_ids ==
          std::vector<std::string>{"ow-5.1", "ow-5.2", "ow-5.3"});
    CHECK(find_bundle(c, "AlarminstallatieHebben")->article_ids ==
          std::vector<std::string>{"bal-7.1", "bal-7.2", "bal-7.3"});
    CHECK(find_bundle(c, "KoelwaterLozen")->article_ids ==
          std::vector<std::string>{"bal-6.1", "bal-6.2", "bal-6.3"});
    CHECK(find_bundle(c, "OppervlaktewaterOnttrekken")->article_ids ==
          std::vector<std::string>{"bal-8.1", "bal-8.2", "bal-8.3"});

    const ModelBundle* koelwater = find_bundle(c, "KoelwaterLozen");
    REQUIRE(koelwater->srl);
    const auto& objects = koelwater->srl->objects;
    CHECK(std::find(objects.begin(), objects.end(), "koelwater") != objects.end());
    CHECK(std::find(objects.begin(), objects.end(), "de maximale warmtevracht") != objects.end());

    // The compact form beats the XML source on size for every fixture model.
    for (const ModelBundle& b : c.bundles)
        CHECK(serialize_graph(b.graph).size() < b.source_bytes);
}

TEST_CASE("mini corpus testability matches the model shapes") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string());

    auto verdict = [&](const char* id) { return assess_testability(find_bundle(c, id)->graph); };

    TestabilityVerdict v = verdict("GeluidProdWindturbine");
    CHECK(v.eligible);
    CHECK(v.reason == TestabilityReason::AllBooleanWithinCap);
    CHECK(v.case_count == 16);

    v = verdict("OpslaanGrond");
    CHECK(v.eligible);
    CHECK(v.case_count == 4);

    v = verdict("MilieubelastendeActiviteit");
    CHECK(!v.eligible);
    CHECK(v.reason == TestabilityReason::UnsupportedInputType);

    v = verdict("AlarminstallatieHebben");
    CHECK(v.eligible);
    CHECK(v.reason == TestabilityReason::StringDomainsExtracted);
    CHECK(v.case_count == 4);

    v = verdict("KoelwaterLozen");
    CHECK(v.eligible);
    CHECK(v.reason == TestabilityReason::StringDomainsExtracted);
    CHECK(v.case_count == 6);

    v = verdict("OppervlaktewaterOnttrekken");
    CHECK(v.eligible);
    CHECK(v.reason == TestabilityReason::AllBooleanWithinCap);
    CHECK(v.case_count == 4);
}

TEST_CASE("mini corpus models behave under execution") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string());

    const DecisionGraph& koelwater = find_bundle(c, "KoelwaterLozen")->graph;
    auto run = [&](Value warmte, bool lozing) {
        Assignment in;
        in["in_warmtevracht"] = std::move(warmte);
        in["in_lozing"] = Value::boolean(lozing);
        return execute(koelwater, in, ExecMode::Permissive).output_value;
    };
    CHECK(run(Value::text("groot"), false) == Value::text("ja"));
    CHECK(run(Value::text("klein"), true) == Value::text("ja"));
    CHECK(run(Value::text("klein"), false) == Value::text("nee"));
    CHECK(run(Value::null(), true) == Value::text("ja"));
    CHECK(run(Value::null(), false) == Value::text("nee"));

    const DecisionGraph& onttrekken = find_bundle(c, "OppervlaktewaterOnttrekken")->graph;
    auto run2 = [&](bool beregening, bool drinkwater) {
        Assignment in;
        in["in_beregening"] = Value::boolean(beregening);
        in["in_drinkwater"] = Value::boolean(drinkwater);
        return execute(onttrekken, in, ExecMode::Strict).output_value;
    };
    CHECK(run2(false, false) == Value::text("nee"));  // empty COLLECT list
    CHECK(run2(true, false) == Value::text("ja"));
    CHECK(run2(false, true) == Value::text("ja"));
    CHECK(run2(true, true) == Value::text("ja"));

    // UR/CR naming shows up in the chain profile, placeholders in detection.
    ChainProfile alarm = chain_profile(find_bundle(c, "AlarminstallatieHebben")->graph);
    CHECK(alarm.ur_nodes == 1);
    CHECK(alarm.cr_nodes == 1);
    ChainProfile ont = chain_profile(onttrekken);
    CHECK(ont.ur_nodes == 2);
    CHECK(ont.cr_nodes == 0);

    CHECK(detect_placeholder_inputs(find_bundle(c, "OpslaanGrond")->graph) ==
          std::vector<std::string>{"in_vast"});
    CHECK(detect_placeholder_inputs(koelwater).empty());
}

TEST_CASE("every testable mini corpus model is outcome equivalent to its round trip") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string());
    int tested = 0;
    for (const ModelBundle& b : c.bundles) {
        TestabilityVerdict v = assess_testability(b.graph);
        if (!v.eligible) continue;
        DecisionGraph candidate = deserialize_graph(serialize_graph(b.graph));
        std::vector<Assignment> cases = generate_cases(extract_domains(b.graph));
        EquivalenceResult eq = equivalence(b.graph, candidate, cases);
        CHECK(eq.candidate_valid);
        CHECK(eq.case_count == v.case_count);
        CHECK(eq.rate == doctest::Approx(1.0));
        ++tested;
    }
    CHECK(tested == 5);
}

TEST_CASE("string identity nodes collapse in the categorical model") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string());
    auto [g, rep] = eliminate_identity_nodes(find_bundle(c, "MilieubelastendeActiviteit")->graph);
    std::set<std::string> removed(rep.removed_node_ids.begin(), rep.removed_node_ids.end());
    CHECK(removed == std::set<std::string>{"d_categorie", "d_omvang"});
    CHECK(g.nodes.size() == 3);
    CHECK(validate_graph(g).ok());
}

TEST_CASE("load_corpus keeps going after a broken file") {
    fs::path dir = fresh_tmp_dir("broken");
    fs::create_directories(dir / "models" / "plain");
    fs::create_directories(dir / "articles");
    write_file(dir / "models" / "plain" / "Goed.xml",
               corpus_file("models/conclusie/OpslaanGrond.xml"));
    write_file(dir / "models" / "plain" / "Kapot.xml", "<definitions id='x'><decision</definitions>");
    write_file(dir / "articles" / "bal.xml", corpus_file("articles/bal.xml"));

    Corpus c = load_corpus((dir / "models").string(), (dir / "articles").string());
    REQUIRE(c.bundles.size() == 1);
    CHECK(c.bundles[0].graph.id == "OpslaanGrond");
    REQUIRE(c.errors.size() == 1);
    CHECK(c.errors[0].path.find("Kapot.xml") != std::string::npos);

    // Path carries no type marker: defaults to Outcome with a warning.
    REQUIRE(!c.warnings.empty());
    CHECK(c.warnings[0].find("OpslaanGrond") != std::string::npos);
    CHECK(c.bundles[0].graph.model_type == ModelType::Outcome);
}

TEST_CASE("load_corpus honors the type override") {
    LoadOptions opt;
    opt.force_type = ModelType::Requirements;
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string(), "",
                           opt);
    for (const ModelBundle& b : c.bundles) CHECK(b.graph.model_type == ModelType::Requirements);
}

TEST_CASE("load_corpus flags bundles without resolvable articles") {
    fs::path dir = fresh_tmp_dir("missing_articles");
    fs::create_directories(dir / "models" / "conclusie");
    fs::create_directories(dir / "articles");
    write_file(dir / "models" / "conclusie" / "OpslaanGrond.xml",
               corpus_file("models/conclusie/OpslaanGrond.xml"));
    // Article store lacks bal-2.11 entirely.
    write_file(dir / "articles" / "ow.xml", corpus_file("articles/ow.xml"));

    Corpus c = load_corpus((dir / "models").string(), (dir / "articles").string());
    REQUIRE(c.bundles.size() == 1);
    CHECK(c.bundles[0].missing_articles);
    CHECK(c.bundles[0].articles.empty());
    REQUIRE(!c.warnings.empty());
    CHECK(c.warnings[0].find("bal-2.11") != std::string::npos);
}

TEST_CASE("write_corpus lays out the canonical artifact tree") {
    Corpus c = load_corpus((kCorpusDir / "models").string(), (kCorpusDir / "articles").string(),
                           (kCorpusDir / "srl").string());
    fs::path out = fresh_tmp_dir("written");
    write_corpus(c, out.string());

    CHECK(fs::exists(out / "corpus_manifest.json"));
    CHECK(fs::exists(out / "articles.json"));
    CHECK(fs::exists(out / "srl.json"));
    for (const ModelBundle& b : c.bundles) {
        fs::path compact = out / "compact" / (b.graph.id + ".json");
        REQUIRE(fs::exists(compact));
        CHECK(serialize_graph(deserialize_graph(read_file(compact))) == serialize_graph(b.graph));
    }

    std::string manifest = read_file(out / "corpus_manifest.json");
    CHECK(manifest.find("\"GeluidProdWindturbine\"") != std::string::npos);
    CHECK(manifest.find("bal-4.420") != std::string::npos);
    std::string srl = read_file(out / "srl.json");
    CHECK(srl.find("de maximale warmtevracht") != std::string::npos);

    // Re-running the writer is byte-stable.
    std::string before = read_file(out / "corpus_manifest.json");
    write_corpus(c, out.string());
    CHECK(read_file(out / "corpus_manifest.json") == before);
}
