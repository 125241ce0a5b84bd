#include "logicbench/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "logicbench/errors.hpp"

namespace logicbench {

namespace {

std::string connective_name(Connective c) {
    switch (c) {
        case Connective::atom: return "atom";
        case Connective::conj: return "and";
        case Connective::disj: return "or";
    }
    return "atom";
}

Connective connective_from(const std::string& name) {
    if (name == "atom") return Connective::atom;
    if (name == "and") return Connective::conj;
    if (name == "or") return Connective::disj;
    throw Error("unknown connective name: " + name);
}

RuleKind rule_from(const std::string& name) {
    auto k = rule_from_name(name);
    if (!k) throw Error("unknown rule name: " + name);
    return *k;
}

std::string kind_name(NodeKind k) {
    return k == NodeKind::planning ? "planning" : "actual";
}

NodeKind kind_from(const std::string& name) {
    if (name == "actual") return NodeKind::actual;
    if (name == "planning") return NodeKind::planning;
    throw Error("unknown node kind: " + name);
}

}  // namespace

ordered_json statement_to_json(const Statement& s) {
    return ordered_json{{"subject", s.subject()},
                        {"form", connective_name(s.form())},
                        {"predicates", s.predicates()}};
}

Statement statement_from_json(const ordered_json& j) {
    return Statement::make(j.at("subject").get<std::string>(),
                           connective_from(j.at("form").get<std::string>()),
                           j.at("predicates").get<std::vector<std::string>>());
}

ordered_json form_to_json(const StatementForm& f) {
    return ordered_json{{"form", connective_name(f.form())}, {"predicates", f.predicates()}};
}

StatementForm form_from_json(const ordered_json& j) {
    return StatementForm::make(connective_from(j.at("form").get<std::string>()),
                               j.at("predicates").get<std::vector<std::string>>());
}

ordered_json graph_to_json(const GoldenGraph& g) {
    ordered_json nodes = ordered_json::array();
    for (const auto& n : g.nodes) {
        ordered_json jn = statement_to_json(n.statement);
        jn["depth"] = n.depth;
        if (n.rule) jn["rule"] = rule_name(*n.rule);
        if (!n.inputs.empty()) jn["inputs"] = n.inputs;
        if (n.universal_index) jn["universal"] = *n.universal_index;
        nodes.push_back(std::move(jn));
    }
    ordered_json universals = ordered_json::array();
    for (const auto& u : g.universals)
        universals.push_back(ordered_json{{"antecedent", form_to_json(u.antecedent())},
                                          {"consequent", form_to_json(u.consequent())}});
    ordered_json distractors = ordered_json::array();
    for (const auto& d : g.distractors) distractors.push_back(statement_to_json(d));
    return ordered_json{{"complexity", g.complexity},
                        {"conclusion", g.conclusion_index},
                        {"nodes", std::move(nodes)},
                        {"universals", std::move(universals)},
                        {"distractors", std::move(distractors)}};
}

GoldenGraph graph_from_json(const ordered_json& j) {
    GoldenGraph g;
    g.complexity = j.at("complexity").get<int>();
    g.conclusion_index = j.at("conclusion").get<int>();
    for (const auto& jn : j.at("nodes")) {
        GraphNode n;
        n.statement = statement_from_json(jn);
        n.depth = jn.at("depth").get<int>();
        if (jn.contains("rule")) n.rule = rule_from(jn["rule"].get<std::string>());
        if (jn.contains("inputs")) n.inputs = jn["inputs"].get<std::vector<int>>();
        if (jn.contains("universal")) n.universal_index = jn["universal"].get<int>();
        g.nodes.push_back(std::move(n));
    }
    for (const auto& ju : j.at("universals"))
        g.universals.emplace_back(form_from_json(ju.at("antecedent")),
                                  form_from_json(ju.at("consequent")));
    for (const auto& jd : j.at("distractors")) g.distractors.push_back(statement_from_json(jd));
    g.finalize();
    return g;
}

ordered_json instance_to_json(const ProblemInstance& inst) {
    return ordered_json{{"id", inst.id},
                        {"complexity", inst.complexity},
                        {"answer", inst.answer},
                        {"target", statement_to_json(inst.question_target)},
                        {"premises", inst.premise_text},
                        {"question", inst.question_text},
                        {"prompt", inst.prompt_text},
                        {"graph", graph_to_json(inst.golden)}};
}

ProblemInstance instance_from_json(const ordered_json& j) {
    ProblemInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.complexity = j.at("complexity").get<int>();
    inst.answer = j.at("answer").get<bool>();
    inst.question_target = statement_from_json(j.at("target"));
    inst.premise_text = j.at("premises").get<std::vector<std::string>>();
    inst.question_text = j.at("question").get<std::string>();
    inst.prompt_text = j.at("prompt").get<std::string>();
    inst.golden = graph_from_json(j.at("graph"));
    return inst;
}

ordered_json trace_to_json(const TraceRecord& rec) {
    return ordered_json{{"instance_id", rec.instance_id},
                        {"model_id", rec.model_id},
                        {"response", rec.response_text},
                        {"tokens", rec.token_count},
                        {"token_source", rec.token_source},
                        {"truncated", rec.truncated},
                        {"wall_time_ms", rec.wall_time_ms},
                        {"raw_response", rec.raw_response}};
}

TraceRecord trace_record_from_json(const ordered_json& j) {
    TraceRecord rec;
    rec.instance_id = j.at("instance_id").get<std::string>();
    rec.model_id = j.at("model_id").get<std::string>();
    rec.response_text = j.at("response").get<std::string>();
    rec.token_count = j.at("tokens").get<int>();
    rec.token_source = j.at("token_source").get<std::string>();
    rec.truncated = j.at("truncated").get<bool>();
    rec.wall_time_ms = j.at("wall_time_ms").get<double>();
    rec.raw_response = j.at("raw_response").get<std::string>();
    return rec;
}

namespace {

ordered_json base_to_json(const BaseMetrics& b) {
    return ordered_json{{"sentences", b.sentences},
                        {"tokens", b.tokens},
                        {"reflection_sentences", b.reflection_sentences},
                        {"actual_nodes", b.actual_nodes},
                        {"premise_nodes", b.premise_nodes},
                        {"derived_nodes", b.derived_nodes},
                        {"hallucination_nodes", b.hallucination_nodes},
                        {"undecided_nodes", b.undecided_nodes},
                        {"correct_nodes", b.correct_nodes},
                        {"unique_actual", b.unique_actual},
                        {"unique_correct", b.unique_correct},
                        {"planning_nodes", b.planning_nodes},
                        {"unique_planning", b.unique_planning},
                        {"valid_planning", b.valid_planning},
                        {"reflections_with_new_node", b.reflections_with_new_node},
                        {"reflections_with_deeper_node", b.reflections_with_deeper_node},
                        {"reflections_with_new_hallucination", b.reflections_with_new_hallucination}};
}

BaseMetrics base_from_json(const ordered_json& j) {
    BaseMetrics b;
    b.sentences = j.at("sentences").get<int>();
    b.tokens = j.at("tokens").get<int>();
    b.reflection_sentences = j.at("reflection_sentences").get<int>();
    b.actual_nodes = j.at("actual_nodes").get<int>();
    b.premise_nodes = j.at("premise_nodes").get<int>();
    b.derived_nodes = j.at("derived_nodes").get<int>();
    b.hallucination_nodes = j.at("hallucination_nodes").get<int>();
    b.undecided_nodes = j.at("undecided_nodes").get<int>();
    b.correct_nodes = j.at("correct_nodes").get<int>();
    b.unique_actual = j.at("unique_actual").get<int>();
    b.unique_correct = j.at("unique_correct").get<int>();
    b.planning_nodes = j.at("planning_nodes").get<int>();
    b.unique_planning = j.at("unique_planning").get<int>();
    b.valid_planning = j.at("valid_planning").get<int>();
    b.reflections_with_new_node = j.at("reflections_with_new_node").get<int>();
    b.reflections_with_deeper_node = j.at("reflections_with_deeper_node").get<int>();
    b.reflections_with_new_hallucination = j.at("reflections_with_new_hallucination").get<int>();
    return b;
}

ordered_json derived_to_json(const DerivedMetrics& d) {
    return ordered_json{{"node_duplication", d.node_duplication},
                        {"exploration_precision", d.exploration_precision},
                        {"reasoning_accuracy", d.reasoning_accuracy},
                        {"premise_coverage", d.premise_coverage},
                        {"depth_coverage", d.depth_coverage},
                        {"max_correct_depth", d.max_correct_depth},
                        {"incorrect_ratio", d.incorrect_ratio},
                        {"interval_depth", d.interval_depth},
                        {"first_correct_step", d.first_correct_step},
                        {"step_efficiency", d.step_efficiency},
                        {"node_efficiency", d.node_efficiency},
                        {"reflection_efficiency", d.reflection_efficiency},
                        {"effective_span", d.effective_span},
                        {"forward_span", d.forward_span},
                        {"reasoning_span", d.reasoning_span},
                        {"sentence_duplication", d.sentence_duplication}};
}

DerivedMetrics derived_from_json(const ordered_json& j) {
    DerivedMetrics d;
    d.node_duplication = j.at("node_duplication").get<double>();
    d.exploration_precision = j.at("exploration_precision").get<double>();
    d.reasoning_accuracy = j.at("reasoning_accuracy").get<double>();
    d.premise_coverage = j.at("premise_coverage").get<double>();
    d.depth_coverage = j.at("depth_coverage").get<double>();
    d.max_correct_depth = j.at("max_correct_depth").get<int>();
    d.incorrect_ratio = j.at("incorrect_ratio").get<double>();
    d.interval_depth = j.at("interval_depth").get<int>();
    d.first_correct_step = j.at("first_correct_step").get<int>();
    d.step_efficiency = j.at("step_efficiency").get<double>();
    d.node_efficiency = j.at("node_efficiency").get<double>();
    d.reflection_efficiency = j.at("reflection_efficiency").get<double>();
    d.effective_span = j.at("effective_span").get<double>();
    d.forward_span = j.at("forward_span").get<double>();
    d.reasoning_span = j.at("reasoning_span").get<double>();
    d.sentence_duplication = j.at("sentence_duplication").get<double>();
    return d;
}

}  // namespace

ordered_json metrics_to_json(const TraceMetrics& m) {
    ordered_json nodes = ordered_json::array();
    for (const auto& an : m.nodes) {
        nodes.push_back(ordered_json{{"sentence", an.node.sentence_index},
                                     {"statement", statement_to_json(an.node.statement)},
                                     {"kind", kind_name(an.node.kind)},
                                     {"category", category_name(an.category)},
                                     {"correct", an.correct},
                                     {"undecided", an.undecided},
                                     {"depth", an.depth},
                                     {"novel", an.novel}});
    }
    ordered_json j{{"instance_id", m.instance_id},
                   {"model_id", m.model_id},
                   {"complexity", m.complexity},
                   {"expected_answer", m.expected_answer},
                   {"answer_correct", m.answer_correct},
                   {"base", base_to_json(m.base)},
                   {"derived", derived_to_json(m.derived)},
                   {"nodes", std::move(nodes)}};
    j["final_answer"] = m.final_answer ? ordered_json(*m.final_answer) : ordered_json(nullptr);
    return j;
}

TraceMetrics metrics_from_json(const ordered_json& j) {
    TraceMetrics m;
    m.instance_id = j.at("instance_id").get<std::string>();
    m.model_id = j.at("model_id").get<std::string>();
    m.complexity = j.at("complexity").get<int>();
    if (!j.at("final_answer").is_null()) m.final_answer = j["final_answer"].get<bool>();
    m.expected_answer = j.at("expected_answer").get<bool>();
    m.answer_correct = j.at("answer_correct").get<bool>();
    m.base = base_from_json(j.at("base"));
    m.derived = derived_from_json(j.at("derived"));
    for (const auto& jn : j.at("nodes")) {
        AnnotatedNode an;
        an.node.sentence_index = jn.at("sentence").get<std::size_t>();
        an.node.statement = statement_from_json(jn.at("statement"));
        an.node.kind = kind_from(jn.at("kind").get<std::string>());
        const std::string cat = jn.at("category").get<std::string>();
        if (cat == "premise") an.category = NodeCategory::premise;
        else if (cat == "derived") an.category = NodeCategory::derived;
        else if (cat == "planning") an.category = NodeCategory::planning;
        else an.category = NodeCategory::hallucination;
        an.correct = jn.at("correct").get<bool>();
        an.undecided = jn.at("undecided").get<bool>();
        an.depth = jn.at("depth").get<int>();
        an.novel = jn.at("novel").get<bool>();
        m.nodes.push_back(std::move(an));
    }
    return m;
}

ordered_json report_to_json(const ScoreReport& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back(ordered_json{{"model_id", r.model_id},
                                    {"dims",
                                     ordered_json{{"logical_depth", r.dims.ld},
                                                  {"cost", r.dims.cost},
                                                  {"exploration", r.dims.exp},
                                                  {"efficiency", r.dims.eff},
                                                  {"coherence", r.dims.coh},
                                                  {"redundancy", r.dims.red}}},
                                    {"cluster", r.cluster},
                                    {"archetype", archetype_name(r.archetype)},
                                    {"confidence", r.confidence},
                                    {"raw_depth", r.raw_depth},
                                    {"raw_tokens", r.raw_tokens},
                                    {"answer_accuracy", r.answer_accuracy}});
    }
    ordered_json centroids = ordered_json::array();
    for (const auto& c : report.centroids) centroids.push_back(ordered_json::array({c[0], c[1]}));
    ordered_json mapping = ordered_json::array();
    for (const auto& a : report.mapping) mapping.push_back(archetype_name(a));
    return ordered_json{{"models", std::move(rows)},
                        {"centroids", std::move(centroids)},
                        {"mapping", std::move(mapping)}};
}

ScoreReport report_from_json(const ordered_json& j) {
    ScoreReport report;
    for (const auto& jr : j.at("models")) {
        ScoreRow r;
        r.model_id = jr.at("model_id").get<std::string>();
        const auto& d = jr.at("dims");
        r.dims.ld = d.at("logical_depth").get<double>();
        r.dims.cost = d.at("cost").get<double>();
        r.dims.exp = d.at("exploration").get<double>();
        r.dims.eff = d.at("efficiency").get<double>();
        r.dims.coh = d.at("coherence").get<double>();
        r.dims.red = d.at("redundancy").get<double>();
        r.cluster = jr.at("cluster").get<int>();
        r.archetype = archetype_from_name(jr.at("archetype").get<std::string>());
        r.confidence = jr.at("confidence").get<double>();
        r.raw_depth = jr.at("raw_depth").get<double>();
        r.raw_tokens = jr.at("raw_tokens").get<double>();
        r.answer_accuracy = jr.at("answer_accuracy").get<double>();
        report.rows.push_back(std::move(r));
    }
    for (const auto& jc : j.at("centroids"))
        report.centroids.push_back({jc[0].get<double>(), jc[1].get<double>()});
    std::size_t i = 0;
    for (const auto& jm : j.at("mapping")) {
        if (i < report.mapping.size())
            report.mapping[i] = archetype_from_name(jm.get<std::string>());
        ++i;
    }
    return report;
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& rows) {
    std::string buffer;
    for (const auto& row : rows) {
        buffer += row.dump();
        buffer += '\n';
    }
    atomic_write(path, buffer);
}

std::vector<ordered_json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingStageInput("missing input file: " + path.string());
    std::vector<ordered_json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto j = ordered_json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("malformed JSON at " + path.string() + ":" + std::to_string(line_no));
        rows.push_back(std::move(j));
    }
    return rows;
}

namespace {

std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

std::string score_report_csv(const ScoreReport& report) {
    std::string out =
        "model_id,archetype,confidence,logical_depth,cost,exploration,efficiency,coherence,"
        "redundancy,raw_depth,raw_tokens,answer_accuracy\n";
    for (const auto& r : report.rows) {
        out += r.model_id + "," + archetype_name(r.archetype) + "," + csv_number(r.confidence) +
               "," + csv_number(r.dims.ld) + "," + csv_number(r.dims.cost) + "," +
               csv_number(r.dims.exp) + "," + csv_number(r.dims.eff) + "," +
               csv_number(r.dims.coh) + "," + csv_number(r.dims.red) + "," +
               csv_number(r.raw_depth) + "," + csv_number(r.raw_tokens) + "," +
               csv_number(r.answer_accuracy) + "\n";
    }
    return out;
}

std::string radar_csv(const ScoreReport& report) {
    std::string out = "model_id,dimension,value\n";
    for (const auto& r : report.rows) {
        const std::pair<const char*, double> spokes[] = {
            {"logical_depth", r.dims.ld}, {"cost", r.dims.cost},      {"exploration", r.dims.exp},
            {"efficiency", r.dims.eff},   {"coherence", r.dims.coh},  {"redundancy", r.dims.red},
        };
        for (const auto& [name, value] : spokes)
            out += r.model_id + "," + name + "," + csv_number(value) + "\n";
    }
    return out;
}

std::string accuracy_table_csv(const std::map<std::string, std::vector<TraceMetrics>>& by_model) {
    std::set<int> levels;
    for (const auto& [_, traces] : by_model)
        for (const auto& t : traces) levels.insert(t.complexity);

    std::string out = "model_id";
    for (int level : levels) out += ",c" + std::to_string(level);
    out += "\n";
    for (const auto& [model, traces] : by_model) {
        out += model;
        for (int level : levels) {
            int total = 0, correct = 0;
            for (const auto& t : traces)
                if (t.complexity == level) {
                    ++total;
                    if (t.answer_correct) ++correct;
                }
            out += ",";
            out += total > 0 ? csv_number(static_cast<double>(correct) / total) : "";
        }
        out += "\n";
    }
    return out;
}

}  // namespace logicbench
