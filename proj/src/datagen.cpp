#include "logicbench/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <unordered_set>

#include "logicbench/errors.hpp"
#include "logicbench/rng.hpp"

namespace logicbench {

namespace {

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

// Minimum remaining tree height needed to fit q more splits below a node.
// Splits happen on splittable conjunctions; every other shape pays one MP
// step for a fresh conjunction antecedent first (a disjunction additionally
// steps down to an atom first).  Conjunctions built by inverting CE are not
// splittable: any 2-partition would leave one part a short CE chain away
// from an ancestor statement, undercutting the recorded depth.
bool quota_feasible(Connective form, bool splittable, int height, int quota) {
    if (quota <= 0) return true;
    switch (form) {
        case Connective::conj: return (splittable ? 2 * quota - 1 : 2 * quota) <= height;
        case Connective::atom: return 2 * quota <= height;
        case Connective::disj: return 2 * quota + 1 <= height;
    }
    return false;
}

struct Expansion {
    std::vector<Statement> children;
    std::optional<UniversalRule> universal;
};

class GraphBuilder {
public:
    GraphBuilder(int complexity, const GenConfig& cfg, std::mt19937_64& rng)
        : complexity_(complexity), cfg_(cfg), rng_(rng), pool_(cfg.vocab, rng) {}

    bool build(GoldenGraph& out) {
        subject_ = pool_.fresh_subject();
        int quota = cfg_.min_splits_per_path < 0 ? complexity_ / 2 : cfg_.min_splits_per_path;

        Statement root = sample_root(quota);
        out = GoldenGraph{};
        out.complexity = complexity_;
        out.nodes.push_back({root, complexity_, std::nullopt, {}, std::nullopt});
        out.conclusion_index = 0;
        seen_.insert(root.key());

        struct Pending {
            int index;
            int quota;
            bool splittable;  // false for conjunctions that stem from a CE inversion
        };
        std::deque<Pending> frontier;
        frontier.push_back({0, quota, true});
        while (!frontier.empty()) {
            auto [idx, q, splittable] = frontier.front();
            frontier.pop_front();
            const int height = out.nodes[idx].depth;
            if (height == 0) continue;

            auto expansion = expand(out.nodes[idx].statement, height, q, splittable);
            if (!expansion) return false;
            auto& [kind, exp] = *expansion;
            out.nodes[idx].rule = kind;
            if (exp.universal) {
                out.nodes[idx].universal_index = static_cast<int>(out.universals.size());
                out.universals.push_back(*exp.universal);
            }
            const int child_quota = kind == RuleKind::CI ? std::max(q - 1, 0) : q;
            for (auto& child : exp.children) {
                int child_idx = static_cast<int>(out.nodes.size());
                out.nodes.push_back({child, height - 1, std::nullopt, {}, std::nullopt});
                out.nodes[idx].inputs.push_back(child_idx);
                seen_.insert(child.key());
                frontier.push_back({child_idx, child_quota, kind != RuleKind::CE});
            }
        }
        return true;
    }

    VocabPool& pool() { return pool_; }

private:
    Statement sample_root(int quota) {
        std::uniform_int_distribution<int> npred(1, cfg_.root_max_predicates);
        int n = npred(rng_);
        Connective form = Connective::atom;
        if (n >= 2) form = (rng_() & 1) ? Connective::conj : Connective::disj;
        if (!quota_feasible(form, true, complexity_, quota)) form = Connective::conj;
        if (form == Connective::conj && n < 2) n = 2;
        std::vector<std::string> preds;
        for (int i = 0; i < n; ++i) preds.push_back(pool_.fresh_predicate());
        return Statement::make(subject_, form, std::move(preds));
    }

    // One backward step: pick a rule uniformly among the admissible ones whose
    // children keep the split quota satisfiable, then sample its inversion.
    std::optional<std::pair<RuleKind, Expansion>> expand(const Statement& node, int height, int q,
                                                         bool splittable) {
        std::vector<RuleKind> candidates;
        for (RuleKind k : admissible_rules(node)) {
            if (k == RuleKind::CI && !splittable) continue;
            if (k == RuleKind::CE && node.width() + 1 > cfg_.max_conjunction_width) continue;
            if (rule_feasible(k, node, height, q)) candidates.push_back(k);
        }
        while (!candidates.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            std::size_t at = pick(rng_);
            RuleKind kind = candidates[at];
            if (auto exp = try_invert(kind, node, height, q)) return std::make_pair(kind, *exp);
            candidates.erase(candidates.begin() + static_cast<long>(at));
        }
        return std::nullopt;
    }

    // Antecedent widths an MP inversion may use here: a fresh atom, or a
    // fresh conjunction (itself splittable) when the quota still needs one.
    std::vector<int> mp_widths(int h, int q) const {
        std::vector<int> widths;
        if (quota_feasible(Connective::atom, true, h, q)) widths.push_back(1);
        for (int w = 2; w <= std::min(3, cfg_.max_conjunction_width); ++w)
            if (quota_feasible(Connective::conj, true, h, q)) widths.push_back(w);
        return widths;
    }

    bool rule_feasible(RuleKind kind, const Statement& node, int height, int q) const {
        const int h = height - 1;
        switch (kind) {
            case RuleKind::MP: return !mp_widths(h, q).empty();
            case RuleKind::CE: return quota_feasible(Connective::conj, false, h, q);
            case RuleKind::DI: {
                Connective child = node.width() == 2 ? Connective::atom : Connective::disj;
                return quota_feasible(child, true, h, q);
            }
            case RuleKind::CI: return true;  // children of a feasible conjunction are feasible
        }
        return false;
    }

    std::optional<Expansion> try_invert(RuleKind kind, const Statement& node, int height, int q) {
        const int h = height - 1;
        const int child_q = kind == RuleKind::CI ? std::max(q - 1, 0) : q;
        int mp_width = 1;
        if (kind == RuleKind::MP) {
            auto widths = mp_widths(h, q);
            if (widths.empty()) return std::nullopt;
            std::uniform_int_distribution<std::size_t> pick(0, widths.size() - 1);
            mp_width = widths[pick(rng_)];
        }
        for (int attempt = 0; attempt < cfg_.max_invert_attempts; ++attempt) {
            RuleInputs in = invert_rule(kind, node, pool_, rng_, mp_width);
            bool ok = true;
            for (const auto& child : in.statements) {
                if (seen_.count(child.key()) ||
                    !quota_feasible(child.form(), kind != RuleKind::CE, h, child_q)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            Expansion exp;
            exp.children = in.statements;
            exp.universal = in.universal;
            return exp;
        }
        return std::nullopt;
    }

    int complexity_;
    const GenConfig& cfg_;
    std::mt19937_64& rng_;
    VocabPool pool_;
    std::string subject_;
    std::unordered_set<std::string> seen_;
};

std::vector<Statement> sample_distractors(int count, VocabPool& pool, std::mt19937_64& rng) {
    std::vector<Statement> out;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < count; ++i) {
        std::string subject = pool.fresh_subject();
        double r = coin(rng);
        if (r < 0.6) {
            out.push_back(Statement::atom(subject, pool.fresh_predicate()));
        } else {
            std::vector<std::string> preds{pool.fresh_predicate(), pool.fresh_predicate()};
            out.push_back(Statement::make(
                subject, r < 0.8 ? Connective::conj : Connective::disj, std::move(preds)));
        }
    }
    return out;
}

}  // namespace

GoldenGraph generate_graph(int complexity, bool hard, std::uint64_t seed, const GenConfig& config) {
    if (complexity < 1) throw ConfigError("complexity must be >= 1");
    std::uint64_t attempt_seed = seed;
    for (int attempt = 0; attempt < config.max_graph_attempts; ++attempt) {
        std::mt19937_64 rng(attempt_seed);
        GraphBuilder builder(complexity, config, rng);
        GoldenGraph graph;
        if (builder.build(graph)) {
            if (hard) graph.distractors = sample_distractors(complexity, builder.pool(), rng);
            graph.finalize();
            return graph;
        }
        attempt_seed = splitmix64(attempt_seed);
    }
    throw GenerationFailed("graph generation did not converge for complexity " +
                           std::to_string(complexity));
}

std::vector<Statement> make_distractors(const GoldenGraph& graph, int count, std::mt19937_64& rng,
                                        const VocabConfig& vocab) {
    VocabPool pool(vocab, rng);
    for (const auto& n : graph.nodes) {
        pool.mark_used(n.statement.subject());
        for (const auto& p : n.statement.predicates()) pool.mark_used(p);
    }
    for (const auto& u : graph.universals) {
        for (const auto& p : u.antecedent().predicates()) pool.mark_used(p);
        for (const auto& p : u.consequent().predicates()) pool.mark_used(p);
    }
    for (const auto& d : graph.distractors) {
        pool.mark_used(d.subject());
        for (const auto& p : d.predicates()) pool.mark_used(p);
    }
    return sample_distractors(count, pool, rng);
}

std::string statement_sentence(const Statement& s) { return capitalize(s.text()) + "."; }

std::string universal_sentence(const UniversalRule& u) { return capitalize(u.text()) + "."; }

ProblemInstance render_instance(const GoldenGraph& graph, std::string id,
                                std::uint64_t shuffle_seed, std::optional<Statement> target,
                                bool answer) {
    ProblemInstance inst;
    inst.id = std::move(id);
    inst.complexity = graph.complexity;
    inst.golden = graph;
    inst.golden.finalize();
    inst.question_target = target ? *target : graph.conclusion();
    inst.answer = answer;

    for (const auto& n : graph.nodes)
        if (n.depth == 0) inst.premise_text.push_back(statement_sentence(n.statement));
    for (const auto& u : graph.universals) inst.premise_text.push_back(universal_sentence(u));
    for (const auto& d : graph.distractors) inst.premise_text.push_back(statement_sentence(d));
    std::mt19937_64 shuffle_rng(shuffle_seed);
    std::shuffle(inst.premise_text.begin(), inst.premise_text.end(), shuffle_rng);

    inst.question_text = "Is it true that " + inst.question_target.text() + "?";

    std::string info;
    for (const auto& p : inst.premise_text) info += "\n" + p;
    inst.prompt_text =
        "Please answer the question based on the given information:\n"
        "Given Information:" + info + "\n"
        "Note: In this context, 'A is B' has the same meaning as 'a rabbit is a mammal' - "
        "it means A belongs to category B, not that A equals B.\n"
        "Question: " + inst.question_text + "\n"
        "Please reason step by step, show your reasoning process and put your final answer "
        "in \\boxed{ }.";
    return inst;
}

ProblemInstance generate_instance(int complexity, bool hard, std::uint64_t seed, std::string id,
                                  const GenConfig& config) {
    GoldenGraph graph = generate_graph(complexity, hard, seed, config);
    std::optional<Statement> target;
    bool answer = true;
    if (config.negate) {
        std::mt19937_64 neg_rng(mix_seed(seed, {0x6e65676174ull}));
        if (neg_rng() & 1) {
            // corrupt one conclusion predicate so the question is unprovable
            const Statement& c = graph.conclusion();
            VocabPool pool(config.vocab, neg_rng);
            for (const auto& n : graph.nodes) {
                pool.mark_used(n.statement.subject());
                for (const auto& p : n.statement.predicates()) pool.mark_used(p);
            }
            for (const auto& u : graph.universals) {
                for (const auto& p : u.antecedent().predicates()) pool.mark_used(p);
                for (const auto& p : u.consequent().predicates()) pool.mark_used(p);
            }
            for (const auto& d : graph.distractors) {
                pool.mark_used(d.subject());
                for (const auto& p : d.predicates()) pool.mark_used(p);
            }
            // A disjunctive conclusion stays provable as long as it keeps the
            // disjunct its derivation actually lands on (anything else can be
            // tacked on by DI), so corrupt a predicate of the DI chain's
            // bottom statement; for atoms/conjunctions that is the conclusion
            // itself and any predicate works.
            int at = graph.conclusion_index;
            while (graph.nodes[at].rule == RuleKind::DI && !graph.nodes[at].inputs.empty())
                at = graph.nodes[at].inputs[0];
            const auto& live = graph.nodes[at].statement.predicates();
            std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
            const std::string victim = to_lower(live[pick(neg_rng)]);
            std::vector<std::string> preds = c.predicates();
            for (auto& p : preds) {
                if (to_lower(p) == victim) {
                    p = pool.fresh_predicate();
                    break;
                }
            }
            target = Statement::make(c.subject(), c.form(), std::move(preds));
            answer = false;
        }
    }
    return render_instance(graph, std::move(id), mix_seed(seed, {0x73687566ull}),
                           std::move(target), answer);
}

}  // namespace logicbench
