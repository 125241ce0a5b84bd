#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logicbench/statement.hpp"

namespace logicbench {

/// Lexicons and knobs for turning free-form reasoning text into statements.
struct ParserConfig {
    std::vector<std::string> reflection_cues = {
        "wait",          "actually",        "hmm",          "on second thought",
        "let me re-check", "let me recheck", "double-check", "double check",
        "let me reconsider", "re-examine",   "mistake",      "let me verify",
        "hold on",       "correction",
    };
    std::vector<std::string> planning_cues = {
        "need to show",  "need to prove",  "need to derive", "the goal is",
        "let us derive", "let's derive",   "i will try",     "the plan",
        "first, i will", "i will start",   "strategy",       "my approach",
        "we want to derive", "i want to derive", "aim to",
    };
    // Tokens never accepted as a statement subject.
    std::set<std::string> stop_subjects = {
        "that",   "this",    "it",       "there",   "which", "what",  "answer",
        "claim",  "question", "statement", "result", "step",  "goal",  "everything",
        "each",   "one",     "something", "conclusion", "point", "key", "idea",
        "problem", "information", "reasoning", "fact", "approach", "plan",
        "strategy", "method", "way", "hypothesis", "assumption", "rule",
    };
    // Tokens never accepted as a predicate.
    std::set<std::string> stop_predicates = {
        "true",  "false",  "correct", "incorrect", "right", "wrong",  "yes",
        "no",    "given",  "not",     "also",      "thus",  "proven", "unknown",
        "valid", "invalid", "possible", "impossible", "needed", "done",
        "to",    "of",     "in",      "on",        "for",   "with",   "from",
        "as",    "by",     "at",      "if",        "then",  "so",     "because",
        "since", "therefore", "hence", "now",      "here",  "what",   "why",
    };
    // Articles skipped between "is" and the first predicate.
    std::set<std::string> articles = {"a", "an", "the"};
    // Counts tokens of the whole trace; whitespace splitting when empty.
    std::function<int(const std::string&)> tokenizer;
};

enum class SentenceKind { normal, reflection };
enum class NodeKind { actual, planning };

struct Sentence {
    int index = 0;
    std::string text;
    SentenceKind kind = SentenceKind::normal;
    bool planning_cue = false;
};

struct ExtractedNode {
    int sentence_index = 0;
    Statement statement;
    NodeKind kind = NodeKind::actual;
};

struct ParsedTrace {
    std::vector<Sentence> sentences;
    std::vector<ExtractedNode> nodes;
    int token_count = 0;
    std::optional<bool> final_answer;
};

/// Splits on sentence punctuation while protecting decimals, abbreviations
/// like "e.g.", and ellipses.  Newlines always end a sentence.
std::vector<std::string> split_sentences(const std::string& text);

/// True when any cue occurs in the sentence on word boundaries
/// (case-insensitive).
bool contains_cue(const std::string& sentence, const std::vector<std::string>& cues);

struct ExtractedNodes {
    std::vector<Statement> statements;
    std::vector<UniversalRule> universals;
};

/// Scans one sentence for "<subject> is <predicates>" fragments and
/// "all/every <form> are <form>" rules.  Rule spans are never double-read
/// as statements.
ExtractedNodes extract_nodes(const std::string& sentence, const ParserConfig& config = {});

/// Verdict inside the last \boxed{...} of the text, when recognizable.
std::optional<bool> extract_boxed_answer(const std::string& text);

/// Whitespace token count.
int count_tokens(const std::string& text);

/// Splits, classifies and extracts in one pass.  Sentences with a planning
/// cue contribute planning nodes; reflection cues win the sentence kind when
/// both co-occur, but planning nodes are still extracted.
ParsedTrace parse_trace(const std::string& text, const ParserConfig& config = {});

/// One sentence as classified by a remote parsing service.
struct RemoteNode {
    std::string text;
    std::string kind;  // "actual" | "planning"
};

struct RemoteSentence {
    std::string kind;  // "normal" | "reflection"
    std::vector<RemoteNode> nodes;
};

struct RemoteParserConfig {
    std::string base_url;             // e.g. "http://127.0.0.1:8086"
    std::string path = "/parse";
    std::string token_env = "LOGICBENCH_PARSER_TOKEN";
    int timeout_seconds = 10;
    int max_in_flight = 4;
};

/// Sends each sentence (with its predecessor as context) to an HTTP parsing
/// service; replies come back in sentence order regardless of completion
/// order.  Network failures raise RemoteParserUnavailable; unusable payloads
/// raise MalformedRemoteReply.
std::vector<RemoteSentence> remote_parse(const std::vector<std::string>& sentences,
                                         const RemoteParserConfig& config);

/// parse_trace against a remote service: node text is re-read through the
/// local grammar so downstream consumers see identical structure.
ParsedTrace parse_trace_remote(const std::string& text, const RemoteParserConfig& config,
                               const ParserConfig& grammar = {});

}  // namespace logicbench
