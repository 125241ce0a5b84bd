#include "logicbench/trace_parser.hpp"

#include <atomic>
#include <cctype>
#include <mutex>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "logicbench/errors.hpp"

namespace logicbench {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

struct Token {
    std::string raw;
    std::string lower;
    bool brk = false;  // punctuation (not just spaces) separates it from the previous token
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    bool pending_break = false;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        Token t;
        t.raw = cur;
        t.lower = to_lower(cur);
        t.brk = pending_break && !out.empty();
        out.push_back(std::move(t));
        cur.clear();
        pending_break = false;
    };
    for (char c : s) {
        if (is_word_char(c)) {
            cur.push_back(c);
        } else {
            flush();
            if (c != ' ' && c != '\t') pending_break = true;
        }
    }
    flush();
    return out;
}

bool is_verb(const std::string& w) { return w == "is" || w == "are"; }
bool is_quantifier(const std::string& w) { return w == "all" || w == "every"; }
bool is_connector(const std::string& w) { return w == "and" || w == "or"; }

struct Phrase {
    std::vector<std::string> preds;
    Connective conn = Connective::atom;
    std::size_t end = 0;  // one past the last consumed token
};

Phrase collect_phrase(const std::vector<Token>& toks, std::size_t k, const ParserConfig& cfg) {
    Phrase ph;
    std::string mode;
    const std::size_t n = toks.size();
    while (k < n) {
        const Token& t = toks[k];
        if (t.brk && !ph.preds.empty()) break;
        if (ph.preds.empty()) {
            if (is_verb(t.lower) || is_quantifier(t.lower) || is_connector(t.lower)) break;
            if (!is_alpha(t.raw[0])) break;
            if (cfg.stop_predicates.count(t.lower)) break;
            ph.preds.push_back(t.lower);
            ++k;
        } else {
            if (!is_connector(t.lower)) break;
            if (!mode.empty() && t.lower != mode) break;
            if (k + 1 >= n) break;
            const Token& nxt = toks[k + 1];
            if (nxt.brk || is_verb(nxt.lower) || is_quantifier(nxt.lower) ||
                is_connector(nxt.lower) || !is_alpha(nxt.raw[0]) ||
                cfg.stop_predicates.count(nxt.lower))
                break;
            mode = t.lower;
            ph.preds.push_back(nxt.lower);
            k += 2;
        }
    }
    ph.end = k;
    if (ph.preds.size() > 1) ph.conn = (mode == "or") ? Connective::disj : Connective::conj;
    return ph;
}

}  // namespace

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    const std::size_t n = text.size();
    std::string cur;
    auto flush = [&] {
        std::size_t b = cur.find_first_not_of(" \t\r");
        if (b == std::string::npos) {
            cur.clear();
            return;
        }
        std::size_t e = cur.find_last_not_of(" \t\r");
        out.push_back(cur.substr(b, e - b + 1));
        cur.clear();
    };
    for (std::size_t i = 0; i < n; ++i) {
        char c = text[i];
        if (c == '\n') {
            flush();
            continue;
        }
        cur.push_back(c);
        if (c == '?' || c == '!') {
            flush();
            continue;
        }
        if (c != '.') continue;
        bool prev_dot = i > 0 && text[i - 1] == '.';
        bool next_dot = i + 1 < n && text[i + 1] == '.';
        if (prev_dot || next_dot) continue;  // ellipsis
        bool decimal = i > 0 && i + 1 < n && is_digit(text[i - 1]) && is_digit(text[i + 1]);
        if (decimal) continue;
        bool tight_abbrev = i + 1 < n && is_alpha(text[i + 1]);  // "e.g", "i.e", "U.S"
        if (tight_abbrev) continue;
        bool dotted_before = i >= 2 && text[i - 2] == '.';  // final dot of "e.g."
        if (dotted_before) continue;
        flush();
    }
    flush();
    return out;
}

bool contains_cue(const std::string& sentence, const std::vector<std::string>& cues) {
    const std::string low = to_lower(sentence);
    for (const auto& cue : cues) {
        std::size_t pos = 0;
        while ((pos = low.find(cue, pos)) != std::string::npos) {
            bool left_ok = pos == 0 || !is_word_char(low[pos - 1]);
            std::size_t after = pos + cue.size();
            bool right_ok = after >= low.size() || !is_word_char(low[after]);
            if (left_ok && right_ok) return true;
            pos += 1;
        }
    }
    return false;
}

ExtractedNodes extract_nodes(const std::string& sentence, const ParserConfig& config) {
    ExtractedNodes out;
    const auto toks = tokenize(sentence);
    const std::size_t n = toks.size();
    std::vector<bool> consumed(n, false);

    for (std::size_t i = 0; i < n; ++i) {
        if (consumed[i] || !is_quantifier(toks[i].lower)) continue;
        Phrase ante = collect_phrase(toks, i + 1, config);
        if (ante.preds.empty()) continue;
        std::size_t j = ante.end;
        if (j >= n || !is_verb(toks[j].lower) || toks[j].brk) continue;
        std::size_t k = j + 1;
        while (k < n && config.articles.count(toks[k].lower)) ++k;
        Phrase cons = collect_phrase(toks, k, config);
        if (cons.preds.empty()) continue;
        try {
            out.universals.emplace_back(StatementForm::make(ante.conn, ante.preds),
                                        StatementForm::make(cons.conn, cons.preds));
        } catch (const ShapeMismatch&) {
            continue;
        }
        for (std::size_t t = i; t < cons.end; ++t) consumed[t] = true;
    }

    for (std::size_t j = 1; j < n; ++j) {
        if (consumed[j] || toks[j].lower != "is" || toks[j].brk) continue;
        const Token& subj = toks[j - 1];
        if (consumed[j - 1] || !is_alpha(subj.raw[0])) continue;
        if (config.stop_subjects.count(subj.lower) || config.articles.count(subj.lower) ||
            is_connector(subj.lower) || is_quantifier(subj.lower) || is_verb(subj.lower))
            continue;
        std::size_t k = j + 1;
        while (k < n && config.articles.count(toks[k].lower)) ++k;
        Phrase ph = collect_phrase(toks, k, config);
        if (ph.preds.empty()) continue;
        try {
            out.statements.push_back(Statement::make(subj.raw, ph.conn, ph.preds));
        } catch (const ShapeMismatch&) {
            continue;
        }
        for (std::size_t t = j - 1; t < ph.end; ++t) consumed[t] = true;
    }
    return out;
}

std::optional<bool> extract_boxed_answer(const std::string& text) {
    const std::string marker = "\\boxed{";
    std::size_t pos = text.rfind(marker);
    if (pos == std::string::npos) return std::nullopt;
    std::size_t open = pos + marker.size();
    std::size_t close = text.find('}', open);
    if (close == std::string::npos) return std::nullopt;
    for (const auto& tok : tokenize(text.substr(open, close - open))) {
        if (tok.lower == "true" || tok.lower == "yes") return true;
        if (tok.lower == "false" || tok.lower == "no") return false;
    }
    return std::nullopt;
}

int count_tokens(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    int count = 0;
    while (in >> tok) ++count;
    return count;
}

ParsedTrace parse_trace(const std::string& text, const ParserConfig& config) {
    ParsedTrace trace;
    trace.token_count = config.tokenizer ? config.tokenizer(text) : count_tokens(text);
    trace.final_answer = extract_boxed_answer(text);
    for (auto& s : split_sentences(text)) {
        Sentence sent;
        sent.index = static_cast<int>(trace.sentences.size());
        sent.kind = contains_cue(s, config.reflection_cues) ? SentenceKind::reflection
                                                            : SentenceKind::normal;
        sent.planning_cue = contains_cue(s, config.planning_cues);
        auto nodes = extract_nodes(s, config);
        for (auto& st : nodes.statements) {
            ExtractedNode node;
            node.sentence_index = sent.index;
            node.statement = std::move(st);
            node.kind = sent.planning_cue ? NodeKind::planning : NodeKind::actual;
            trace.nodes.push_back(std::move(node));
        }
        sent.text = std::move(s);
        trace.sentences.push_back(std::move(sent));
    }
    return trace;
}

namespace {

RemoteSentence decode_remote_reply(const std::string& body) {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw MalformedRemoteReply("parser reply missing string field 'kind'");
    RemoteSentence rs;
    rs.kind = j["kind"].get<std::string>();
    if (j.contains("nodes")) {
        if (!j["nodes"].is_array())
            throw MalformedRemoteReply("parser reply field 'nodes' must be an array");
        for (const auto& jn : j["nodes"]) {
            if (!jn.is_object() || !jn.contains("text") || !jn.contains("kind"))
                throw MalformedRemoteReply("parser reply node missing 'text' or 'kind'");
            rs.nodes.push_back({jn["text"].get<std::string>(), jn["kind"].get<std::string>()});
        }
    }
    return rs;
}

}  // namespace

std::vector<RemoteSentence> remote_parse(const std::vector<std::string>& sentences,
                                         const RemoteParserConfig& config) {
    std::vector<RemoteSentence> results(sentences.size());
    if (sentences.empty()) return results;

    std::string auth;
    if (const char* tok = std::getenv(config.token_env.c_str()); tok && *tok)
        auth = std::string("Bearer ") + tok;

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        httplib::Client client(config.base_url);
        client.set_connection_timeout(config.timeout_seconds);
        client.set_read_timeout(config.timeout_seconds);
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= sentences.size() || failed.load()) return;
            try {
                nlohmann::json req{{"sentence", sentences[i]},
                                   {"context", i > 0 ? sentences[i - 1] : std::string{}}};
                httplib::Headers headers;
                if (!auth.empty()) headers.emplace("Authorization", auth);
                auto res = client.Post(config.path, headers, req.dump(), "application/json");
                if (!res)
                    throw RemoteParserUnavailable("parser endpoint unreachable: " +
                                                  httplib::to_string(res.error()));
                if (res->status != 200)
                    throw RemoteParserUnavailable("parser endpoint returned status " +
                                                  std::to_string(res->status));
                results[i] = decode_remote_reply(res->body);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(std::max(config.max_in_flight, 1), sentences.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return results;
}

ParsedTrace parse_trace_remote(const std::string& text, const RemoteParserConfig& config,
                               const ParserConfig& grammar) {
    ParsedTrace trace;
    trace.token_count = grammar.tokenizer ? grammar.tokenizer(text) : count_tokens(text);
    trace.final_answer = extract_boxed_answer(text);
    auto raw = split_sentences(text);
    auto replies = remote_parse(raw, config);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& reply = replies[i];
        if (reply.kind != "normal" && reply.kind != "reflection")
            throw MalformedRemoteReply("unknown sentence kind '" + reply.kind + "'");
        Sentence sent;
        sent.index = static_cast<int>(i);
        sent.kind =
            reply.kind == "reflection" ? SentenceKind::reflection : SentenceKind::normal;
        for (const auto& rn : reply.nodes) {
            if (rn.kind != "actual" && rn.kind != "planning")
                throw MalformedRemoteReply("unknown node kind '" + rn.kind + "'");
            if (rn.kind == "planning") sent.planning_cue = true;
            for (auto& st : extract_nodes(rn.text, grammar).statements) {
                ExtractedNode node;
                node.sentence_index = sent.index;
                node.statement = std::move(st);
                node.kind = rn.kind == "planning" ? NodeKind::planning : NodeKind::actual;
                trace.nodes.push_back(std::move(node));
            }
        }
        sent.text = raw[i];
        trace.sentences.push_back(std::move(sent));
    }
    return trace;
}

}  // namespace logicbench
