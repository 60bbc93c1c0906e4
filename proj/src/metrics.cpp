#include "abn/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/text.hpp"

namespace abn {

namespace {

bool has_alnum(const std::string& s) {
    return std::any_of(s.begin(), s.end(), [](unsigned char ch) { return std::isalnum(ch) != 0; });
}

std::string ngram_key(const TokenDoc& doc, std::size_t at, int n) {
    std::string key = doc[at];
    for (int k = 1; k < n; ++k) {
        key += '\x1f';
        key += doc[at + k];
    }
    return key;
}

}  // namespace

std::vector<TokenDoc> turn_documents(const std::vector<Conversation>& corpus) {
    std::vector<TokenDoc> docs;
    for (const auto& c : corpus)
        for (const auto& t : c.turns) docs.push_back(text::tokenize(t.text));
    return docs;
}

CorpusStats corpus_stats(const std::vector<Conversation>& corpus) {
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "corpus_stats");
    CorpusStats s;
    s.conversations = static_cast<long>(corpus.size());
    s.min_turns = std::numeric_limits<long>::max();
    std::set<std::string> words;
    std::set<std::pair<std::string, std::string>> bigrams;
    for (const auto& c : corpus) {
        const long n = static_cast<long>(c.turns.size());
        s.turns += n;
        s.min_turns = std::min(s.min_turns, n);
        s.max_turns = std::max(s.max_turns, n);
        for (const auto& t : c.turns) {
            const auto toks = text::tokenize(t.text);
            s.tokens += static_cast<long>(toks.size());
            for (std::size_t i = 0; i < toks.size(); ++i) {
                if (has_alnum(toks[i])) words.insert(toks[i]);
                if (i + 1 < toks.size()) bigrams.emplace(toks[i], toks[i + 1]);
            }
        }
    }
    s.avg_turns = static_cast<double>(s.turns) / static_cast<double>(s.conversations);
    s.avg_tokens_per_turn = s.turns ? static_cast<double>(s.tokens) / static_cast<double>(s.turns) : 0.0;
    s.avg_tokens_per_conversation = static_cast<double>(s.tokens) / static_cast<double>(s.conversations);
    s.unique_words = static_cast<long>(words.size());
    s.unique_bigrams = static_cast<long>(bigrams.size());
    return s;
}

std::map<DialogAct, ActCount> act_distribution(const std::vector<Conversation>& corpus) {
    std::map<DialogAct, ActCount> out;
    for (auto a : kAllDialogActs) out[a] = {};
    long total = 0;
    for (const auto& c : corpus) {
        for (std::size_t i = 0; i < c.turns.size(); ++i) {
            const auto& act = c.turns[i].act;
            if (!act) throw Error(Errc::MissingAct, fmt::format("{} turn {}", c.id, i + 1));
            ++out[*act].count;
            ++total;
        }
    }
    for (auto& [_, v] : out) v.proportion = total ? static_cast<double>(v.count) / static_cast<double>(total) : 0.0;
    return out;
}

double distinct_n(const std::vector<TokenDoc>& docs, int n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    std::set<std::string> unique;
    long total = 0;
    for (const auto& d : docs) {
        for (std::size_t i = 0; i + n <= d.size(); ++i) {
            unique.insert(ngram_key(d, i, n));
            ++total;
        }
    }
    if (total == 0) throw Error(Errc::NoNgrams, fmt::format("no {}-grams in corpus", n));
    return static_cast<double>(unique.size()) / static_cast<double>(total);
}

namespace {

struct Top2 {
    int doc1 = -1;
    int count1 = 0;
    int count2 = 0;

    void offer(int doc, int count) {
        if (count > count1) {
            if (doc1 != doc) count2 = count1;
            doc1 = doc;
            count1 = count;
        } else if (doc != doc1 && count > count2) {
            count2 = count;
        }
    }
    int best_excluding(int doc) const { return doc == doc1 ? count2 : count1; }
};

using Counts = std::unordered_map<std::string, int>;

Counts count_ngrams(const TokenDoc& d, int n) {
    Counts c;
    for (std::size_t i = 0; i + n <= d.size(); ++i) ++c[ngram_key(d, i, n)];
    return c;
}

}  // namespace

double self_bleu(const std::vector<TokenDoc>& docs, int n) {
    if (n < 1) throw Error(Errc::InvalidArgument, "n must be positive");
    if (docs.size() < 2) throw Error(Errc::TooFewDocuments, fmt::format("{} document(s)", docs.size()));
    const int D = static_cast<int>(docs.size());

    std::vector<std::vector<Counts>> counts(n);
    std::vector<std::unordered_map<std::string, Top2>> best(n);
    for (int k = 0; k < n; ++k) {
        counts[k].reserve(D);
        for (int i = 0; i < D; ++i) {
            counts[k].push_back(count_ngrams(docs[i], k + 1));
            for (const auto& [g, c] : counts[k][i]) best[k][g].offer(i, c);
        }
    }
    std::map<long, int> lengths;
    for (const auto& d : docs) ++lengths[static_cast<long>(d.size())];

    double sum = 0.0;
    for (int i = 0; i < D; ++i) {
        const long c = static_cast<long>(docs[i].size());
        if (c == 0) continue;  // an empty hypothesis scores 0
        double log_p = 0.0;
        bool zero = false;
        for (int k = 0; k < n; ++k) {
            long total = 0, matched = 0;
            for (const auto& [g, cnt] : counts[k][i]) {
                total += cnt;
                matched += std::min(cnt, best[k].at(g).best_excluding(i));
            }
            double p;
            if (total == 0)
                p = 0.0;  // too short to have any n-gram of this order
            else if (matched > 0)
                p = static_cast<double>(matched) / static_cast<double>(total);
            else if (k == 0)
                p = 0.0;
            else
                p = 1.0 / static_cast<double>(total + 1);
            if (p == 0.0) {
                zero = true;
                break;
            }
            log_p += std::log(p);
        }
        if (zero) continue;

        // Closest other-document length; ties go to the shorter one.
        if (--lengths[c] == 0) lengths.erase(c);
        long r = 0;
        long best_diff = std::numeric_limits<long>::max();
        auto it = lengths.lower_bound(c);
        if (it != lengths.end()) {
            best_diff = it->first - c;
            r = it->first;
        }
        if (it != lengths.begin()) {
            auto lower = std::prev(it);
            if (c - lower->first <= best_diff) r = lower->first;
        }
        ++lengths[c];

        const double bp = c > r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
        sum += bp * std::exp(log_p / n);
    }
    return sum / D;
}

DiversityReport diversity(const std::vector<Conversation>& corpus) {
    const auto docs = turn_documents(corpus);
    return {distinct_n(docs, 1), distinct_n(docs, 2), self_bleu(docs, 1), self_bleu(docs, 2)};
}

nlohmann::ordered_json to_json(const CorpusStats& s) {
    return {
        {"conversations", s.conversations},
        {"turns", s.turns},
        {"avg_turns", s.avg_turns},
        {"min_turns", s.min_turns},
        {"max_turns", s.max_turns},
        {"tokens", s.tokens},
        {"avg_tokens_per_turn", s.avg_tokens_per_turn},
        {"avg_tokens_per_conversation", s.avg_tokens_per_conversation},
        {"unique_words", s.unique_words},
        {"unique_bigrams", s.unique_bigrams},
    };
}

nlohmann::ordered_json to_json(const DiversityReport& d) {
    return {
        {"distinct_1", d.distinct_1},
        {"distinct_2", d.distinct_2},
        {"self_bleu_1", d.self_bleu_1},
        {"self_bleu_2", d.self_bleu_2},
    };
}

nlohmann::ordered_json to_json(const std::map<DialogAct, ActCount>& dist) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (auto a : kAllDialogActs) {
        const auto& v = dist.at(a);
        j[std::string(act_name(a))] = {{"count", v.count}, {"proportion", v.proportion}};
    }
    return j;
}

namespace {

std::string rows(const std::vector<std::pair<std::string, std::string>>& items) {
    std::size_t width = 0;
    for (const auto& [k, _] : items) width = std::max(width, k.size());
    std::string out;
    for (const auto& [k, v] : items) out += fmt::format("{:<{}}  {:>12}\n", k, width, v);
    return out;
}

}  // namespace

std::string format_table(const CorpusStats& s) {
    return rows({
        {"conversations", fmt::format("{}", s.conversations)},
        {"turns", fmt::format("{}", s.turns)},
        {"avg turns", fmt::format("{:.2f}", s.avg_turns)},
        {"min turns", fmt::format("{}", s.min_turns)},
        {"max turns", fmt::format("{}", s.max_turns)},
        {"tokens", fmt::format("{}", s.tokens)},
        {"avg tokens / turn", fmt::format("{:.2f}", s.avg_tokens_per_turn)},
        {"avg tokens / conversation", fmt::format("{:.2f}", s.avg_tokens_per_conversation)},
        {"unique words", fmt::format("{}", s.unique_words)},
        {"unique bigrams", fmt::format("{}", s.unique_bigrams)},
    });
}

std::string format_table(const DiversityReport& d) {
    return rows({
        {"distinct-1", fmt::format("{:.4f}", d.distinct_1)},
        {"distinct-2", fmt::format("{:.4f}", d.distinct_2)},
        {"self-bleu-1", fmt::format("{:.4f}", d.self_bleu_1)},
        {"self-bleu-2", fmt::format("{:.4f}", d.self_bleu_2)},
    });
}

std::string format_table(const std::map<DialogAct, ActCount>& dist) {
    std::vector<std::pair<std::string, std::string>> items;
    for (auto a : kAllDialogActs) {
        const auto& v = dist.at(a);
        items.emplace_back(std::string(act_name(a)), fmt::format("{} ({:.2f}%)", v.count, 100.0 * v.proportion));
    }
    return rows(items);
}

}  // namespace abn
