#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abn/realize.hpp"

namespace abn {

using TokenDoc = std::vector<std::string>;

struct CorpusStats {
    long conversations = 0;
    long turns = 0;
    double avg_turns = 0.0;
    long min_turns = 0;
    long max_turns = 0;
    long tokens = 0;
    double avg_tokens_per_turn = 0.0;
    double avg_tokens_per_conversation = 0.0;
    long unique_words = 0;    // distinct tokens with at least one letter or digit
    long unique_bigrams = 0;  // distinct within-turn token bigrams
};

// Throws Error{EmptyCorpus}.
CorpusStats corpus_stats(const std::vector<Conversation>& corpus);

struct ActCount {
    long count = 0;
    double proportion = 0.0;
};

// Every act appears in the map, zero counts included. Throws Error{MissingAct}.
std::map<DialogAct, ActCount> act_distribution(const std::vector<Conversation>& corpus);

// One tokenized document per turn.
std::vector<TokenDoc> turn_documents(const std::vector<Conversation>& corpus);

// Unique n-grams / total n-grams, n-grams taken within each document.
// Throws Error{NoNgrams}.
double distinct_n(const std::vector<TokenDoc>& docs, int n);

// Mean BLEU-n of each document against all others as references: clipped
// n-gram precision (max count over the other documents), geometric mean over
// orders 1..n, closest-reference-length brevity penalty. Orders >= 2 with no
// match fall back to 1 / (total + 1); a document too short for order n
// scores 0, as does an empty one. Throws Error{TooFewDocuments}.
double self_bleu(const std::vector<TokenDoc>& docs, int n);

struct DiversityReport {
    double distinct_1 = 0.0;
    double distinct_2 = 0.0;
    double self_bleu_1 = 0.0;
    double self_bleu_2 = 0.0;
};

DiversityReport diversity(const std::vector<Conversation>& corpus);

nlohmann::ordered_json to_json(const CorpusStats& s);
nlohmann::ordered_json to_json(const DiversityReport& d);
nlohmann::ordered_json to_json(const std::map<DialogAct, ActCount>& dist);

std::string format_table(const CorpusStats& s);
std::string format_table(const DiversityReport& d);
std::string format_table(const std::map<DialogAct, ActCount>& dist);

}  // namespace abn
