#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "abn/realize.hpp"

namespace abn {

struct FilterStatus {
    bool retained = false;
    std::vector<std::string> reasons;   // e.g. "EmptyUtterance@3", "judge:TE"
    std::optional<std::string> report;  // id of the expert report, when judged
};

struct CorpusRecord {
    Conversation conversation;
    FilterStatus filter;
};

// Keys come out sorted and prices as two-decimal strings so that a record
// serializes to the same bytes on every run.
nlohmann::json record_to_json(const CorpusRecord& r);
CorpusRecord record_from_json(const nlohmann::json& j);  // throws Error{MalformedRecord}

std::string record_line(const CorpusRecord& r);

struct ParsedLine {
    int line = 0;
    std::optional<CorpusRecord> record;
    std::string error;  // set when record is empty
};

// Reads a JSONL corpus; malformed lines come back with their error instead
// of aborting the read. Throws Error{MissingFile}.
std::vector<ParsedLine> read_corpus(const std::filesystem::path& path);

void write_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records);

}  // namespace abn
