#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace abn::text {

std::string to_lower(std::string_view s);

// Lowercase, detach ASCII punctuation into standalone tokens, split on
// whitespace. "Hello, world!" -> {"hello", ",", "world", "!"}
std::vector<std::string> tokenize(std::string_view s);

// Lowercase alphanumeric words only; used for lexical matching.
std::vector<std::string> words(std::string_view s);

// Lowercase and collapse runs of whitespace to one space, trimmed.
std::string normalize_space(std::string_view s);

bool is_blank(std::string_view s);

// Replace every "{key}" occurrence.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// "a", "a and b", "a, b and c"
std::string join_list(const std::vector<std::string>& parts);

}  // namespace abn::text
