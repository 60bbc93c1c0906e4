#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace abn {

enum class Errc {
    MissingFile,
    SchemaViolation,
    DuplicateId,
    UnknownTier,
    NegativeGap,
    NonPositivePrice,
    InvalidArgument,
    UnreachableState,
    GraphDeadEnd,
    EmptyCatalog,
    MissingTemplate,
    EndpointUnreachable,
    GenerationEmpty,
    MissingFacet,
    EmptyCorpus,
    MissingAct,
    NoNgrams,
    TooFewDocuments,
    MalformedRecord,
    ConfigError,
};

std::string_view errc_name(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code), detail_(detail) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace abn
