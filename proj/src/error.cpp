#include "abn/error.hpp"

namespace abn {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::MissingFile: return "MissingFile";
        case Errc::SchemaViolation: return "SchemaViolation";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::UnknownTier: return "UnknownTier";
        case Errc::NegativeGap: return "NegativeGap";
        case Errc::NonPositivePrice: return "NonPositivePrice";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::UnreachableState: return "UnreachableState";
        case Errc::GraphDeadEnd: return "GraphDeadEnd";
        case Errc::EmptyCatalog: return "EmptyCatalog";
        case Errc::MissingTemplate: return "MissingTemplate";
        case Errc::EndpointUnreachable: return "EndpointUnreachable";
        case Errc::GenerationEmpty: return "GenerationEmpty";
        case Errc::MissingFacet: return "MissingFacet";
        case Errc::EmptyCorpus: return "EmptyCorpus";
        case Errc::MissingAct: return "MissingAct";
        case Errc::NoNgrams: return "NoNgrams";
        case Errc::TooFewDocuments: return "TooFewDocuments";
        case Errc::MalformedRecord: return "MalformedRecord";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace abn
