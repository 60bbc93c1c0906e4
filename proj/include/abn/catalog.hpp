#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace abn {

enum class ServiceCategory { Accommodation, Meals, Transportation };

inline constexpr std::array<ServiceCategory, 3> kServiceCategories = {
    ServiceCategory::Accommodation, ServiceCategory::Meals, ServiceCategory::Transportation};

std::string_view category_key(ServiceCategory category);
std::optional<ServiceCategory> parse_category(std::string_view key);

struct ServiceTier {
    ServiceCategory category{};
    std::string name;
    long price = 0;

    bool operator==(const ServiceTier&) const = default;
};

struct AmenityOption {
    std::string name;
    long price = 0;
    int band = 0;

    bool operator==(const AmenityOption&) const = default;
};

inline constexpr int kBandCount = 4;

struct TravelPackage {
    std::string id;
    std::string name;
    std::string description;
    std::map<ServiceCategory, std::vector<ServiceTier>> services;
    std::vector<std::string> amenity_themes;
    std::array<std::vector<AmenityOption>, kBandCount> bands;

    std::vector<AmenityOption> all_amenities() const;
    const ServiceTier* tier(ServiceCategory category, std::string_view name) const;

    bool operator==(const TravelPackage&) const = default;
};

struct Catalog {
    std::vector<TravelPackage> packages;

    const TravelPackage* find(std::string_view id) const;

    bool operator==(const Catalog&) const = default;
};

using TierSelection = std::map<ServiceCategory, std::string>;

// Throws Error{MissingFile | SchemaViolation | DuplicateId}.
Catalog load_catalog(const std::filesystem::path& path);
Catalog parse_catalog(std::string_view json_text);
std::string serialize_catalog(const Catalog& catalog);

// Soft checks that do not reject a catalog (e.g. band price ordering).
std::vector<std::string> catalog_warnings(const Catalog& catalog);

// Sum of the three selected tier prices. Throws Error{UnknownTier}.
long base_price(const TravelPackage& pkg, const TierSelection& selection);

enum class AmenityMatchKind { Exact, Fallback, NotFound };

struct AmenityMatch {
    AmenityMatchKind kind = AmenityMatchKind::NotFound;
    std::optional<AmenityOption> option;
};

// Case-insensitive exact lookup, then lexical fallback: the option sharing
// the most content tokens with the query. When band_hint is given, options in
// that band win over others; remaining ties go to the lowest band, then to
// list order.
AmenityMatch find_amenity(const TravelPackage& pkg, std::string_view name,
                          std::optional<int> band_hint = std::nullopt);

}  // namespace abn
