#include "abn/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "abn/error.hpp"
#include "abn/text.hpp"

namespace abn {

using ojson = nlohmann::ordered_json;

std::string_view category_key(ServiceCategory category) {
    switch (category) {
        case ServiceCategory::Accommodation: return "accommodation";
        case ServiceCategory::Meals: return "meals";
        case ServiceCategory::Transportation: return "transportation";
    }
    return "";
}

std::optional<ServiceCategory> parse_category(std::string_view key) {
    for (auto c : kServiceCategories)
        if (category_key(c) == key) return c;
    return std::nullopt;
}

std::vector<AmenityOption> TravelPackage::all_amenities() const {
    std::vector<AmenityOption> out;
    for (const auto& band : bands) out.insert(out.end(), band.begin(), band.end());
    return out;
}

const ServiceTier* TravelPackage::tier(ServiceCategory category, std::string_view name) const {
    auto it = services.find(category);
    if (it == services.end()) return nullptr;
    for (const auto& t : it->second)
        if (t.name == name) return &t;
    return nullptr;
}

const TravelPackage* Catalog::find(std::string_view id) const {
    for (const auto& p : packages)
        if (p.id == id) return &p;
    return nullptr;
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(Errc::SchemaViolation, fmt::format("{}: {}", path, what));
}

const ojson& require(const ojson& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) schema_error(path + "." + key, "missing field");
    return obj.at(key);
}

std::string require_string(const ojson& obj, const char* key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) schema_error(path + "." + key, "expected string");
    auto s = v.get<std::string>();
    if (text::is_blank(s)) schema_error(path + "." + key, "must be non-empty");
    return s;
}

long require_price(const ojson& v, const std::string& path) {
    if (!v.is_number_integer()) schema_error(path, "price must be an integer");
    const auto price = v.get<long>();
    if (price <= 0) schema_error(path, "price must be positive");
    return price;
}

TravelPackage parse_package(const std::string& id, const ojson& node) {
    const std::string path = id;
    if (!node.is_object()) schema_error(path, "expected object");

    TravelPackage pkg;
    pkg.id = id;
    pkg.name = require_string(node, "Travel_Package_Name", path);
    pkg.description = require_string(node, "Description", path);

    const auto& services = require(node, "Services", path);
    if (!services.is_object()) schema_error(path + ".Services", "expected object");
    for (const auto& [key, tiers] : services.items()) {
        const auto category = parse_category(key);
        const std::string tpath = path + ".Services." + key;
        if (!category) schema_error(tpath, "unknown service category");
        if (!tiers.is_object() || tiers.empty()) schema_error(tpath, "expected non-empty tier map");
        auto& list = pkg.services[*category];
        for (const auto& [tier_name, price] : tiers.items()) {
            if (text::is_blank(tier_name)) schema_error(tpath, "tier name must be non-empty");
            list.push_back({*category, tier_name, require_price(price, tpath + "." + tier_name)});
        }
    }
    for (auto c : kServiceCategories)
        if (!pkg.services.contains(c))
            schema_error(path + ".Services." + std::string(category_key(c)), "missing category");

    const auto& themes = require(node, "Optional_amenities", path);
    if (!themes.is_array()) schema_error(path + ".Optional_amenities", "expected array");
    for (const auto& t : themes) {
        if (!t.is_string()) schema_error(path + ".Optional_amenities", "expected strings");
        pkg.amenity_themes.push_back(t.get<std::string>());
    }

    const auto& options = require(node, "options", path);
    if (!options.is_array() || options.size() != kBandCount)
        schema_error(path + ".options", fmt::format("expected {} bands", kBandCount));
    std::set<std::string> seen;
    for (int band = 0; band < kBandCount; ++band) {
        const auto& list = options[static_cast<std::size_t>(band)];
        const std::string bpath = fmt::format("{}.options[{}]", path, band);
        if (!list.is_array() || list.empty()) schema_error(bpath, "expected non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& entry = list[i];
            const std::string epath = fmt::format("{}[{}]", bpath, i);
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string())
                schema_error(epath, "expected [name, price]");
            AmenityOption opt{entry[0].get<std::string>(), require_price(entry[1], epath + "[1]"), band};
            if (text::is_blank(opt.name)) schema_error(epath + "[0]", "name must be non-empty");
            if (!seen.insert(text::to_lower(opt.name)).second)
                schema_error(epath + "[0]", "duplicate amenity name '" + opt.name + "'");
            pkg.bands[static_cast<std::size_t>(band)].push_back(std::move(opt));
        }
    }
    return pkg;
}

}  // namespace

Catalog parse_catalog(std::string_view json_text) {
    ojson root;
    std::set<std::string> ids;
    // ordered_json silently keeps the last of duplicated keys, so package
    // ids are checked while parsing.
    auto on_event = [&ids](int depth, ojson::parse_event_t event, ojson& parsed) {
        if (event == ojson::parse_event_t::key && depth == 1) {
            const auto id = parsed.get<std::string>();
            if (!ids.insert(id).second) throw Error(Errc::DuplicateId, id);
        }
        return true;
    };
    try {
        root = ojson::parse(json_text, on_event);
    } catch (const ojson::parse_error& e) {
        throw Error(Errc::SchemaViolation, std::string("$: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) schema_error("$", "top level must be an object of packages");
    if (root.empty()) schema_error("$", "catalog has no packages");

    Catalog catalog;
    for (const auto& [id, node] : root.items()) {
        catalog.packages.push_back(parse_package(id, node));
    }
    return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string content = buf.str();

    return parse_catalog(content);
}

std::string serialize_catalog(const Catalog& catalog) {
    ojson root = ojson::object();
    for (const auto& pkg : catalog.packages) {
        ojson node = ojson::object();
        node["Travel_Package_Name"] = pkg.name;
        node["Description"] = pkg.description;
        ojson services = ojson::object();
        for (auto c : kServiceCategories) {
            ojson tiers = ojson::object();
            if (auto it = pkg.services.find(c); it != pkg.services.end())
                for (const auto& t : it->second) tiers[t.name] = t.price;
            services[std::string(category_key(c))] = std::move(tiers);
        }
        node["Services"] = std::move(services);
        node["Optional_amenities"] = pkg.amenity_themes;
        ojson options = ojson::array();
        for (const auto& band : pkg.bands) {
            ojson list = ojson::array();
            for (const auto& opt : band) list.push_back(ojson::array({opt.name, opt.price}));
            options.push_back(std::move(list));
        }
        node["options"] = std::move(options);
        root[pkg.id] = std::move(node);
    }
    return root.dump(4);
}

std::vector<std::string> catalog_warnings(const Catalog& catalog) {
    std::vector<std::string> warnings;
    for (const auto& pkg : catalog.packages) {
        for (int b = 0; b + 1 < kBandCount; ++b) {
            auto mean = [&](int band) {
                const auto& list = pkg.bands[static_cast<std::size_t>(band)];
                double sum = 0;
                for (const auto& o : list) sum += static_cast<double>(o.price);
                return list.empty() ? 0.0 : sum / static_cast<double>(list.size());
            };
            if (!(mean(b) < mean(b + 1)))
                warnings.push_back(fmt::format("{}: mean amenity price of band {} ({:.1f}) is not below band {} ({:.1f})",
                                               pkg.id, b, mean(b), b + 1, mean(b + 1)));
        }
    }
    return warnings;
}

long base_price(const TravelPackage& pkg, const TierSelection& selection) {
    long total = 0;
    for (auto c : kServiceCategories) {
        auto it = selection.find(c);
        if (it == selection.end())
            throw Error(Errc::UnknownTier, fmt::format("{}: no tier selected", category_key(c)));
        const auto* t = pkg.tier(c, it->second);
        if (!t) throw Error(Errc::UnknownTier, fmt::format("{}: '{}'", category_key(c), it->second));
        total += t->price;
    }
    return total;
}

namespace {

bool is_stopword(const std::string& w) {
    static const std::set<std::string> stop = {"a", "an", "and", "the", "of", "or", "for", "with", "to", "in", "on"};
    return stop.contains(w);
}

std::set<std::string> content_words(std::string_view s) {
    std::set<std::string> out;
    for (auto& w : text::words(s))
        if (!is_stopword(w)) out.insert(std::move(w));
    return out;
}

}  // namespace

AmenityMatch find_amenity(const TravelPackage& pkg, std::string_view name, std::optional<int> band_hint) {
    const std::string wanted = text::normalize_space(name);
    for (const auto& band : pkg.bands)
        for (const auto& opt : band)
            if (text::normalize_space(opt.name) == wanted) return {AmenityMatchKind::Exact, opt};

    const auto query = content_words(name);
    const AmenityOption* best = nullptr;
    std::size_t best_overlap = 0;
    bool best_in_band = false;
    for (const auto& band : pkg.bands) {
        for (const auto& opt : band) {
            std::size_t overlap = 0;
            for (const auto& w : content_words(opt.name)) overlap += query.count(w);
            if (overlap == 0) continue;
            const bool in_band = band_hint && opt.band == *band_hint;
            // Bands are scanned in ascending order, so strict comparison keeps
            // the lowest band (then earliest entry) on ties.
            const bool better = !best || (in_band && !best_in_band) ||
                                (in_band == best_in_band && overlap > best_overlap);
            if (better) {
                best = &opt;
                best_overlap = overlap;
                best_in_band = in_band;
            }
        }
    }
    if (!best) return {};
    return {AmenityMatchKind::Fallback, *best};
}

}  // namespace abn
