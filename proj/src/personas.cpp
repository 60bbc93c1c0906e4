#include "abn/personas.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "abn/error.hpp"
#include "abn/rng.hpp"
#include "abn/text.hpp"

namespace abn {

namespace {

struct ArgInfo {
    ArgProfile value;
    std::string_view abbrev, name, description;
};
struct PrefInfo {
    PreferenceProfile value;
    std::string_view abbrev, name, description;
};
struct BuyInfo {
    BuyingStyle value;
    std::string_view abbrev, name, description;
};

constexpr std::array<ArgInfo, 4> kArgInfo = {{
    {ArgProfile::Agreeable, "Ag", "Agreeable",
     "goes along with offers and arguments easily, looks for common ground and rarely pushes back"},
    {ArgProfile::Disagreeable, "Di", "Disagreeable",
     "is sceptical of offers, questions most proposals and only gives in to a convincing reason"},
    {ArgProfile::OpenMinded, "Om", "Open-minded",
     "weighs each offer and argument on its merits and is happy to look for alternatives"},
    {ArgProfile::Argumentative, "Ar", "Argumentative",
     "challenges counter-offers, defends its position hard and gives ground reluctantly"},
}};

constexpr std::array<PrefInfo, 10> kPrefInfo = {{
    {PreferenceProfile::CultureCreature, "CC", "Culture Creature",
     "a trip built around theatre, museums, monuments, galleries and local festivals"},
    {PreferenceProfile::ActionAgent, "AAg", "Action Agent",
     "lively evenings with clubs, good restaurants and entertainment"},
    {PreferenceProfile::AvidAthlete, "AAt", "Avid Athlete",
     "an active holiday with golf, tennis and other favourite sports"},
    {PreferenceProfile::ThrillSeeker, "TS", "Thrill Seeker",
     "high-adrenaline activities such as skydiving, bungee jumping and extreme sports"},
    {PreferenceProfile::TrailTrekker, "TT", "Trail Trekker",
     "hiking, forest walks, parks, mountains and birdwatching"},
    {PreferenceProfile::Escapist, "E", "Escapist",
     "a getaway from daily life to relax somewhere quiet and peaceful"},
    {PreferenceProfile::ShoppingShark, "SSh", "Shopping Shark",
     "destinations with busy shopping streets and local markets"},
    {PreferenceProfile::Boater, "B", "Boater",
     "time on the water, exploring coasts and lakes by boat"},
    {PreferenceProfile::SightSeeker, "SSe", "Sight Seeker",
     "stopping for every landmark, scenic view and attraction along the way"},
    {PreferenceProfile::BeachLover, "BL", "Beach Lover",
     "sun, soft sand and warm water to lie back and relax"},
}};

constexpr std::array<BuyInfo, 3> kBuyInfo = {{
    {BuyingStyle::QualityConcerned, "QC", "Quality-concerned",
     "wants top-standard services and amenities and will pay for them"},
    {BuyingStyle::BudgetConcerned, "BC", "Budget-concerned",
     "compares prices closely and wants the most value for the money"},
    {BuyingStyle::BudgetAndQualityConcerned, "B&QC", "Budget-&-Quality-concerned",
     "looks for well-reviewed options that balance quality against cost"},
}};

template <typename Table, typename E>
const auto& info(const Table& table, E value) {
    for (const auto& row : table)
        if (row.value == value) return row;
    return table[0];
}

template <typename Table>
auto parse_abbrev(const Table& table, std::string_view s) -> std::optional<decltype(table[0].value)> {
    for (const auto& row : table)
        if (row.abbrev == s) return row.value;
    return std::nullopt;
}

PersonaTable build_defaults() {
    PersonaTable t;
    t.behavior[ArgProfile::Agreeable] = {1.2, 3, 1, 0.8, 0.2};
    t.behavior[ArgProfile::Disagreeable] = {0.8, 4, 3, 0.4, 0.7};
    t.behavior[ArgProfile::OpenMinded] = {1.0, 3, 2, 0.0, 0.0};
    t.behavior[ArgProfile::Argumentative] = {0.8, 4, 3, 0.0, 0.0};
    t.buying_style_shift = {{BuyingStyle::QualityConcerned, 0.10},
                            {BuyingStyle::BudgetConcerned, -0.10},
                            {BuyingStyle::BudgetAndQualityConcerned, 0.0}};
    t.theme_boost = 0.15;
    t.preference_themes = {
        {PreferenceProfile::CultureCreature,
         {"museum", "theater", "theatre", "art", "heritage", "history", "cultural", "festival", "monument", "crafts",
          "performance", "gallery", "opera", "calligraphy", "folk", "dance", "curator", "archaeological"}},
        {PreferenceProfile::ActionAgent,
         {"nightclub", "club", "bar", "party", "entertainment", "dining", "restaurant", "show", "casino", "lounge",
          "nightlife", "dj", "cocktail", "concert", "comedy", "mixology", "jazz"}},
        {PreferenceProfile::AvidAthlete,
         {"golf", "tennis", "sport", "fitness", "gym", "cycling", "athletic", "swimming", "climbing", "badminton",
          "marathon", "triathlon", "ski", "volleyball", "trainer"}},
        {PreferenceProfile::ThrillSeeker,
         {"skydiving", "bungee", "zip", "rafting", "paragliding", "extreme", "adrenaline", "atv", "rappelling",
          "adventure", "cliff", "canyon", "shark", "heli", "jet", "kart"}},
        {PreferenceProfile::TrailTrekker,
         {"hiking", "hike", "trek", "trail", "walk", "park", "forest", "birdwatching", "nature", "mountain", "camping",
          "outdoor", "wildflower", "canopy", "glacier", "volcano", "botanical", "waterfall"}},
        {PreferenceProfile::Escapist,
         {"spa", "wellness", "retreat", "yoga", "meditation", "mindfulness", "massage", "quiet", "relax",
          "detoxification", "aromatherapy", "healing", "sleep", "tea", "silent", "hot"}},
        {PreferenceProfile::ShoppingShark,
         {"shopping", "market", "souvenir", "boutique", "bazaar", "mall", "outlet", "auction", "tailoring",
          "jewellery", "gem", "vouchers", "discount"}},
        {PreferenceProfile::Boater,
         {"boat", "cruise", "sailing", "yacht", "kayaking", "canoe", "fishing", "ferry", "catamaran", "lake",
          "harbour", "regatta", "dockside", "tide"}},
        {PreferenceProfile::SightSeeker,
         {"sightseeing", "guides", "tour", "photography", "landmark", "vistas", "scenic", "itineraries", "stargazing",
          "illumination", "observation", "safari"}},
        {PreferenceProfile::BeachLover,
         {"beach", "snorkeling", "diving", "dive", "sunbathing", "surfing", "island", "coral", "seaside", "paddle",
          "sunscreen", "coconut", "dolphin"}},
    };
    return t;
}

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, "persona table: " + what); }

BehaviorParams parse_params(const nlohmann::json& node, const std::string& path, const BehaviorParams& base) {
    BehaviorParams p = base;
    if (!node.is_object()) config_error(path + " must be an object");
    p.concession_scale = node.value("concession_scale", p.concession_scale);
    p.max_price_rounds = node.value("max_price_rounds", p.max_price_rounds);
    p.argument_turn_budget = node.value("argument_turn_budget", p.argument_turn_budget);
    p.amenity_accept_prob = node.value("amenity_accept_prob", p.amenity_accept_prob);
    p.justification_demand_prob = node.value("justification_demand_prob", p.justification_demand_prob);
    if (!(p.concession_scale > 0)) config_error(path + ".concession_scale must be positive");
    if (p.max_price_rounds < 1) config_error(path + ".max_price_rounds must be >= 1");
    if (p.argument_turn_budget < 0) config_error(path + ".argument_turn_budget must be >= 0");
    auto unit = [&](double v, const char* key) {
        if (!(v >= 0.0 && v <= 1.0)) config_error(path + "." + key + " must lie in [0,1]");
    };
    unit(p.amenity_accept_prob, "amenity_accept_prob");
    unit(p.justification_demand_prob, "justification_demand_prob");
    return p;
}

}  // namespace

std::string_view abbrev(ArgProfile p) { return info(kArgInfo, p).abbrev; }
std::string_view abbrev(PreferenceProfile p) { return info(kPrefInfo, p).abbrev; }
std::string_view abbrev(BuyingStyle b) { return info(kBuyInfo, b).abbrev; }
std::string_view display_name(ArgProfile p) { return info(kArgInfo, p).name; }
std::string_view display_name(PreferenceProfile p) { return info(kPrefInfo, p).name; }
std::string_view display_name(BuyingStyle b) { return info(kBuyInfo, b).name; }
std::string_view description(ArgProfile p) { return info(kArgInfo, p).description; }
std::string_view description(PreferenceProfile p) { return info(kPrefInfo, p).description; }
std::string_view description(BuyingStyle b) { return info(kBuyInfo, b).description; }

std::optional<ArgProfile> parse_arg_profile(std::string_view s) { return parse_abbrev(kArgInfo, s); }
std::optional<PreferenceProfile> parse_preference(std::string_view s) { return parse_abbrev(kPrefInfo, s); }
std::optional<BuyingStyle> parse_buying_style(std::string_view s) { return parse_abbrev(kBuyInfo, s); }

const PersonaTable& PersonaTable::defaults() {
    static const PersonaTable table = build_defaults();
    return table;
}

PersonaTable PersonaTable::parse(std::string_view json_text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) config_error("top level must be an object");

    PersonaTable t = defaults();
    auto read_group = [&](const char* group, std::span<const ArgProfile> allowed) {
        if (!root.contains(group)) return;
        for (const auto& [key, node] : root.at(group).items()) {
            const auto profile = parse_arg_profile(key);
            if (!profile || std::find(allowed.begin(), allowed.end(), *profile) == allowed.end())
                config_error(fmt::format("{}.{} is not a valid profile here", group, key));
            t.behavior[*profile] = parse_params(node, fmt::format("{}.{}", group, key), t.behavior[*profile]);
        }
    };
    read_group("traveler", kTravelerArgProfiles);
    read_group("agent", kAgentArgProfiles);

    if (root.contains("buying_style_shift")) {
        for (const auto& [key, v] : root.at("buying_style_shift").items()) {
            const auto style = parse_buying_style(key);
            if (!style || !v.is_number()) config_error("buying_style_shift." + key + " invalid");
            t.buying_style_shift[*style] = v.get<double>();
        }
    }
    t.theme_boost = root.value("theme_boost", t.theme_boost);
    if (!(t.theme_boost >= 0.0 && t.theme_boost <= 1.0)) config_error("theme_boost must lie in [0,1]");
    if (root.contains("preference_themes")) {
        for (const auto& [key, v] : root.at("preference_themes").items()) {
            const auto pref = parse_preference(key);
            if (!pref || !v.is_array()) config_error("preference_themes." + key + " invalid");
            std::vector<std::string> words;
            for (const auto& w : v) words.push_back(text::to_lower(w.get<std::string>()));
            t.preference_themes[*pref] = std::move(words);
        }
    }
    return t;
}

PersonaTable PersonaTable::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool PersonaTable::matches_theme(PreferenceProfile pref, std::string_view amenity) const {
    auto it = preference_themes.find(pref);
    if (it == preference_themes.end()) return false;
    for (const auto& word : text::words(amenity))
        for (const auto& key : it->second)
            if (word.starts_with(key)) return true;
    return false;
}

TravelerPersona sample_traveler(std::uint64_t seed) {
    Rng rng(seed);
    TravelerPersona t;
    t.arg = kTravelerArgProfiles[rng.index(kTravelerArgProfiles.size())];
    t.pref = kPreferenceProfiles[rng.index(kPreferenceProfiles.size())];
    t.buy = kBuyingStyles[rng.index(kBuyingStyles.size())];
    return t;
}

AgentPersona sample_agent(std::uint64_t seed) {
    Rng rng(seed);
    return {kAgentArgProfiles[rng.index(kAgentArgProfiles.size())]};
}

std::pair<BehaviorParams, BehaviorParams> behavior_params(const TravelerPersona& traveler, const AgentPersona& agent,
                                                          const PersonaTable& table) {
    return {table.behavior.at(traveler.arg), table.behavior.at(agent.arg)};
}

}  // namespace abn
