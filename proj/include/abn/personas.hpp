#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abn {

enum class ArgProfile { Agreeable, Disagreeable, OpenMinded, Argumentative };

enum class PreferenceProfile {
    CultureCreature,
    ActionAgent,
    AvidAthlete,
    ThrillSeeker,
    TrailTrekker,
    Escapist,
    ShoppingShark,
    Boater,
    SightSeeker,
    BeachLover,
};

enum class BuyingStyle { QualityConcerned, BudgetConcerned, BudgetAndQualityConcerned };

inline constexpr std::array<ArgProfile, 2> kTravelerArgProfiles = {ArgProfile::Agreeable, ArgProfile::Disagreeable};
inline constexpr std::array<ArgProfile, 2> kAgentArgProfiles = {ArgProfile::OpenMinded, ArgProfile::Argumentative};
inline constexpr std::array<PreferenceProfile, 10> kPreferenceProfiles = {
    PreferenceProfile::CultureCreature, PreferenceProfile::ActionAgent,  PreferenceProfile::AvidAthlete,
    PreferenceProfile::ThrillSeeker,    PreferenceProfile::TrailTrekker, PreferenceProfile::Escapist,
    PreferenceProfile::ShoppingShark,   PreferenceProfile::Boater,       PreferenceProfile::SightSeeker,
    PreferenceProfile::BeachLover};
inline constexpr std::array<BuyingStyle, 3> kBuyingStyles = {
    BuyingStyle::QualityConcerned, BuyingStyle::BudgetConcerned, BuyingStyle::BudgetAndQualityConcerned};

// Serialized abbreviations: Ag, Di, Om, Ar / CC ... BL / QC, BC, B&QC.
std::string_view abbrev(ArgProfile p);
std::string_view abbrev(PreferenceProfile p);
std::string_view abbrev(BuyingStyle b);
std::optional<ArgProfile> parse_arg_profile(std::string_view s);
std::optional<PreferenceProfile> parse_preference(std::string_view s);
std::optional<BuyingStyle> parse_buying_style(std::string_view s);

std::string_view display_name(ArgProfile p);
std::string_view display_name(PreferenceProfile p);
std::string_view display_name(BuyingStyle b);
std::string_view description(ArgProfile p);
std::string_view description(PreferenceProfile p);
std::string_view description(BuyingStyle b);

struct TravelerPersona {
    ArgProfile arg = ArgProfile::Agreeable;
    PreferenceProfile pref = PreferenceProfile::CultureCreature;
    BuyingStyle buy = BuyingStyle::BudgetAndQualityConcerned;

    bool operator==(const TravelerPersona&) const = default;
};

struct AgentPersona {
    ArgProfile arg = ArgProfile::OpenMinded;

    bool operator==(const AgentPersona&) const = default;
};

struct BehaviorParams {
    double concession_scale = 1.0;
    int max_price_rounds = 3;
    int argument_turn_budget = 1;
    double amenity_accept_prob = 0.0;
    double justification_demand_prob = 0.0;

    bool operator==(const BehaviorParams&) const = default;
};

// The persona -> behaviour mapping, plus the scenario-shaping knobs that
// hang off the traveler's profiles. Loadable from JSON so experiments can
// recalibrate without rebuilding.
struct PersonaTable {
    std::map<ArgProfile, BehaviorParams> behavior;
    std::map<BuyingStyle, double> buying_style_shift;
    std::map<PreferenceProfile, std::vector<std::string>> preference_themes;
    double theme_boost = 0.15;

    static const PersonaTable& defaults();
    static PersonaTable load(const std::filesystem::path& path);
    static PersonaTable parse(std::string_view json_text);

    // True when any word of the amenity name starts with one of the
    // profile's theme keywords.
    bool matches_theme(PreferenceProfile pref, std::string_view amenity) const;
};

TravelerPersona sample_traveler(std::uint64_t seed);
AgentPersona sample_agent(std::uint64_t seed);

// (traveler params, agent params)
std::pair<BehaviorParams, BehaviorParams> behavior_params(const TravelerPersona& traveler, const AgentPersona& agent,
                                                          const PersonaTable& table = PersonaTable::defaults());

}  // namespace abn
