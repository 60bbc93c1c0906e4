#include "abn/corpus.hpp"

#include <fstream>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/money.hpp"
#include "abn/text.hpp"

namespace abn {

namespace {

using json = nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedRecord, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(fmt::format("missing \"{}\"", key));
    return j.at(key);
}

std::string str(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_string()) malformed(fmt::format("\"{}\" must be a string", key));
    return v.get<std::string>();
}

double num(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number()) malformed(fmt::format("\"{}\" must be a number", key));
    return v.get<double>();
}

double price(const json& v, const char* key) {
    if (!v.is_string()) malformed(fmt::format("\"{}\" must be a price string", key));
    const auto s = v.get<std::string>();
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) malformed(fmt::format("\"{}\" is not a price: {}", key, s));
    return out;
}

double price_field(const json& j, const char* key) { return price(field(j, key), key); }

template <typename T, typename F>
T parse_enum(const json& j, const char* key, F parse) {
    const auto s = str(j, key);
    auto v = parse(s);
    if (!v) malformed(fmt::format("\"{}\" has unknown value {}", key, s));
    return *v;
}

json params_json(const BehaviorParams& p) {
    return {{"concession_scale", p.concession_scale},
            {"max_price_rounds", p.max_price_rounds},
            {"argument_turn_budget", p.argument_turn_budget},
            {"amenity_accept_prob", p.amenity_accept_prob},
            {"justification_demand_prob", p.justification_demand_prob}};
}

BehaviorParams params_from(const json& j) {
    BehaviorParams p;
    p.concession_scale = num(j, "concession_scale");
    p.max_price_rounds = static_cast<int>(num(j, "max_price_rounds"));
    p.argument_turn_budget = static_cast<int>(num(j, "argument_turn_budget"));
    p.amenity_accept_prob = num(j, "amenity_accept_prob");
    p.justification_demand_prob = num(j, "justification_demand_prob");
    return p;
}

std::optional<BudgetClass> parse_budget(std::string_view s) {
    for (auto b : {BudgetClass::Low, BudgetClass::Moderate, BudgetClass::High})
        if (budget_name(b) == s) return b;
    return std::nullopt;
}

}  // namespace

json record_to_json(const CorpusRecord& r) {
    const auto& c = r.conversation;
    const auto& p = c.pathway;
    const auto& sc = p.scenario;

    json tiers = json::object();
    for (const auto& [cat, tier] : sc.tier_selection) tiers[std::string(category_key(cat))] = tier;
    json scenario = {
        {"traveler", {{"arg", abbrev(sc.traveler.arg)}, {"pref", abbrev(sc.traveler.pref)}, {"buy", abbrev(sc.traveler.buy)}}},
        {"agent", {{"arg", abbrev(sc.agent.arg)}}},
        {"package", sc.package},
        {"tiers", tiers},
        {"included_amenities", sc.included_amenities},
        {"agent_init_price", format_price(sc.agent_init_price)},
        {"traveler_init_price", format_price(sc.traveler_init_price)},
        {"phi", sc.phi},
        {"amenity_pref", sc.amenity_pref},
        {"seed", sc.seed},
    };
    json terms = {
        {"budget", budget_name(p.terms.budget)},
        {"c_agent", p.terms.c_agent},
        {"c_traveler", p.terms.c_traveler},
        {"agent_min_price", format_price(p.terms.agent_min_price)},
        {"variant", variant_name(p.terms.variant)},
    };
    json turns = json::array();
    for (std::size_t i = 0; i < c.turns.size(); ++i) {
        const auto& t = c.turns[i];
        json jt = {{"speaker", speaker_name(t.speaker)}, {"text", t.text}};
        jt["act"] = t.act ? json(act_name(*t.act)) : json(nullptr);
        if (i < p.events.size()) {
            const auto& e = p.events[i];
            jt["turn"] = e.turn;
            jt["phase"] = phase_name(e.phase);
            if (e.slots.price) jt["price"] = format_price(*e.slots.price);
            if (e.slots.amenity) jt["amenity"] = *e.slots.amenity;
            if (e.slots.delta) jt["delta"] = format_price(*e.slots.delta);
        }
        turns.push_back(std::move(jt));
    }
    json filter = {{"status", r.filter.retained ? "retained" : "rejected"}, {"reasons", r.filter.reasons}};
    filter["report"] = r.filter.report ? json(*r.filter.report) : json(nullptr);
    return {
        {"id", c.id},
        {"scenario", scenario},
        {"terms", terms},
        {"behavior", {{"traveler", params_json(p.traveler_params)}, {"agent", params_json(p.agent_params)}}},
        {"turns", turns},
        {"outcome", p.outcome == Outcome::Agreed ? "Agreed" : "Expired"},
        {"final_price", format_price(p.final_price)},
        {"provenance", c.provenance},
        {"defects", c.defects},
        {"filter", filter},
    };
}

CorpusRecord record_from_json(const json& j) {
    CorpusRecord r;
    auto& c = r.conversation;
    auto& p = c.pathway;
    auto& sc = p.scenario;
    c.id = str(j, "id");

    const auto& js = field(j, "scenario");
    const auto& jtrav = field(js, "traveler");
    sc.traveler.arg = parse_enum<ArgProfile>(jtrav, "arg", parse_arg_profile);
    sc.traveler.pref = parse_enum<PreferenceProfile>(jtrav, "pref", parse_preference);
    sc.traveler.buy = parse_enum<BuyingStyle>(jtrav, "buy", parse_buying_style);
    sc.agent.arg = parse_enum<ArgProfile>(field(js, "agent"), "arg", parse_arg_profile);
    sc.package = str(js, "package");
    for (const auto& [k, v] : field(js, "tiers").items()) {
        const auto cat = parse_category(k);
        if (!cat || !v.is_string()) malformed("bad tier entry " + k);
        sc.tier_selection[*cat] = v.get<std::string>();
    }
    for (const auto& a : field(js, "included_amenities")) {
        if (!a.is_string()) malformed("included_amenities must hold strings");
        sc.included_amenities.push_back(a.get<std::string>());
    }
    sc.agent_init_price = price_field(js, "agent_init_price");
    sc.traveler_init_price = price_field(js, "traveler_init_price");
    sc.phi = num(js, "phi");
    for (const auto& [k, v] : field(js, "amenity_pref").items()) {
        if (!v.is_number()) malformed("amenity_pref values must be numbers");
        sc.amenity_pref[k] = v.get<double>();
    }
    const auto& seed = field(js, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) malformed("seed must be an integer");
    sc.seed = seed.get<std::uint64_t>();

    const auto& jterms = field(j, "terms");
    p.terms.budget = parse_enum<BudgetClass>(jterms, "budget", parse_budget);
    p.terms.c_agent = num(jterms, "c_agent");
    p.terms.c_traveler = num(jterms, "c_traveler");
    p.terms.agent_min_price = price_field(jterms, "agent_min_price");
    p.terms.variant = parse_enum<TravelerVariant>(jterms, "variant", parse_variant);

    const auto& jb = field(j, "behavior");
    p.traveler_params = params_from(field(jb, "traveler"));
    p.agent_params = params_from(field(jb, "agent"));

    const auto& jturns = field(j, "turns");
    if (!jturns.is_array()) malformed("\"turns\" must be an array");
    for (const auto& jt : jturns) {
        Turn t;
        t.speaker = parse_enum<Speaker>(jt, "speaker", parse_speaker);
        t.text = str(jt, "text");
        const auto& act = field(jt, "act");
        if (!act.is_null()) {
            if (!act.is_string() || !parse_act(act.get<std::string>())) malformed("unknown act");
            t.act = parse_act(act.get<std::string>());
        }
        ActEvent e;
        e.turn = static_cast<int>(num(jt, "turn"));
        e.speaker = t.speaker;
        e.act = t.act.value_or(DialogAct::GreetAsk);
        e.phase = parse_enum<Phase>(jt, "phase", parse_phase);
        if (jt.contains("price")) e.slots.price = price(jt["price"], "price");
        if (jt.contains("amenity")) {
            if (!jt["amenity"].is_string()) malformed("\"amenity\" must be a string");
            e.slots.amenity = jt["amenity"].get<std::string>();
        }
        if (jt.contains("delta")) e.slots.delta = price(jt["delta"], "delta");
        p.events.push_back(std::move(e));
        c.turns.push_back(std::move(t));
    }
    const auto outcome = str(j, "outcome");
    if (outcome != "Agreed" && outcome != "Expired") malformed("outcome must be Agreed or Expired");
    p.outcome = outcome == "Agreed" ? Outcome::Agreed : Outcome::Expired;
    p.final_price = price_field(j, "final_price");
    c.provenance = str(j, "provenance");
    for (const auto& d : field(j, "defects")) c.defects.push_back(d.get<std::string>());

    const auto& jf = field(j, "filter");
    const auto status = str(jf, "status");
    if (status != "retained" && status != "rejected") malformed("filter.status must be retained or rejected");
    r.filter.retained = status == "retained";
    for (const auto& reason : field(jf, "reasons")) r.filter.reasons.push_back(reason.get<std::string>());
    if (const auto& rep = field(jf, "report"); !rep.is_null()) r.filter.report = rep.get<std::string>();
    return r;
}

std::string record_line(const CorpusRecord& r) { return record_to_json(r).dump(); }

std::vector<ParsedLine> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::vector<ParsedLine> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::is_blank(line)) continue;
        ParsedLine pl;
        pl.line = lineno;
        try {
            pl.record = record_from_json(json::parse(line));
        } catch (const json::exception& e) {
            pl.error = e.what();
        } catch (const Error& e) {
            pl.error = e.what();
        }
        out.push_back(std::move(pl));
    }
    return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::MissingFile, "cannot write " + path.string());
    for (const auto& r : records) out << record_line(r) << '\n';
}

}  // namespace abn
