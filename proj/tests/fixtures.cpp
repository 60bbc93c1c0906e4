#include "fixtures.hpp"

#include <fstream>
#include <random>

#include <fmt/format.h>

#include "abn/pipeline.hpp"

namespace fixture {

namespace fs = std::filesystem;
using abn::DialogAct;
using abn::Speaker;

fs::path data_dir() { return ABN_DATA_DIR; }

const abn::Catalog& catalog() {
    static const abn::Catalog c = abn::load_catalog(data_dir() / "catalog.json");
    return c;
}

const abn::TransitionGraph& graph() {
    static const abn::TransitionGraph g = abn::TransitionGraph::load(data_dir() / "transitions.txt");
    return g;
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / fmt::format("abn-test-{}-{}", name, std::random_device{}());
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

abn::Conversation reference_conversation() {
    const Speaker A = Speaker::Agent, T = Speaker::Traveler;
    const std::vector<abn::Turn> turns = {
        {A, DialogAct::GreetAsk, "Hello and welcome! What sort of holiday are you dreaming about?"},
        {T, DialogAct::ElicitPreference, "Somewhere warm with long beaches, clear water and time to do nothing at all."},
        {A, DialogAct::Inform, "Then 'Sandy Serenity' is ideal: a cozy cottage, fine dining and private transfers for $54225.00."},
        {T, DialogAct::AskClarificationX, "Does it include any snorkeling trips for beginners?"},
        {A, DialogAct::ProvideClarificationX, "Yes, the diving excursion starts in a calm lagoon with an instructor beside you."},
        {T, DialogAct::NegotiatePriceDecrease, "It sounds lovely, but I was hoping to pay around $40672.00."},
        {A, DialogAct::NegotiatePriceIncrease, "That is too low to cover the trip. The best I can do is $49800.00."},
        {T, DialogAct::NegotiatePriceDecrease, "Could we meet nearer $43193.15?"},
        {A, DialogAct::NegotiatePriceIncrease, "I can come down to $47550.51, but not further on price alone."},
        {T, DialogAct::DisagreePrice, "I still think $47550.51 is more than this is worth to me."},
        {A, DialogAct::JustifyPrice, "Every night is beachfront and the meals are prepared by a resident chef, which adds up."},
        {T, DialogAct::DisagreePrice, "Even so, the figure is a stretch for my budget."},
        {A, DialogAct::NegotiateAddX, "Let me swap the private beach access for a sunset cruise instead."},
        {T, DialogAct::ProvideConsent, "A sunset cruise would be wonderful, let's do that."},
        {A, DialogAct::ConsentResponse, "Done. With the cruise the total is now $46975.51."},
        {T, DialogAct::Accept, "Great, I'm happy with that. Please book it."},
        {A, DialogAct::AcknowledgeAcceptance, "Fantastic, it's booked. Enjoy the sunshine!"},
    };
    abn::Conversation c;
    c.id = "reference";
    c.turns = turns;
    c.provenance = "template";
    c.pathway.outcome = abn::Outcome::Agreed;
    c.pathway.final_price = 46975.51;
    return c;
}

std::vector<Defective> defective_conversations() {
    using K = abn::RuleViolationKind;
    std::vector<Defective> out;

    auto empty = reference_conversation();
    empty.turns[4].text = "   ";
    out.push_back({{K::EmptyUtterance, 5}, empty});

    auto repeated = reference_conversation();
    repeated.turns[11].text = "i still think   $47550.51 is more than THIS is worth to me.";
    out.push_back({{K::RepetitiveUtterance, 12}, repeated});

    auto short_one = reference_conversation();
    short_one.turns = {
        {Speaker::Agent, DialogAct::GreetAsk, "Hi there, where would you like to go?"},
        {Speaker::Traveler, DialogAct::ElicitPreference, "Anywhere with a beach."},
        {Speaker::Agent, DialogAct::Inform, "'Sandy Serenity' fits that perfectly."},
        {Speaker::Traveler, DialogAct::AskPrice, "How much is it?"},
        {Speaker::Agent, DialogAct::TellPrice, "It is $54225.00 in total."},
        {Speaker::Traveler, DialogAct::Accept, "Perfect, I'll take it."},
    };
    out.push_back({{K::InsufficientRounds, std::nullopt}, short_one});

    auto unlabeled = reference_conversation();
    unlabeled.turns[6].act.reset();
    out.push_back({{K::InsufficientActAnnotations, 7}, unlabeled});

    auto cut = reference_conversation();
    cut.turns.resize(15);
    out.push_back({{K::ImproperOpenClose, std::nullopt}, cut});
    return out;
}

namespace {

abn::ExpertReport perfect(const std::string& id) {
    abn::ExpertReport r;
    r.id = id;
    for (auto f : abn::kAllFacets) {
        int rating = 3;
        if (f == abn::Facet::GcqeConsistency) rating = abn::RetentionPoles{}.consistency_pass;
        if (f == abn::Facet::Te) rating = abn::RetentionPoles{}.toxicity_pass;
        r.scores.push_back({f, rating, "fixture"});
    }
    return r;
}

void set(abn::ExpertReport& r, abn::Facet f, int rating) {
    for (auto& s : r.scores)
        if (s.facet == f) s.rating = rating;
}

constexpr std::array<abn::Facet, 7> kGcqe = {
    abn::Facet::GcqeCoherence,     abn::Facet::GcqeConsistency, abn::Facet::GcqeDiversity,
    abn::Facet::GcqeTopicDepth,    abn::Facet::GcqeUnderstanding, abn::Facet::GcqeFlexibility,
    abn::Facet::GcqeLikeability};

}  // namespace

std::vector<abn::ExpertReport> staged_reports() {
    using abn::Facet;
    const abn::RetentionPoles poles;
    std::vector<abn::ExpertReport> out;
    for (int i = 0; i < 100; ++i) {
        auto r = perfect(abn::conversation_id(static_cast<std::size_t>(i)));
        if (i < 12) {
            const auto f = kGcqe[static_cast<std::size_t>(i) % kGcqe.size()];
            if (f == Facet::GcqeConsistency)
                set(r, f, 1 - poles.consistency_pass);
            else
                set(r, f, i % 2 == 0 ? 1 : 2);
            if (i % 4 == 0) set(r, Facet::Te, 1 - poles.toxicity_pass);  // also toxic
        } else if (i < 20) {
            set(r, Facet::Pce, i % 2 == 0 ? 2 : 1);
            if (i % 3 == 0) set(r, Facet::Nee, 1);
        } else if (i < 29) {
            set(r, Facet::Nee, 2);
        } else if (i < 33) {
            set(r, Facet::Aee, 1);
            set(r, Facet::Te, 1 - poles.toxicity_pass);
        } else if (i < 40) {
            set(r, Facet::Te, 1 - poles.toxicity_pass);
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::set<std::string> staged_retained_ids() {
    std::set<std::string> ids;
    for (int i = 40; i < 100; ++i) ids.insert(abn::conversation_id(static_cast<std::size_t>(i)));
    return ids;
}

void write_reports(const fs::path& path, const std::vector<abn::ExpertReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    for (const auto& r : reports) out << abn::report_to_json(r).dump() << '\n';
}

}  // namespace fixture
