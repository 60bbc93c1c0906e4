#include "abn/realize.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "abn/error.hpp"
#include "abn/money.hpp"
#include "abn/rng.hpp"
#include "abn/text.hpp"

namespace abn {

namespace {

using A = DialogAct;
constexpr Speaker kAgent = Speaker::Agent;
constexpr Speaker kTraveler = Speaker::Traveler;

// Prices only ever enter through {price} and {delta}, so rendered text never
// carries a number the pathway did not put there.
const std::vector<UtteranceTemplate> kBank = {
    {A::GreetAsk, kAgent, "Hello and welcome! I'd be glad to help you find the right trip. What kind of travel experience do you have in mind?"},
    {A::GreetAsk, kAgent, "Hi there, thanks for stopping by. Tell me a little about the holiday you are hoping for and I will find a package that fits."},
    {A::GreetAsk, kAgent, "Good to meet you! Before I suggest anything, what are you looking for in your next trip?"},
    {A::GreetAsk, kAgent, "Welcome! Which kind of getaway are you dreaming about this time?"},

    {A::ElicitPreference, kTraveler, "I'm hoping for {preference_blurb}."},
    {A::ElicitPreference, kTraveler, "What I really want is {preference_blurb}."},
    {A::ElicitPreference, kTraveler, "Honestly, my ideal trip would be {preference_blurb}."},
    {A::ElicitPreference, kTraveler, "This time I'm looking for {preference_blurb}."},

    {A::Inform, kAgent, "I think our '{package}' package suits you well. It comes to ${price} with {services}, and it includes {amenities}. Shall we go with it?"},
    {A::Inform, kAgent, "Have a look at '{package}'. For ${price} you get {services}, plus {amenities}. How does that sound?"},
    {A::Inform, kAgent, "'{package}' is a great match for you. The price is ${price}, covering {services}. Amenities include {amenities}."},
    {A::Inform, kAgent, "My pick for you is the '{package}' package at ${price}. You would have {services}, along with {amenities}."},

    {A::AskClarificationX, kTraveler, "Could you tell me more about the {amenity}? What does it involve?"},
    {A::AskClarificationX, kTraveler, "I'm curious about the {amenity}. How does that work?"},
    {A::AskClarificationX, kTraveler, "What exactly is included with the {amenity}?"},
    {A::AskClarificationX, kTraveler, "Before we go on, can you explain the {amenity} a bit?"},

    {A::ProvideClarificationX, kAgent, "Of course. The {amenity} is arranged by our local team and fits easily around the rest of your schedule."},
    {A::ProvideClarificationX, kAgent, "Happy to explain. With the {amenity} everything is organised for you, so you just turn up and enjoy it."},
    {A::ProvideClarificationX, kAgent, "The {amenity} is one of our most popular extras, run by experienced staff and suitable for all levels."},
    {A::ProvideClarificationX, kAgent, "Good question. The {amenity} is fully handled on our side, and guests always speak highly of it."},

    {A::AskPrice, kTraveler, "What would the whole package cost me?"},
    {A::AskPrice, kTraveler, "Could you give me the total price?"},
    {A::AskPrice, kTraveler, "How much does all of this come to?"},

    {A::TellPrice, kAgent, "The total for '{package}' comes to ${price}."},
    {A::TellPrice, kAgent, "All together the '{package}' package is ${price}."},
    {A::TellPrice, kAgent, "Right now the price of '{package}' stands at ${price}."},
    {A::TellPrice, kAgent, "'{package}' would be ${price} for everything we discussed."},

    {A::ConcernPrice, kTraveler, "Hmm, that price feels high for me."},
    {A::ConcernPrice, kTraveler, "I'm a bit worried about how much this costs."},
    {A::ConcernPrice, kTraveler, "I like the package, but the cost is making me hesitate."},
    {A::ConcernPrice, kTraveler, "That's more than I was hoping to spend."},
    {A::ConcernPrice, kTraveler, "I'm not sure the price fits my budget."},
    {A::ConcernPrice, kTraveler, "Honestly, the cost is the one thing holding me back."},
    {A::ConcernPrice, kTraveler, "I keep coming back to the price. It's a stretch for me."},

    {A::NegotiatePriceDecrease, kTraveler, "That is beyond my budget. Could we settle at ${price}?"},
    {A::NegotiatePriceDecrease, kTraveler, "Would you be able to come down to ${price}?"},
    {A::NegotiatePriceDecrease, kTraveler, "I could manage ${price}. Can you meet me there?"},
    {A::NegotiatePriceDecrease, kTraveler, "My offer is ${price}. Does that work for you?"},
    {A::NegotiatePriceDecrease, kTraveler, "How about ${price} instead?"},

    {A::NegotiatePriceDecrease, kAgent, "I understand. I can bring the price down to ${price}."},
    {A::NegotiatePriceDecrease, kAgent, "Let me help you there: I can offer it at ${price}."},
    {A::NegotiatePriceDecrease, kAgent, "To make this work, I'll lower it to ${price}."},
    {A::NegotiatePriceDecrease, kAgent, "I hear you. The best I can do now is ${price}."},

    {A::NegotiatePriceIncrease, kAgent, "I appreciate the offer, but that's too low for this package. I can do ${price}."},
    {A::NegotiatePriceIncrease, kAgent, "That would not cover our costs, I'm afraid. Could we meet at ${price}?"},
    {A::NegotiatePriceIncrease, kAgent, "I'd need a little more than that. How about ${price}?"},
    {A::NegotiatePriceIncrease, kAgent, "We are getting closer. I can go to ${price}, which still keeps the quality you expect."},

    {A::NegotiatePriceNochange, kAgent, "I'm sorry, but ${price} is already as low as I can go."},
    {A::NegotiatePriceNochange, kAgent, "I have to hold the price at ${price}."},
    {A::NegotiatePriceNochange, kAgent, "Unfortunately the price stays at ${price}; there is no more room on my side."},
    {A::NegotiatePriceNochange, kAgent, "I can't move below ${price} on this one."},
    {A::NegotiatePriceNochange, kAgent, "${price} is where the price has to stay, I'm afraid."},
    {A::NegotiatePriceNochange, kAgent, "My hands are tied, so the package remains at ${price}."},

    {A::DisagreePrice, kTraveler, "I don't think that price is fair for what's included."},
    {A::DisagreePrice, kTraveler, "Sorry, but I can't agree with that figure."},
    {A::DisagreePrice, kTraveler, "That still seems too steep to me. I disagree with this pricing."},
    {A::DisagreePrice, kTraveler, "No, I really think that's too much."},
    {A::DisagreePrice, kTraveler, "I'm sorry, but I just can't see the value at that price."},
    {A::DisagreePrice, kTraveler, "That doesn't convince me. The price is still too high."},
    {A::DisagreePrice, kTraveler, "I hear you, but I still disagree with what you're asking."},

    {A::JustifyPrice, kAgent, "The price reflects the quality of the services and amenities included, which would cost far more if booked separately."},
    {A::JustifyPrice, kAgent, "I understand, but accommodation, meals and transport are all arranged for you, so it's strong value."},
    {A::JustifyPrice, kAgent, "Everything here is handpicked and fully organised, and that is what the price covers."},
    {A::JustifyPrice, kAgent, "Similar trips elsewhere cost noticeably more for less, so I believe the price is justified."},
    {A::JustifyPrice, kAgent, "You are paying for a trip where every detail is taken care of, and that has real value."},
    {A::JustifyPrice, kAgent, "The services included are top rated, which is why the package is priced the way it is."},
    {A::JustifyPrice, kAgent, "Booking each part on your own would add up quickly, so the package price saves you money."},

    {A::AssurancePrice, kAgent, "I promise you won't regret it; this package is worth every penny."},
    {A::AssurancePrice, kAgent, "Rest assured, you are getting a great deal here."},
    {A::AssurancePrice, kAgent, "You can be confident that this is a fair price for the experience."},
    {A::AssurancePrice, kAgent, "Trust me, our travellers always come back happy with this package."},
    {A::AssurancePrice, kAgent, "I can assure you the price is fair, and you'll see why once you're there."},
    {A::AssurancePrice, kAgent, "Don't worry, you'll get your money's worth on this trip."},

    {A::NegotiateAddX, kAgent, "What if we add the {amenity} to your package? It would be ${delta} extra."},
    {A::NegotiateAddX, kAgent, "I could include the {amenity} for an additional ${delta}. It would really lift the trip."},
    {A::NegotiateAddX, kAgent, "How about adding the {amenity}? That's only ${delta} more."},
    {A::NegotiateAddX, kAgent, "Let me suggest the {amenity} as an extra for ${delta}."},

    {A::NegotiateRemoveX, kAgent, "We could take out the {amenity}, which would save you ${delta}."},
    {A::NegotiateRemoveX, kAgent, "If we remove the {amenity}, the price drops by ${delta}."},
    {A::NegotiateRemoveX, kAgent, "One option is to drop the {amenity} and knock ${delta} off."},
    {A::NegotiateRemoveX, kAgent, "Would you be fine leaving out the {amenity}? That cuts ${delta}."},

    {A::ProvideConsent, kTraveler, "Yes, let's do that."},
    {A::ProvideConsent, kTraveler, "That works for me, go ahead."},
    {A::ProvideConsent, kTraveler, "Sounds good, I agree to that change."},
    {A::ProvideConsent, kTraveler, "Okay, I'm happy with that."},

    {A::ConsentResponse, kAgent, "Done! Your package is updated and the new total is ${price}."},
    {A::ConsentResponse, kAgent, "Great, I've made the change. The total is now ${price}."},
    {A::ConsentResponse, kAgent, "Perfect. With that adjustment the package comes to ${price}."},
    {A::ConsentResponse, kAgent, "All set, the revised price is ${price}."},

    {A::DisagreeX, kTraveler, "I'd rather not change anything about the {amenity}."},
    {A::DisagreeX, kTraveler, "No, that idea about the {amenity} doesn't work for me."},
    {A::DisagreeX, kTraveler, "I don't agree with that change to the {amenity}."},
    {A::DisagreeX, kTraveler, "Hmm, I'm not keen on what you suggest for the {amenity}."},

    {A::JustifyX, kAgent, "I suggested it because the change to the {amenity} gives you better value for this trip."},
    {A::JustifyX, kAgent, "Adjusting the {amenity} makes the whole package fit your plans and budget better."},
    {A::JustifyX, kAgent, "Guests with similar tastes found the {amenity} change made their trip more enjoyable."},

    {A::AssuranceX, kAgent, "I assure you the {amenity} change will not take anything away from your experience."},
    {A::AssuranceX, kAgent, "Don't worry, you'll be happy with the {amenity} arrangement."},
    {A::AssuranceX, kAgent, "You have my word that the {amenity} change is a good one."},

    {A::Accept, kTraveler, "Alright, ${price} works for me. Let's book it."},
    {A::Accept, kTraveler, "Deal! I'm happy with the package."},
    {A::Accept, kTraveler, "Great, I accept. Please go ahead with the booking."},
    {A::Accept, kTraveler, "That's fine by me, let's confirm it at ${price}."},

    {A::AcknowledgeAcceptance, kAgent, "Wonderful! Your booking is confirmed. Have a fantastic trip!"},
    {A::AcknowledgeAcceptance, kAgent, "Thank you for choosing us. Everything is set for your journey."},
    {A::AcknowledgeAcceptance, kAgent, "Excellent, I'll finalise the booking now. Enjoy your travels!"},
    {A::AcknowledgeAcceptance, kAgent, "Great choice! We look forward to making this trip special for you."},
};

struct Fill {
    std::string package;
    std::string services;
    std::string amenities;
    std::string preference_blurb;
    std::string description;
    std::optional<double> price;
    std::optional<double> delta;
    std::optional<std::string> amenity;
};

std::string substitute(std::string_view pattern, const Fill& f) {
    std::string s(pattern);
    s = text::replace_all(std::move(s), "{package}", f.package);
    s = text::replace_all(std::move(s), "{services}", f.services);
    s = text::replace_all(std::move(s), "{amenities}", f.amenities);
    s = text::replace_all(std::move(s), "{preference_blurb}", f.preference_blurb);
    s = text::replace_all(std::move(s), "{description}", f.description);
    if (f.price) s = text::replace_all(std::move(s), "{price}", format_price(*f.price));
    if (f.delta) s = text::replace_all(std::move(s), "{delta}", format_price(std::fabs(*f.delta)));
    if (f.amenity) s = text::replace_all(std::move(s), "{amenity}", *f.amenity);
    if (s.find('{') != std::string::npos)
        throw Error(Errc::MissingTemplate, fmt::format("unfilled slot in \"{}\"", s));
    return s;
}

Fill fill_for(const ActEvent& e, const Scenario& sc, const TravelPackage& pkg) {
    Fill f;
    f.package = pkg.name;
    f.services = describe_services(sc.tier_selection);
    f.amenities = text::join_list(sc.included_amenities);
    f.preference_blurb = std::string(description(sc.traveler.pref));
    f.description = f.preference_blurb;
    f.price = e.slots.price;
    f.delta = e.slots.delta;
    f.amenity = e.slots.amenity;
    return f;
}

}  // namespace

const std::vector<UtteranceTemplate>& template_bank() { return kBank; }

std::vector<std::string_view> templates_for(DialogAct act, Speaker role) {
    std::vector<std::string_view> out;
    for (const auto& t : kBank)
        if (t.act == act && t.role == role) out.push_back(t.text);
    return out;
}

std::string describe_services(const TierSelection& selection) {
    std::vector<std::string> parts;
    for (const auto& [cat, tier] : selection) parts.push_back(fmt::format("{} as {}", tier, category_key(cat)));
    return text::join_list(parts);
}

std::string render_variant(const ActEvent& event, const Scenario& scenario, const TravelPackage& package,
                           std::size_t index) {
    const auto variants = templates_for(event.act, event.speaker);
    if (variants.empty())
        throw Error(Errc::MissingTemplate, fmt::format("{} by {}", act_name(event.act), speaker_name(event.speaker)));
    return substitute(variants[index % variants.size()], fill_for(event, scenario, package));
}

std::string render_template(const ActEvent& event, const Scenario& scenario, const TravelPackage& package,
                            std::uint64_t seed) {
    const auto n = templates_for(event.act, event.speaker).size();
    if (n == 0)
        throw Error(Errc::MissingTemplate, fmt::format("{} by {}", act_name(event.act), speaker_name(event.speaker)));
    Rng rng(seed);
    return render_variant(event, scenario, package, rng.index(n));
}

namespace {

constexpr std::string_view kAgentIntro = "You are a travel agent";
constexpr std::string_view kTravelerIntro = "You are a human traveler";

// Prompt formats reproduced exactly for the three opening acts.
constexpr std::string_view kGreetOverview =
    "You are a travel agent, and you have to greet the traveler and ask for traveler's preference for booking "
    "the desired tour package.";
constexpr std::string_view kGreetDemo =
    "Hello there. Welcome, I am happy to help you choose the travel package according to your preferences. Can "
    "you please tell me what kind of travel experience you are planning for yourself?";
constexpr std::string_view kElicitOverview =
    "You are a human traveler and you are describing the kind of tour package you are planning according to your "
    "personality profile. Your personality description is: Vacations, relaxing in quiet and peaceful places. You "
    "will say:";
constexpr std::string_view kElicitInput =
    "You are a human traveler and you are describing the kind of tour package you are planning according to your "
    "personality profile. Your personality description is {description}. You will say:";
constexpr std::string_view kElicitDemo =
    "I want to enjoy vacations where I can get away from it all in order to relax in quiet and peaceful places.";
constexpr std::string_view kInformOverview =
    "You are a travel agent and you are giving information about a package to the traveler. The name of the "
    "package is `SightTour'. The cost of the package is 53432$, the package has cozy cottage as accommodation "
    "option, fine dining as meal option and private standard as transportation option. The package has the "
    "amenities of virtual reality experiences, detoxification and mindfulness sessions and outdoor activities. "
    "You will provide the above mentioned information by replying:";
constexpr std::string_view kInformInput =
    "You are a travel agent and you are giving information about a package to the traveler. The name of the "
    "package is {package}. The cost of the package is {cost}$, the package has {service}. The package has the "
    "amenities of {amenity}. You will provide the above mentioned information by replying:";
constexpr std::string_view kInformDemo =
    "Great! You will love our `SightTour' package. The package will cost you 53432$ and you will be getting "
    "amazing amenities like virtual reality experiences, detoxification and mindfulness sessions and outdoor "
    "activities. You will get cozy cottage as accommodation, fine dining and private standard transportation. "
    "Would you like to go with this package?";

// Goal clauses for the remaining acts, written in the same register.
std::string_view goal(DialogAct act, Speaker who) {
    switch (act) {
        case A::AskClarificationX: return "ask the travel agent for more details about the {amenity}";
        case A::ProvideClarificationX: return "explain the details of the {amenity} to the traveler";
        case A::AskPrice: return "ask the travel agent for the total price of the package";
        case A::TellPrice: return "tell the traveler that the current price of the package is {price}$";
        case A::ConcernPrice: return "express your concern that the price of the package is too high";
        case A::NegotiatePriceDecrease:
            return who == kTraveler ? "ask for a lower price and propose {price}$"
                                    : "lower the price of the package to {price}$";
        case A::NegotiatePriceIncrease:
            return "say the traveler's offer is too low and counter with a price of {price}$";
        case A::NegotiatePriceNochange: return "keep the price of the package unchanged at {price}$";
        case A::DisagreePrice: return "disagree with the price the travel agent is asking";
        case A::JustifyPrice: return "justify the price of the package by pointing to its value";
        case A::AssurancePrice: return "assure the traveler that the price of the package is fair";
        case A::NegotiateAddX: return "propose adding the {amenity} to the package for an extra {delta}$";
        case A::NegotiateRemoveX: return "propose removing the {amenity} from the package to save {delta}$";
        case A::ProvideConsent: return "agree to the proposed change to the package";
        case A::ConsentResponse: return "confirm the change to the package and state the new total of {price}$";
        case A::DisagreeX: return "reject the proposed change involving the {amenity}";
        case A::JustifyX: return "justify the proposed change involving the {amenity}";
        case A::AssuranceX: return "assure the traveler about the proposed change involving the {amenity}";
        case A::Accept: return "accept the offer of {price}$ and agree to book the package";
        case A::AcknowledgeAcceptance: return "thank the traveler and confirm the booking";
        default: return "continue the conversation";
    }
}

std::string act_format(DialogAct act, Speaker who) {
    return fmt::format("{} negotiating the '{{package}}' tour package, and you have to {}. You will say:",
                       who == kAgent ? kAgentIntro : kTravelerIntro, goal(act, who));
}

// Values used for every demonstration, matching the package in the Inform example.
Fill demo_fill() {
    Fill f;
    f.package = "SightTour";
    f.services = "cozy cottage as accommodation, fine dining as meals and private standard as transportation";
    f.amenities = "virtual reality experiences, detoxification and mindfulness sessions and outdoor activities";
    f.preference_blurb = "a getaway from daily life to relax somewhere quiet and peaceful";
    f.description = f.preference_blurb;
    f.price = 53432.0;
    f.delta = 3404.0;
    f.amenity = "local guides";
    return f;
}

}  // namespace

Prompt build_prompt(const ActEvent& event, const Scenario& sc, const TravelPackage& pkg) {
    const Fill actual = fill_for(event, sc, pkg);
    switch (event.act) {
        case A::GreetAsk:
            return {std::string(kGreetOverview), std::string(kGreetDemo), std::string(kGreetOverview)};
        case A::ElicitPreference:
            return {std::string(kElicitOverview), std::string(kElicitDemo), substitute(kElicitInput, actual)};
        case A::Inform: {
            std::vector<std::string> services;
            for (const auto& [cat, tier] : sc.tier_selection) {
                const std::string_view label = cat == ServiceCategory::Meals ? "meal" : category_key(cat);
                services.push_back(fmt::format("{} as {} option", tier, label));
            }
            std::string input(kInformInput);
            input = text::replace_all(std::move(input), "{package}", pkg.name);
            input = text::replace_all(std::move(input), "{cost}", format_price(event.slots.price.value_or(0.0)));
            input = text::replace_all(std::move(input), "{service}", text::join_list(services));
            input = text::replace_all(std::move(input), "{amenity}", text::join_list(sc.included_amenities));
            return {std::string(kInformOverview), std::string(kInformDemo), std::move(input)};
        }
        default:
            break;
    }
    const std::string format = act_format(event.act, event.speaker);
    Prompt p;
    Fill demo = demo_fill();
    p.task_overview = substitute(format, demo);
    const auto variants = templates_for(event.act, event.speaker);
    p.demonstration = variants.empty() ? std::string("Okay.") : substitute(variants.front(), demo);
    Fill in = actual;
    if (!in.price) in.price = 0.0;
    if (!in.amenity) in.amenity = "";
    if (!in.delta) in.delta = 0.0;
    p.input = substitute(format, in);
    return p;
}

HttpGenerator::HttpGenerator(Endpoint endpoint, double top_p, double temperature)
    : endpoint_(std::move(endpoint)), top_p_(top_p), temperature_(temperature) {}

std::string HttpGenerator::generate(const Prompt& prompt) {
    nlohmann::json body = {
        {"task_overview", prompt.task_overview},
        {"demonstration", prompt.demonstration},
        {"input", prompt.input},
        {"top_p", top_p_},
        {"temperature", temperature_},
    };
    const auto reply = post_json(endpoint_, body);
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
        throw Error(Errc::EndpointUnreachable, endpoint_.url + " reply lacks a \"text\" string");
    return reply["text"].get<std::string>();
}

std::string_view mode_name(RealizeMode m) { return m == RealizeMode::Template ? "template" : "external"; }

std::optional<RealizeMode> parse_mode(std::string_view s) {
    if (s == "template") return RealizeMode::Template;
    if (s == "external") return RealizeMode::External;
    return std::nullopt;
}

Conversation realize_conversation(const Pathway& pathway, const TravelPackage& package, RealizeMode mode,
                                  std::uint64_t seed, TextGenerator* generator) {
    Conversation c;
    c.pathway = pathway;
    if (mode == RealizeMode::External && !generator)
        throw Error(Errc::InvalidArgument, "external realization needs a generator");
    c.provenance = mode == RealizeMode::Template ? "template" : "external:" + generator->id();

    // Per-speaker memory so the template picker steps past a variant that
    // would repeat an earlier line verbatim.
    std::set<std::string> said[2];
    for (const auto& e : pathway.events) {
        Turn t{e.speaker, e.act, {}};
        if (mode == RealizeMode::Template) {
            const auto n = templates_for(e.act, e.speaker).size();
            if (n == 0)
                throw Error(Errc::MissingTemplate, fmt::format("{} by {}", act_name(e.act), speaker_name(e.speaker)));
            Rng rng(derive_seed(seed, 0x7e7, static_cast<std::uint64_t>(e.turn)));
            const std::size_t start = rng.index(n);
            auto& seen = said[static_cast<int>(e.speaker)];
            for (std::size_t k = 0; k < n; ++k) {
                t.text = render_variant(e, pathway.scenario, package, start + k);
                if (!seen.contains(text::normalize_space(t.text))) break;
            }
            seen.insert(text::normalize_space(t.text));
        } else {
            t.text = generator->generate(build_prompt(e, pathway.scenario, package));
            if (text::is_blank(t.text))
                c.defects.push_back(fmt::format("GenerationEmpty@{}", e.turn));
        }
        c.turns.push_back(std::move(t));
    }
    return c;
}

}  // namespace abn
