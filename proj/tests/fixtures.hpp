#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "abn/catalog.hpp"
#include "abn/filterkit.hpp"

namespace fixture {

std::filesystem::path data_dir();
const abn::Catalog& catalog();
const abn::TransitionGraph& graph();

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

// A clean 17-turn agreed negotiation over a beach package: discovery,
// two price rounds, an argument, an added amenity, then acceptance.
abn::Conversation reference_conversation();

struct Defective {
    abn::RuleViolation expected;
    abn::Conversation conversation;
};

// One conversation per rule category, each broken in exactly one way.
std::vector<Defective> defective_conversations();

// 100 reports, ids conv-00000..conv-00099. Failures are staged so that
// 12 drop at GCQE, 8 at PCE, 9 at NEE, 4 at AEE and 7 at TE; several of the
// early failures also fail later stages, which must not be double counted.
std::vector<abn::ExpertReport> staged_reports();
inline constexpr std::array<int, 5> kStagedSurvivors = {88, 80, 71, 67, 60};
std::set<std::string> staged_retained_ids();

void write_reports(const std::filesystem::path& path, const std::vector<abn::ExpertReport>& reports);

}  // namespace fixture
