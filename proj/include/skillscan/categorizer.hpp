#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "skillscan/rules.hpp"
#include "skillscan/skill_model.hpp"

namespace skillscan {

enum class Category {
    DevelopmentTools,
    ExternalIntegrations,
    SystemAdmin,
    DataAnalysis,
    SecurityRedTeam,
    Documentation,
    Communication,
    Other,
};

constexpr std::array<Category, 8> kAllFunctionalCategories = {
    Category::DevelopmentTools, Category::ExternalIntegrations, Category::SystemAdmin,
    Category::DataAnalysis,     Category::SecurityRedTeam,      Category::Documentation,
    Category::Communication,    Category::Other,
};

const char* to_string(Category cat);
std::optional<Category> parse_category(std::string_view name);

/// First-match keyword assignment over name + description + instruction
/// body, with fixed precedence (most specific first):
/// SecurityRedTeam > SystemAdmin > ExternalIntegrations > DataAnalysis >
/// Documentation > Communication > DevelopmentTools > Other.
Category categorize(const SkillPackage& pkg, const RuleSet& rules);

}  // namespace skillscan
