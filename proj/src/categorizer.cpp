#include "skillscan/categorizer.hpp"

namespace skillscan {

namespace {

constexpr std::array<Category, 7> kPrecedence = {
    Category::SecurityRedTeam, Category::SystemAdmin,   Category::ExternalIntegrations,
    Category::DataAnalysis,    Category::Documentation, Category::Communication,
    Category::DevelopmentTools,
};

}  // namespace

const char* to_string(Category cat) {
    switch (cat) {
        case Category::DevelopmentTools: return "DevelopmentTools";
        case Category::ExternalIntegrations: return "ExternalIntegrations";
        case Category::SystemAdmin: return "SystemAdmin";
        case Category::DataAnalysis: return "DataAnalysis";
        case Category::SecurityRedTeam: return "SecurityRedTeam";
        case Category::Documentation: return "Documentation";
        case Category::Communication: return "Communication";
        case Category::Other: return "Other";
    }
    return "Other";
}

std::optional<Category> parse_category(std::string_view name) {
    for (Category cat : kAllFunctionalCategories) {
        if (name == to_string(cat)) return cat;
    }
    return std::nullopt;
}

Category categorize(const SkillPackage& pkg, const RuleSet& rules) {
    std::string text = pkg.manifest.name + "\n" + pkg.manifest.description + "\n" +
                       pkg.instruction_body;
    for (Category cat : kPrecedence) {
        const char* name = to_string(cat);
        for (const Rule& rule : rules.category_rules) {
            if (rule.category_name != name) continue;
            if (std::regex_search(text, rule.regex)) return cat;
        }
    }
    return Category::Other;
}

}  // namespace skillscan
