#pragma once

#include <map>
#include <string>
#include <vector>

namespace amrt {

enum class SupportLevel { None, Medium, Full };

const char* support_level_text(SupportLevel l); // "--", "M", "F"

struct RequirementEntry {
    std::string id;       // e.g. "LR-Goals"
    std::string name;     // e.g. "Goals"
    std::string category; // functional-LR | non-functional-LR | FR
};

struct AssessmentCell {
    SupportLevel level = SupportLevel::None;
    std::string rationale;
};

struct AssessmentMatrix {
    std::vector<RequirementEntry> requirements; // 23 entries
    // approach ("stitch" | "story-diagrams" | "self") -> requirementId -> cell
    std::map<std::string, std::map<std::string, AssessmentCell>> cells;
};

// The frozen published comparison (stitch, story-diagrams) plus this
// framework's self-assessment with test references.
AssessmentMatrix build_assessment_matrix();

SupportLevel assessment_lookup(const AssessmentMatrix& m, const std::string& approach,
                               const std::string& requirement_id);

// format: "text" (aligned table) or "csv". Unknown approaches/formats raise.
std::string render_assessment(const AssessmentMatrix& m, const std::string& format,
                              const std::string& approach = "");

} // namespace amrt
