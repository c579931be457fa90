#include "cganopt/moo/archive_io.hpp"

#include <stdexcept>

#include "cganopt/csv.hpp"

namespace cganopt::moo {

std::vector<std::string> archive_header() {
    std::vector<std::string> h(district::kFieldNames.begin(), district::kFieldNames.end());
    for (const char* c : {"lcc", "ghg", "walkscore", "feasible", "generation"}) h.emplace_back(c);
    return h;
}

void write_archive(const std::filesystem::path& path, const SolutionArchive& archive) {
    csv::Writer w(path, archive_header());
    for (const auto& e : archive.entries()) {
        for (int v : e.solution.decision.to_array()) w.cell(v);
        const auto& o = e.solution.objectives;
        if (o) w.cell(o->lcc).cell(o->ghg).cell(o->walkscore);
        else w.cell("").cell("").cell("");
        w.cell(o ? 1 : 0).cell(e.generation);
        w.end_row();
    }
}

SolutionArchive read_archive(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto header = archive_header();
    if (table.header != header) throw std::runtime_error("archive: unexpected header in " + path.string());

    SolutionArchive archive;
    for (const auto& row : table.rows) {
        district::FieldArray f{};
        for (std::size_t i = 0; i < district::kFieldCount; ++i) f[i] = csv::parse_int(row[i]);
        Solution s;
        s.decision = DecisionVector::from_array(f);
        const bool feasible = csv::parse_int(row[13]) != 0;
        if (feasible)
            s.objectives = ObjectiveTriple{csv::parse_double(row[10]), csv::parse_double(row[11]),
                                           csv::parse_double(row[12])};
        const auto verdict = district::validate(s.decision);
        s.violation_count = feasible ? 0 : std::max<int>(1, static_cast<int>(verdict.violations.size()));
        archive.append(s, csv::parse_int(row[14]));
    }
    return archive;
}

}  // namespace cganopt::moo
