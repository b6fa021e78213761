#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmpd/cli/config.hpp"
#include "pmpd/pmp.hpp"

namespace pmpd::cli {

inline constexpr const char* kHistoryHeader = "k,J,rho_l1,t_k,set_measure,changed_cells,inner_trials";
inline constexpr const char* kSweepHeader = "h,J,rho_l1,iterations";

// 17 significant digits; parses back to the identical double.
std::string format_number(double value);

void write_history_csv(std::ostream& os, const std::vector<pmp::IterationRecord>& records);

// Inverse of write_history_csv for the logged columns. rho is restored as
// -rho_l1; selected_descent is not logged. Throws std::runtime_error.
std::vector<pmp::IterationRecord> read_history_csv(std::istream& is);

// "n=<n> cells=<2n^2>" then "cell_index,value" lines.
void write_control_dump(std::ostream& os, const mesh::Mesh& mesh, const fem::ControlField& u);
// Returns the control; stores the mesh size in n.
fem::ControlField read_control_dump(std::istream& is, std::size_t& n);

// "n=<n> vertices=<(n+1)^2>" then "vertex_index,value" lines.
void write_nodal_dump(std::ostream& os, const mesh::Mesh& mesh, const fem::NodalField& v);

struct RunSummary {
    std::size_t n = 0;
    double h = 0.0;
    double J = 0.0;
    double rho_l1 = 0.0;
    std::size_t iterations = 0;
    std::string termination;
    double pmp_violation = 0.0;
    double seconds = 0.0;
    // Non-empty when the run failed.
    std::string error;
    std::vector<double> rho_history;
};

nlohmann::json summary_json(const RunSummary& summary, const RunConfig& config);

// One `h,J,rho_l1,iterations` row per mesh, h to three significant digits.
void write_sweep_table(std::ostream& os, const std::vector<RunSummary>& rows);

// Columns k, rho_l1_n<N>...; blank once a run has stopped.
void write_sweep_histories(std::ostream& os, const std::vector<RunSummary>& rows);

// Human-readable table in the h / J / ||rho|| / It layout.
std::string format_table(const std::vector<RunSummary>& rows);

}  // namespace pmpd::cli
