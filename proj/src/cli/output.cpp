#include "pmpd/cli/output.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pmpd::cli {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string short_sci(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", value);
    return buf;
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_history_csv(std::ostream& os, const std::vector<pmp::IterationRecord>& records) {
    os << kHistoryHeader << '\n';
    for (const auto& r : records) {
        os << r.k << ',' << format_number(r.J) << ',' << format_number(std::abs(r.rho)) << ','
           << format_number(r.t_k) << ',' << format_number(r.set_measure) << ',' << r.changed_cells << ','
           << r.inner_trials << '\n';
    }
}

std::vector<pmp::IterationRecord> read_history_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kHistoryHeader) {
        throw std::runtime_error("history csv: missing or unexpected header");
    }
    std::vector<pmp::IterationRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw std::runtime_error("history csv: expected 7 fields in '" + line + "'");
        pmp::IterationRecord r;
        r.k = std::stoul(f[0]);
        r.J = std::stod(f[1]);
        r.rho = -std::stod(f[2]);
        r.t_k = std::stod(f[3]);
        r.set_measure = std::stod(f[4]);
        r.changed_cells = std::stoul(f[5]);
        r.inner_trials = std::stoul(f[6]);
        records.push_back(r);
    }
    return records;
}

void write_control_dump(std::ostream& os, const mesh::Mesh& mesh, const fem::ControlField& u) {
    os << "n=" << mesh.subdivisions() << " cells=" << mesh.num_cells() << '\n';
    for (std::size_t c = 0; c < u.values.size(); ++c) os << c << ',' << format_number(u.values[c]) << '\n';
}

fem::ControlField read_control_dump(std::istream& is, std::size_t& n) {
    std::string line;
    std::size_t cells = 0;
    if (!std::getline(is, line) || std::sscanf(line.c_str(), "n=%zu cells=%zu", &n, &cells) != 2) {
        throw std::runtime_error("control dump: bad header '" + line + "'");
    }
    fem::ControlField u{linalg::Vector(cells, 0.0)};
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 2) throw std::runtime_error("control dump: bad line '" + line + "'");
        const auto c = std::stoul(f[0]);
        if (c >= cells) throw std::runtime_error("control dump: cell index out of range");
        u.values[c] = std::stod(f[1]);
        ++seen;
    }
    if (seen != cells) throw std::runtime_error("control dump: expected " + std::to_string(cells) + " entries");
    return u;
}

void write_nodal_dump(std::ostream& os, const mesh::Mesh& mesh, const fem::NodalField& v) {
    os << "n=" << mesh.subdivisions() << " vertices=" << mesh.num_vertices() << '\n';
    for (std::size_t i = 0; i < v.values.size(); ++i) os << i << ',' << format_number(v.values[i]) << '\n';
}

nlohmann::json summary_json(const RunSummary& summary, const RunConfig& config) {
    nlohmann::json j;
    j["n"] = summary.n;
    j["h"] = summary.h;
    j["cells"] = 2 * summary.n * summary.n;
    if (!summary.error.empty()) {
        j["error"] = summary.error;
        return j;
    }
    j["J"] = summary.J;
    j["rho_l1"] = summary.rho_l1;
    j["iterations"] = summary.iterations;
    j["termination"] = summary.termination;
    j["pmp_violation"] = summary.pmp_violation;
    j["seconds"] = summary.seconds;
    const auto& alg = config.algorithm;
    j["config"] = {
        {"integrand", to_string(config.integrand)},
        {"alpha", config.alpha},
        {"b", config.b},
        {"target", to_string(config.target)},
        {"mass", config.mass == fem::MassKind::lumped ? "lumped" : "consistent"},
        {"target_boundary", config.target_boundary == pmp::TargetBoundary::zero ? "zero" : "interpolate"},
        {"beta", alg.beta},
        {"sigma", alg.sigma},
        {"delta_tol", alg.delta_tol},
        {"max_outer", alg.max_outer},
        {"solver_tol", alg.solver_rel_tol},
        {"mode", std::string(pmp::to_string(alg.mode))},
    };
    return j;
}

void write_sweep_table(std::ostream& os, const std::vector<RunSummary>& rows) {
    os << kSweepHeader << '\n';
    for (const auto& r : rows) {
        os << short_sci(r.h) << ',';
        if (r.error.empty()) {
            os << format_number(r.J) << ',' << format_number(r.rho_l1) << ',' << r.iterations << '\n';
        } else {
            os << "nan,nan,nan\n";
        }
    }
}

void write_sweep_histories(std::ostream& os, const std::vector<RunSummary>& rows) {
    os << 'k';
    std::size_t longest = 0;
    for (const auto& r : rows) {
        os << ",rho_l1_n" << r.n;
        longest = std::max(longest, r.rho_history.size());
    }
    os << '\n';
    for (std::size_t k = 0; k < longest; ++k) {
        os << k;
        for (const auto& r : rows) {
            os << ',';
            if (k < r.rho_history.size()) os << format_number(r.rho_history[k]);
        }
        os << '\n';
    }
}

std::string format_table(const std::vector<RunSummary>& rows) {
    std::string out = "       h        J   ||rho||_L1  It  termination\n";
    char buf[160];
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::snprintf(buf, sizeof buf, "%8.2e   failed: %s\n", r.h, r.error.c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%8.2e  %7.3f  %10.2e  %2zu  %s\n", r.h, r.J, r.rho_l1, r.iterations,
                          r.termination.c_str());
        }
        out += buf;
    }
    return out;
}

}  // namespace pmpd::cli
