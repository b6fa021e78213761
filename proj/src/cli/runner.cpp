#include "pmpd/cli/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "pmpd/linalg.hpp"

namespace pmpd::cli {
namespace {

namespace fs = std::filesystem;

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    writer(os);
    os.flush();
    if (!os) throw IoError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

RunSummary run_single(const RunConfig& config, std::size_t n, const fs::path& dir) {
    ensure_dir(dir);
    const auto start = std::chrono::steady_clock::now();

    const pmp::ControlProblem problem(mesh::Mesh(n), make_integrand(config), make_target(config),
                                      discretization_options(config));
    const pmp::RunHistory history = pmp::run(problem, config.algorithm);

    RunSummary summary;
    summary.n = n;
    summary.h = problem.mesh().h();
    summary.J = history.final_objective();
    summary.rho_l1 = history.final_residual();
    summary.iterations = history.iterations();
    summary.termination = std::string(pmp::to_string(history.reason));
    summary.pmp_violation = pmp::verify_pmp(problem.mesh(), history.control, history.adjoint, problem.integrand());
    summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : history.records) summary.rho_history.push_back(std::abs(r.rho));

    write_file(dir / "history.csv", [&](std::ostream& os) { write_history_csv(os, history.records); });
    write_file(dir / "summary.json",
               [&](std::ostream& os) { os << summary_json(summary, config).dump(2) << '\n'; });
    if (config.dump_control) {
        write_file(dir / "control.txt",
                   [&](std::ostream& os) { write_control_dump(os, problem.mesh(), history.control); });
    }
    if (config.dump_fields) {
        write_file(dir / "state.txt", [&](std::ostream& os) { write_nodal_dump(os, problem.mesh(), history.state); });
        write_file(dir / "adjoint.txt",
                   [&](std::ostream& os) { write_nodal_dump(os, problem.mesh(), history.adjoint); });
    }
    return summary;
}

std::vector<RunSummary> run_sweep(const RunConfig& config, const fs::path& dir, std::ostream& log) {
    ensure_dir(dir);
    std::vector<RunSummary> rows;
    for (const auto n : config.sweep) {
        try {
            rows.push_back(run_single(config, n, dir / ("n" + std::to_string(n))));
            const auto& r = rows.back();
            log << "n=" << n << " J=" << format_number(r.J) << " rho_l1=" << format_number(r.rho_l1)
                << " iterations=" << r.iterations << " (" << r.termination << ")\n";
        } catch (const IoError&) {
            throw;
        } catch (const std::exception& e) {
            RunSummary failed;
            failed.n = n;
            failed.h = mesh::Mesh(1).h() / static_cast<double>(n);
            failed.error = e.what();
            rows.push_back(failed);
            log << "n=" << n << " failed: " << e.what() << '\n';
        }
    }
    write_file(dir / "sweep.csv", [&](std::ostream& os) { write_sweep_table(os, rows); });
    write_file(dir / "sweep_history.csv", [&](std::ostream& os) { write_sweep_histories(os, rows); });
    write_file(dir / "sweep_summary.json", [&](std::ostream& os) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back(summary_json(r, config));
        os << j.dump(2) << '\n';
    });
    return rows;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_config(args);
    } catch (const HelpRequested& help) {
        out << help.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (!config.sweep.empty()) {
            const auto rows = run_sweep(config, config.out_dir, err);
            out << format_table(rows);
            for (const auto& r : rows) {
                if (!r.error.empty()) return kExitNumerical;
            }
            return kExitOk;
        }
        const auto summary = run_single(config, config.n, config.out_dir);
        out << format_table({summary});
        return kExitOk;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const linalg::SolverError& e) {
        err << "numerical failure: " << e.what() << " (last residual " << e.last_residual() << ")\n";
        return kExitNumerical;
    } catch (const fem::InfeasibleControl& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace pmpd::cli
