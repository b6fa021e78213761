#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmpd/pmp.hpp"

namespace pmpd::cli {

enum class IntegrandKind { integer_quadratic, quadratic };
enum class TargetKind { reference, zero };

struct RunConfig {
    std::size_t n = 32;
    // Non-empty for a mesh sweep.
    std::vector<std::size_t> sweep;
    bool allow_large = false;

    IntegrandKind integrand = IntegrandKind::integer_quadratic;
    double alpha = 0.01;
    double b = 10.0;
    TargetKind target = TargetKind::reference;
    fem::MassKind mass = fem::MassKind::lumped;
    pmp::TargetBoundary target_boundary = pmp::TargetBoundary::zero;

    pmp::AlgorithmConfig algorithm;

    std::filesystem::path out_dir = "out";
    bool dump_control = false;
    bool dump_fields = false;

    std::vector<std::size_t> meshes() const { return sweep.empty() ? std::vector<std::size_t>{n} : sweep; }
};

// Meshes above this size need --allow-large.
inline constexpr std::size_t kDeskScaleLimit = 256;
inline const std::vector<std::size_t> kDefaultSweep = {32, 64, 128, 256};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --help / --version; carries the text to print.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parses flags (args excludes the program name). A `--config <file>` of flat
// key=value lines supplies defaults that flags override; unknown keys are
// rejected. Throws UsageError naming the offending key.
RunConfig parse_config(const std::vector<std::string>& args);

// Range checks; throws UsageError.
void validate(const RunConfig& config);

std::vector<std::size_t> parse_mesh_list(const std::string& text);

std::shared_ptr<const integrand::CostIntegrand> make_integrand(const RunConfig& config);
std::function<double(double, double)> make_target(const RunConfig& config);
pmp::DiscretizationOptions discretization_options(const RunConfig& config);

std::string to_string(IntegrandKind kind);
std::string to_string(TargetKind kind);

}  // namespace pmpd::cli
