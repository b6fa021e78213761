#include "pmpd/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace pmpd::cli {
namespace {

template <typename Enum>
Enum parse_choice(const std::string& key, const std::string& value,
                  std::initializer_list<std::pair<const char*, Enum>> choices) {
    std::string allowed;
    for (const auto& [name, e] : choices) {
        if (value == name) return e;
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    throw UsageError(key + ": expected one of {" + allowed + "}, got '" + value + "'");
}

}  // namespace

std::vector<std::size_t> parse_mesh_list(const std::string& text) {
    if (text == "default") return kDefaultSweep;
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty() || !std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw UsageError("--sweep: '" + item + "' is not a positive integer");
        }
        out.push_back(std::stoul(item));
    }
    if (out.empty()) throw UsageError("--sweep: empty mesh list");
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig config;
    auto& alg = config.algorithm;

    CLI::App app{"Maximum-principle descent for integer-valued control of the Poisson equation", "pmp_descent"};
    app.set_config("--config", "", "flat key=value file; flags override its values");
    app.allow_config_extras(CLI::config_extras_mode::error);

    std::string sweep, mode = "pmp-armijo", integrand = "integer-quadratic", target = "reference";
    std::string mass = "lumped", target_boundary = "zero", out_dir = config.out_dir.string();

    app.add_option("--n", config.n, "subdivisions per side of the unit square");
    app.add_option("--sweep", sweep, "comma-separated mesh list, or 'default' (32,64,128,256)");
    app.add_flag("--allow-large", config.allow_large, "permit meshes finer than n=256");
    app.add_option("--alpha", config.alpha, "Tikhonov weight");
    app.add_option("--b", config.b, "control bound");
    app.add_option("--beta", alg.beta, "backtracking ratio in (0,1)");
    app.add_option("--sigma", alg.sigma, "Armijo parameter in (0,1)");
    app.add_option("--delta-tol", alg.delta_tol, "residual tolerance");
    app.add_option("--max-outer", alg.max_outer, "maximum outer iterations");
    app.add_option("--solver-tol", alg.solver_rel_tol, "relative CG tolerance");
    app.add_option("--mode", mode, "pmp-armijo|full-step");
    app.add_option("--integrand", integrand, "integer-quadratic|quadratic");
    app.add_option("--target", target, "reference|zero");
    app.add_option("--mass", mass, "lumped|consistent tracking norm");
    app.add_option("--target-boundary", target_boundary, "zero|interpolate desired state on the boundary");
    app.add_option("--out-dir", out_dir, "output directory");
    app.add_flag("--dump-control", config.dump_control, "write the final control");
    app.add_flag("--dump-fields", config.dump_fields, "write the final state and adjoint");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!sweep.empty()) config.sweep = parse_mesh_list(sweep);
    alg.mode = parse_choice<pmp::StepMode>("--mode", mode,
                                           {{"pmp-armijo", pmp::StepMode::pmp_armijo},
                                            {"full-step", pmp::StepMode::full_step}});
    config.integrand = parse_choice<IntegrandKind>("--integrand", integrand,
                                                   {{"integer-quadratic", IntegrandKind::integer_quadratic},
                                                    {"quadratic", IntegrandKind::quadratic}});
    config.target = parse_choice<TargetKind>("--target", target,
                                             {{"reference", TargetKind::reference}, {"zero", TargetKind::zero}});
    config.mass = parse_choice<fem::MassKind>("--mass", mass,
                                              {{"lumped", fem::MassKind::lumped},
                                               {"consistent", fem::MassKind::consistent}});
    config.target_boundary = parse_choice<pmp::TargetBoundary>(
        "--target-boundary", target_boundary,
        {{"zero", pmp::TargetBoundary::zero}, {"interpolate", pmp::TargetBoundary::interpolate}});
    config.out_dir = out_dir;

    validate(config);
    return config;
}

void validate(const RunConfig& config) {
    const auto check = [](bool ok, const std::string& message) {
        if (!ok) throw UsageError(message);
    };
    for (const auto n : config.meshes()) {
        check(n >= 1, "--n: must be >= 1");
        check(n <= kDeskScaleLimit || config.allow_large,
              "--n: " + std::to_string(n) + " exceeds " + std::to_string(kDeskScaleLimit) + "; pass --allow-large");
    }
    check(config.alpha > 0.0 && std::isfinite(config.alpha), "--alpha: must be positive, got " + std::to_string(config.alpha));
    check(config.b > 0.0 && std::isfinite(config.b), "--b: must be positive, got " + std::to_string(config.b));
    if (config.integrand == IntegrandKind::integer_quadratic) {
        check(config.b == std::floor(config.b), "--b: must be an integer for integer-quadratic");
    }
    const auto& alg = config.algorithm;
    check(alg.beta > 0.0 && alg.beta < 1.0, "--beta: must lie in (0,1), got " + std::to_string(alg.beta));
    check(alg.sigma > 0.0 && alg.sigma < 1.0, "--sigma: must lie in (0,1), got " + std::to_string(alg.sigma));
    check(alg.delta_tol >= 0.0, "--delta-tol: must be nonnegative");
    check(alg.max_outer >= 1, "--max-outer: must be >= 1");
    check(alg.solver_rel_tol > 0.0, "--solver-tol: must be positive");
}

std::shared_ptr<const integrand::CostIntegrand> make_integrand(const RunConfig& config) {
    if (config.integrand == IntegrandKind::quadratic) {
        return std::make_shared<integrand::PureQuadratic>(config.alpha, config.b);
    }
    return std::make_shared<integrand::IntegerQuadratic>(config.alpha, static_cast<long>(config.b));
}

std::function<double(double, double)> make_target(const RunConfig& config) {
    if (config.target == TargetKind::zero) return [](double, double) { return 0.0; };
    return fem::reference_target;
}

pmp::DiscretizationOptions discretization_options(const RunConfig& config) {
    pmp::DiscretizationOptions options;
    options.solver.rel_tol = config.algorithm.solver_rel_tol;
    options.mass = config.mass;
    options.target_boundary = config.target_boundary;
    return options;
}

std::string to_string(IntegrandKind kind) {
    return kind == IntegrandKind::quadratic ? "quadratic" : "integer-quadratic";
}

std::string to_string(TargetKind kind) { return kind == TargetKind::zero ? "zero" : "reference"; }

}  // namespace pmpd::cli
