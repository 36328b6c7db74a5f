#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "peco/data.hpp"
#include "peco/density.hpp"
#include "peco/dep.hpp"
#include "peco/errors.hpp"
#include "peco/pipeline.hpp"
#include "peco/problem.hpp"
#include "peco/samplesize.hpp"
#include "peco/sdds.hpp"
#include "peco/store.hpp"

namespace {

// 0 success, 2 failure inside a computation stage, 3 unusable configuration
int exit_code_for(const peco::Error& e) {
    switch (e.code()) {
        case peco::ErrorCode::ConfigError:
        case peco::ErrorCode::IoError:
        case peco::ErrorCode::ExactModeTooLarge:
            return 3;
        default:
            return 2;
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw peco::Error(peco::ErrorCode::IoError, "cannot write " + path);
    out << text;
    if (!out) throw peco::Error(peco::ErrorCode::IoError, "short write to " + path);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DESP toolkit: probable-data filtering, determining-set analysis, "
                 "sample sizing and embedded-program solving"};
    app.require_subcommand(1);

    // dalpha
    auto* dalpha = app.add_subcommand("dalpha", "Filter a dataset to its probable part");
    std::string dalpha_data, dalpha_out;
    double dalpha_alpha = 0.0, dalpha_eta = 0.0;
    bool dalpha_rule = false;
    dalpha->add_option("--data", dalpha_data)->required();
    dalpha->add_option("--alpha", dalpha_alpha)->required();
    auto* eta_opt = dalpha->add_option("--eta", dalpha_eta);
    auto* rule_opt = dalpha->add_flag("--eta-rule", dalpha_rule);
    eta_opt->excludes(rule_opt);
    dalpha->add_option("--out", dalpha_out)->required();

    // samplesize
    auto* samplesize = app.add_subcommand("samplesize", "Minimal embedded size for a coverage target");
    std::string ss_family, ss_out;
    std::size_t ss_dalpha_size = 0;
    double ss_target = 0.0;
    samplesize->add_option("--family", ss_family)->required();
    samplesize->add_option("--dalpha-size", ss_dalpha_size)->required();
    samplesize->add_option("--target", ss_target)->required();
    samplesize->add_option("--out", ss_out)->required();

    // validate-rho
    auto* validate = app.add_subcommand("validate-rho", "Exact coverage probability vs Monte Carlo");
    std::string vr_family;
    std::size_t vr_dalpha_size = 0, vr_z = 0, vr_trials = 0;
    std::uint64_t vr_seed = 0;
    validate->add_option("--family", vr_family)->required();
    validate->add_option("--dalpha-size", vr_dalpha_size)->required();
    validate->add_option("--z", vr_z)->required();
    validate->add_option("--trials", vr_trials)->required();
    validate->add_option("--seed", vr_seed)->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve the embedded program for a point set");
    std::string sv_problem, sv_embed, sv_solver, sv_out;
    solve_cmd->add_option("--problem", sv_problem)->required();
    solve_cmd->add_option("--embed", sv_embed)->required();
    solve_cmd->add_option("--solver", sv_solver)->required();
    solve_cmd->add_option("--out", sv_out)->required();

    // sdds
    auto* sdds_cmd = app.add_subcommand("sdds", "Enumerate single-removal-critical scenario subsets");
    std::string sd_problem, sd_scenarios, sd_out;
    sdds_cmd->add_option("--problem", sd_problem)->required();
    sdds_cmd->add_option("--scenarios", sd_scenarios)->required();
    sdds_cmd->add_option("--out", sd_out)->required();

    // pipeline
    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run all four stages end to end");
    std::string pl_config, pl_store, pl_out;
    pipeline_cmd->add_option("--config", pl_config)->required();
    pipeline_cmd->add_option("--store", pl_store)->required();
    pipeline_cmd->add_option("--out", pl_out)->required();

    // alpha-from-beta
    auto* afb = app.add_subcommand("alpha-from-beta", "Density threshold holding mass 1 - beta");
    std::string afb_density;
    double afb_beta = 0.0;
    afb->add_option("--density", afb_density)->required();
    afb->add_option("--beta", afb_beta)->required();

    // contour
    auto* contour = app.add_subcommand("contour", "Plot-ready density grid with region membership");
    std::string ct_density, ct_out;
    double ct_alpha = 0.0;
    contour->add_option("--density", ct_density)->required();
    contour->add_option("--alpha", ct_alpha)->required();
    contour->add_option("--out", ct_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*dalpha) {
            if (!*eta_opt && !dalpha_rule)
                throw peco::Error(peco::ErrorCode::ConfigError,
                                  "give exactly one of --eta or --eta-rule");
            peco::DataSet data = peco::load_csv(dalpha_data);
            double eta = dalpha_rule ? peco::eta_rule(data) : dalpha_eta;
            peco::DataSet kept = peco::build_d_alpha(data, dalpha_alpha, eta);
            peco::save_csv(kept, dalpha_out);
            auto underlying = peco::underlying_set(kept);
            std::cout << "eta " << peco::format_double(eta) << "\n"
                      << "kept " << kept.size() << " of " << data.size() << " points, "
                      << underlying.size() << " distinct\n";
        } else if (*samplesize) {
            peco::SddsFamily family = peco::load_family(ss_family);
            peco::RhoInput input = peco::rho_input_from_family(family, ss_dalpha_size);
            peco::SampleSizePlan plan = peco::make_plan(input, ss_target, 0);
            write_json(ss_out, peco::plan_to_json(plan));
            std::cout << "z_min " << plan.z_min << "\n";
        } else if (*validate) {
            peco::SddsFamily family = peco::load_family(vr_family);
            peco::RhoInput input = peco::rho_input_from_family(family, vr_dalpha_size);
            double exact = peco::rho(input, vr_z);
            double estimate =
                peco::monte_carlo_rho(family, vr_dalpha_size, vr_z, vr_trials, vr_seed);
            double tolerance =
                4.0 * std::sqrt(exact * (1.0 - exact) / static_cast<double>(vr_trials)) + 0.002;
            double gap = std::abs(exact - estimate);
            std::cout << "rho " << peco::format_double(exact) << "\n"
                      << "monte_carlo " << peco::format_double(estimate) << "\n"
                      << "gap " << peco::format_double(gap) << " tolerance "
                      << peco::format_double(tolerance) << "\n"
                      << (gap <= tolerance ? "agree" : "DISAGREE") << "\n";
            if (gap > tolerance) return 2;
        } else if (*solve_cmd) {
            peco::ProblemSpec problem = peco::load_problem(sv_problem);
            peco::DataSet embed = peco::load_csv(sv_embed);
            peco::SolverConfig cfg;
            cfg.solver_id = sv_solver;
            if (sv_solver != peco::kSolverBuiltinPenalty && sv_solver != peco::kSolverGridOracle)
                throw peco::Error(peco::ErrorCode::ConfigError,
                                  "unknown solver id '" + sv_solver + "'");
            peco::Solution sol = peco::solve(peco::build_dep(problem, embed), cfg);
            write_json(sv_out, peco::solution_to_json(sol, cfg));
            std::cout << "status " << peco::solve_status_name(sol.status) << " objective "
                      << peco::format_double(sol.objective_value) << "\n";
        } else if (*sdds_cmd) {
            peco::ProblemSpec problem = peco::load_problem(sd_problem);
            peco::DataSet raw = peco::load_csv(sd_scenarios);
            peco::ScenarioSet scenarios = peco::underlying_set(raw);
            peco::SolverConfig cfg;
            peco::SddsFamily family = peco::enumerate_sdds(problem, scenarios, cfg);
            write_json(sd_out, peco::family_to_json(family));
            std::cout << "family size " << family.size() << "\n";
        } else if (*pipeline_cmd) {
            peco::PipelineConfig cfg = peco::load_pipeline_config(pl_config);
            peco::PipelineReport report = peco::run_pipeline(cfg, pl_store);
            write_json(pl_out, peco::report_to_json(report));
            std::cout << "z " << report.z << " status "
                      << peco::solve_status_name(report.solution.status) << " objective "
                      << peco::format_double(report.solution.objective_value) << "\n";
        } else if (*afb) {
            peco::ProductDensity density = peco::load_density(afb_density);
            std::cout << peco::format_double(peco::alpha_from_beta(density, afb_beta)) << "\n";
        } else if (*contour) {
            peco::ProductDensity density = peco::load_density(ct_density);
            if (density.dimension() != 2)
                throw peco::Error(peco::ErrorCode::ConfigError,
                                  "contour grids need a 2-component density");
            peco::XiAlphaRegion region{density, ct_alpha};
            auto box1 = peco::factor_box(density.factors[0]);
            auto box2 = peco::factor_box(density.factors[1]);
            const std::size_t nodes = 201;
            std::string csv = "xi1,xi2,density,member\n";
            for (std::size_t i = 0; i < nodes; ++i) {
                double x1 = box1.first + (static_cast<double>(i) * (box1.second - box1.first)) /
                                             static_cast<double>(nodes - 1);
                for (std::size_t k = 0; k < nodes; ++k) {
                    double x2 = box2.first + (static_cast<double>(k) * (box2.second - box2.first)) /
                                                 static_cast<double>(nodes - 1);
                    double value = peco::density_eval(density, {x1, x2});
                    csv += peco::format_double(x1) + "," + peco::format_double(x2) + "," +
                           peco::format_double(value) + "," +
                           (peco::xi_alpha_member(region, {x1, x2}) ? "1" : "0") + "\n";
                }
            }
            write_text(ct_out, csv);
            std::cout << "wrote " << nodes << "x" << nodes << " grid\n";
        }
    } catch (const peco::Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
