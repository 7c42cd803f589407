// Command-line front end: method analysis, the comparison table, and the
// long-run invariant-drift experiments. Exit codes: 0 success, 2 bad
// input/validation, 1 runtime failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rk/rk.hpp"

namespace {

void print_analysis(const rk::MethodAnalysis& analysis) {
    std::cout << rk::analysis_text(analysis);
    const auto header = rk::analysis_csv_header();
    const auto row = rk::analysis_csv_row(analysis);
    std::cout << "csv: ";
    for (std::size_t i = 0; i < header.size(); ++i) std::cout << (i ? "," : "") << header[i];
    std::cout << "\ncsv: ";
    for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Runge-Kutta order / pseudo-symplecticity analysis and drift experiments"};
    app.require_subcommand(1);

    // ---- analyze ----------------------------------------------------------
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze one method from a tableau");
    std::string analyze_method;
    int qmax = 10;
    analyze_cmd->add_option("--method", analyze_method, "catalog id or tableau file")->required();
    analyze_cmd->add_option("--qmax", qmax, "largest pseudo-symplectic order probed")
        ->capture_default_str();

    // ---- table1 -----------------------------------------------------------
    auto* table_cmd = app.add_subcommand("table1", "comparison table over the method roster");
    std::string methods_dir = "data";
    std::string table_out;
    table_cmd->add_option("--methods-dir", methods_dir, "directory with <name>.rkt files")
        ->capture_default_str();
    table_cmd->add_option("--out", table_out, "also write the table as CSV");

    // ---- drift ------------------------------------------------------------
    auto* drift_cmd = app.add_subcommand("drift", "invariant drift along one long run");
    std::string drift_problem = "rigid";
    std::string drift_method;
    double drift_h1 = 0.0078125;
    double drift_t_end = 1000.0;
    double drift_sample_dt = 1.0;
    std::string drift_out;
    bool drift_compensated = false;
    drift_cmd->add_option("--problem", drift_problem, "rigid | pendulum")->capture_default_str();
    drift_cmd->add_option("--method", drift_method, "catalog id or tableau file")->required();
    drift_cmd->add_option("--h1", drift_h1, "per-stage step unit; h = s*h1")->capture_default_str();
    drift_cmd->add_option("--t-end", drift_t_end, "integration horizon")->capture_default_str();
    drift_cmd->add_option("--sample-dt", drift_sample_dt, "sampling interval")
        ->capture_default_str();
    drift_cmd->add_option("--out", drift_out, "output CSV path")->required();
    drift_cmd->add_flag("--compensated", drift_compensated, "compensated x-update accumulation");

    // ---- slope ------------------------------------------------------------
    auto* slope_cmd = app.add_subcommand("slope", "drift-speed power law over step sizes");
    std::string slope_problem = "pendulum";
    std::string slope_method;
    std::vector<double> slope_h1;
    double slope_t_end = 20000.0;
    std::string slope_out;
    slope_cmd->add_option("--problem", slope_problem, "rigid | pendulum")->capture_default_str();
    slope_cmd->add_option("--method", slope_method, "catalog id or tableau file")->required();
    slope_cmd->add_option("--h1", slope_h1, "comma-separated h1 list")
        ->required()
        ->delimiter(',');
    slope_cmd->add_option("--t-end", slope_t_end, "horizon per run")->capture_default_str();
    slope_cmd->add_option("--out", slope_out, "output CSV path");

    // ---- zeta -------------------------------------------------------------
    auto* zeta_cmd = app.add_subcommand("zeta", "evaluate the family polynomial zeta(c2, c3)");
    double zeta_c2 = 0.0;
    double zeta_c3 = 0.0;
    zeta_cmd->add_option("--c2", zeta_c2, "first node")->required();
    zeta_cmd->add_option("--c3", zeta_c3, "second node")->required();

    // ---- family -----------------------------------------------------------
    auto* family_cmd = app.add_subcommand("family", "print a psi-family tableau");
    double family_psi = 0.0;
    family_cmd->add_option("--psi", family_psi, "family parameter")->required();

    try {
        app.parse(argc, argv);

        if (*analyze_cmd) {
            print_analysis(rk::analyze(rk::resolve_method(analyze_method), qmax));
        } else if (*table_cmd) {
            const auto rows =
                rk::table1_report(rk::table1_roster(), std::filesystem::path(methods_dir));
            std::cout << rk::table1_text(rows);
            if (!table_out.empty()) rk::emit_csv(rk::table1_csv(rows), table_out);
        } else if (*drift_cmd) {
            rk::IntegrateOptions options;
            options.compensated = drift_compensated;
            const auto series =
                rk::drift_experiment(rk::parse_problem(drift_problem),
                                     rk::resolve_method(drift_method), drift_h1, drift_t_end,
                                     drift_sample_dt, options);
            rk::emit_csv(rk::drift_series_csv(series), drift_out);
            std::cout << series.method << ": h1 = " << rk::csv_double(series.h1)
                      << ", h = " << rk::csv_double(series.h)
                      << ", rhs evaluations = " << series.rhs_evaluations << ", samples = "
                      << series.times.size() << " -> " << drift_out << '\n';
        } else if (*slope_cmd) {
            const auto fit =
                rk::drift_speed_slope(rk::parse_problem(slope_problem),
                                      rk::resolve_method(slope_method), slope_h1, slope_t_end);
            for (const auto& p : fit.speeds)
                std::cout << "h1 = " << rk::csv_double(p.h1) << "  h = " << rk::csv_double(p.h)
                          << "  speed = " << rk::csv_double(p.speed)
                          << (p.floor ? "  [round-off floor]" : "") << '\n';
            if (fit.all_floor)
                std::cout << "slope: floor (no usable points)\n";
            else if (fit.slope)
                std::cout << "slope: " << rk::csv_double(*fit.slope) << "  over h in ["
                          << rk::csv_double(fit.h_min_used) << ", "
                          << rk::csv_double(fit.h_max_used) << "]\n";
            else
                std::cout << "slope: undetermined (fewer than 2 usable points)\n";
            if (!slope_out.empty()) rk::emit_csv(rk::drift_fit_csv(fit), slope_out);
        } else if (*zeta_cmd) {
            std::cout << rk::csv_double(rk::zeta(zeta_c2, zeta_c3)) << '\n';
        } else if (*family_cmd) {
            rk::write_tableau(std::cout, rk::family_tableau(family_psi));
        }
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const rk::ValidationError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
