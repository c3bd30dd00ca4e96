// Batch CLI: calibrate / array / sweep / cim / report.  The only part
// of the tool that touches the filesystem; everything else is the
// header-only library.  Exit codes are a stable contract:
//   0 success, 2 usage, 3 I/O, 4 parse, 5 domain, 6 calibration,
//   7 numeric.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqsedram/calibration.hpp"
#include "cqsedram/cim.hpp"
#include "cqsedram/dvs.hpp"
#include "cqsedram/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;
constexpr int kExitDomain = 5;
constexpr int kExitCalibration = 6;
constexpr int kExitNumeric = 7;

struct IoFailure {
    std::string what;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure{"cannot read '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure{"cannot write '" + path + "'"};
    out << content;
    if (!out) throw IoFailure{"short write to '" + path + "'"};
}

std::string default_profile_path(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CQSEDRAM_PROFILE")) return env;
    return "";
}

cqsedram::CalibrationProfile load_profile_file(const std::string& flag_value) {
    const std::string path = default_profile_path(flag_value);
    if (path.empty()) {
        throw IoFailure{
            "no profile given (use --profile or set CQSEDRAM_PROFILE)"};
    }
    return cqsedram::load_profile(read_file(path));
}

// Per-anchor residual tolerances the calibrate command enforces.
const std::map<std::string, double>& residual_tolerances() {
    static const std::map<std::string, double> tol{
        {"ret_300k_1v1_s", 0.01},        {"ret_4k2_1v1_s", 0.01},
        {"ret_300k_0v6_s", 0.05},        {"ret_4k2_0v6_s", 0.05},
        {"wbl_retention_ratio", 0.05},   {"cv_300k", 0.15},
        // Sampled-minimum anchors are extreme order statistics of a 4 Kb
        // draw; their seed-to-seed spread dominates the fit error.
        {"cv_4k2", 0.15},                {"min_300k_1v1_s", 0.40},
        {"min_4k2_1v1_s", 0.10},         {"p_retention_4k2_W", 0.10},
        {"p_retention_300k_W_per_kb", 0.10}, {"p_dynamic_300k_W", 0.05},
        {"write_energy_ratio_tg_n", 0.05}, {"write_energy_ratio_tg_p", 0.05},
        {"write_delay_ratio_tg_n", 0.05},  {"write_delay_ratio_tg_p", 0.05},
        {"read_delay_4k2_s", 0.05},      {"tops_per_watt_4k2", 0.10},
        {"chip_mean_spread_300k", 0.25},
    };
    return tol;
}

int run(int argc, char** argv) {
    CLI::App app{"cryogenic quasi-static gain-cell eDRAM array simulator"};
    app.require_subcommand(1);

    std::string profile_path, out_dir = ".", targets_path, workload_path, out_profile;
    double temperature = cqsedram::kTempCryo;
    double vdd = 1.1;
    std::uint64_t seed = 0;
    int workers = 4;
    double max_error = 0.0;
    std::vector<double> grid;
    std::string objective = "retention";
    bool both_temps = false;

    auto* cal = app.add_subcommand("calibrate", "fit a profile from an anchors file");
    cal->add_option("--targets", targets_path, "anchors file")->required();
    cal->add_option("--workload", workload_path, "workload file for CIM constants");
    cal->add_option("--out", out_profile, "output profile path")->required();
    cal->add_option("--workers", workers, "sampling threads");

    auto* arr = app.add_subcommand("array", "sample a retention heat map");
    arr->add_option("--profile", profile_path, "calibration profile");
    arr->add_option("-T,--temperature", temperature, "kelvin");
    arr->add_option("--vdd", vdd, "volts");
    arr->add_option("--seed", seed, "RNG seed");
    arr->add_option("--out", out_dir, "output directory");
    arr->add_option("--workers", workers, "sampling threads");

    auto* swp = app.add_subcommand("sweep", "supply-voltage sweep");
    swp->add_option("--profile", profile_path, "calibration profile");
    swp->add_option("-T,--temperature", temperature, "kelvin");
    swp->add_option("--grid", grid, "vdd grid, volts");
    swp->add_option("--objective", objective, "retention|dynamic|total");
    swp->add_option("--seed", seed, "RNG seed");
    swp->add_option("--max-error", max_error, "DRPS error budget (0 = full yield)");
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--workers", workers, "sampling threads");

    auto* cim = app.add_subcommand("cim", "workload energy report");
    cim->add_option("--profile", profile_path, "calibration profile");
    cim->add_option("--workload", workload_path, "workload file")->required();
    cim->add_option("-T,--temperature", temperature, "kelvin");
    cim->add_flag("--both", both_temps, "also report the 300 K vs 4.2 K ratios");
    cim->add_option("--seed", seed, "RNG seed");
    cim->add_option("--out", out_dir, "output directory");
    cim->add_option("--workers", workers, "sampling threads");

    auto* rep = app.add_subcommand("report", "print a profile summary");
    rep->add_option("--profile", profile_path, "calibration profile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (cal->parsed()) {
        const cqsedram::CalibrationTargets targets =
            cqsedram::load_targets(read_file(targets_path));
        std::optional<cqsedram::WorkloadSpec> workload;
        if (!workload_path.empty()) {
            workload = cqsedram::load_workload(read_file(workload_path));
        }
        const cqsedram::CalibrationProfile profile = cqsedram::calibrate(
            targets, workload ? &*workload : nullptr, workers);
        write_file(out_profile, cqsedram::profile_to_text(profile));
        for (const auto& name : profile.defaulted) {
            std::cerr << "warning: " << name << "\n";
        }
        bool failed = false;
        for (const auto& [key, residual] : profile.residuals) {
            const auto it = residual_tolerances().find(key);
            const double tol = it == residual_tolerances().end() ? 0.25 : it->second;
            if (residual > tol) {
                std::cerr << "error: anchor '" << key << "' residual "
                          << residual << " exceeds tolerance " << tol << "\n";
                failed = true;
            }
        }
        std::cout << "profile " << out_profile << " hash "
                  << cqsedram::profile_hash(profile) << "\n";
        return failed ? kExitCalibration : 0;
    }

    if (arr->parsed()) {
        const cqsedram::CalibrationProfile profile = load_profile_file(profile_path);
        cqsedram::ArrayConfig cfg = profile.array_config(seed);
        const cqsedram::ThermalOperatingPoint op{temperature, vdd};
        const cqsedram::RetentionMap map = cqsedram::sample_array(cfg, op, workers);
        const cqsedram::ArrayStats stats = cqsedram::array_stats(map);
        const std::string prov =
            cqsedram::provenance_header(cqsedram::profile_hash(profile), seed);
        write_file(out_dir + "/heatmap.txt", cqsedram::format_heat_map(map, prov));
        write_file(out_dir + "/stats.txt", cqsedram::format_stats(stats, prov));
        return 0;
    }

    if (swp->parsed()) {
        const cqsedram::CalibrationProfile profile = load_profile_file(profile_path);
        cqsedram::ArrayConfig cfg = profile.array_config(seed);
        if (grid.empty()) grid = cqsedram::default_vdd_grid();
        cqsedram::SweepObjective obj = cqsedram::SweepObjective::MIN_RETENTION_POWER;
        if (objective == "dynamic") {
            obj = cqsedram::SweepObjective::MIN_DYNAMIC_POWER;
        } else if (objective == "total") {
            obj = cqsedram::SweepObjective::MIN_TOTAL;
        } else if (objective != "retention") {
            std::cerr << "error: unknown objective '" << objective << "'\n";
            return kExitUsage;
        }
        const cqsedram::SweepTable table = cqsedram::vdd_sweep(
            cfg, temperature, grid, profile.pm, profile.am, 1.0, workers);
        const cqsedram::SweepPoint chosen = cqsedram::optimal_vdd(table.points, obj);
        const std::string prov =
            cqsedram::provenance_header(cqsedram::profile_hash(profile), seed);
        write_file(out_dir + "/sweep.txt", cqsedram::format_sweep(table, chosen, prov));
        if (max_error > 0.0) {
            const cqsedram::DvsDrpsResult joint = cqsedram::joint_dvs_drps(
                cfg, temperature, max_error, profile.pm, profile.am, grid, workers);
            std::ostringstream extra;
            extra << prov;
            extra << "vdd_V = " << cqsedram::detail::fmt_g17(joint.vdd) << "\n";
            extra << "period_s = " << cqsedram::detail::fmt_g17(joint.period) << "\n";
            extra << "p_retention_W = " << cqsedram::detail::fmt_g17(joint.p_retention)
                  << "\n";
            write_file(out_dir + "/drps.txt", extra.str());
        }
        return 0;
    }

    if (cim->parsed()) {
        const cqsedram::CalibrationProfile profile = load_profile_file(profile_path);
        cqsedram::ArrayConfig cfg = profile.array_config(seed);
        const cqsedram::WorkloadSpec workload =
            cqsedram::load_workload(read_file(workload_path));
        const std::string prov =
            cqsedram::provenance_header(cqsedram::profile_hash(profile), seed);
        if (both_temps) {
            const cqsedram::TemperatureComparison cmp = cqsedram::compare_temperatures(
                workload, cfg, profile.pm, profile.cm, profile.am, workers);
            write_file(out_dir + "/cim_compare.txt",
                       cqsedram::format_comparison(cmp, prov));
            write_file(out_dir + "/cim.txt",
                       cqsedram::format_cim(cmp.report_cryo, prov));
            return 0;
        }
        const cqsedram::ThermalOperatingPoint op{temperature, cfg.dev.vdd_nominal};
        const cqsedram::RetentionMap map = cqsedram::sample_array(cfg, op, workers);
        const cqsedram::RefreshPolicy policy{cqsedram::min_refresh_period(map),
                                             cqsedram::RefreshMode::FULL_YIELD, 0.0};
        const cqsedram::CimReport report = cqsedram::cim_energy(
            workload, cfg, op, policy, profile.pm, profile.cm, profile.am);
        write_file(out_dir + "/cim.txt", cqsedram::format_cim(report, prov));
        return 0;
    }

    if (rep->parsed()) {
        const cqsedram::CalibrationProfile profile = load_profile_file(profile_path);
        std::cout << "profile_hash = " << cqsedram::profile_hash(profile) << "\n";
        std::cout << "tool_version = " << cqsedram::kToolVersion << "\n";
        for (const auto& [key, residual] : profile.residuals) {
            std::cout << "residual_" << key << " = "
                      << cqsedram::detail::fmt_g17(residual) << "\n";
        }
        return 0;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const IoFailure& e) {
        std::cerr << "I/O error: " << e.what << "\n";
        return kExitIo;
    } catch (const cqsedram::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const cqsedram::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const cqsedram::CalibrationError& e) {
        std::cerr << "calibration error: " << e.what()
                  << " (best residual " << e.best_residual() << ")\n";
        return kExitCalibration;
    } catch (const cqsedram::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const cqsedram::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
