#pragma once

// Monte Carlo sampling of the rows x cols array.  Each cell draws its
// mismatch from a counter-based stream keyed by (seed, row, col, chip),
// so maps are bit-identical for any worker count or visit order.
//
// Variability model: a normal per-cell Vth mismatch feeds the
// subthreshold exponent (dominant lever at room temperature, inert at
// 4.2 K where the leakage floor rules), plus a per-temperature
// retention-proportional jitter term that carries the residual spread
// the single Vth source cannot express.  The jitter share is disclosed
// by the calibration report.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cqsedram/cell.hpp"
#include "cqsedram/device.hpp"
#include "cqsedram/errors.hpp"
#include "cqsedram/rng.hpp"

namespace cqsedram {

struct ArrayConfig {
    int rows = 32;
    int cols = 128;
    BitCellConfig cell{};
    DeviceParams dev{};
    double sigma_vth_mismatch = 0.0;   // V, per-cell Vth mismatch std
    double chip_leak_scale_sigma = 0.0;  // chip-level lognormal scale std (subthreshold)
    double chip_floor_scale_sigma = 0.005;  // chip-level lognormal scale std (floor)
    std::uint64_t seed = 0;

    // Retention-proportional jitter at vdd_nominal, per anchor temperature,
    // with a supply-voltage exponent fitted to the measured sigma-vs-vdd
    // improvement.  Interpolated linearly in T between the anchors.
    double retention_jitter_cryo = 0.0;
    double retention_jitter_room = 0.0;
    double jitter_vdd_exp_cryo = 0.0;
    double jitter_vdd_exp_room = 0.0;

    void validate() const {
        if (rows * cols < 1) throw DomainError("rows*cols must be >= 1");
        if (sigma_vth_mismatch < 0.0) throw DomainError("sigma_vth_mismatch must be >= 0");
        if (chip_leak_scale_sigma < 0.0) throw DomainError("chip_leak_scale_sigma must be >= 0");
    }
};

struct RetentionMap {
    int rows = 0;
    int cols = 0;
    std::vector<double> retention;  // row-major, seconds
    double mean = 0.0;
    double std = 0.0;  // population
    double min = 0.0;
    double max = 0.0;
    double cv = 0.0;

    double at(int r, int c) const { return retention[static_cast<size_t>(r) * cols + c]; }
};

struct ArrayStats {
    double mean = 0.0;
    double std = 0.0;  // population
    double min = 0.0;
    double max = 0.0;
    double cv = 0.0;
    double normality_ad = 0.0;  // Anderson-Darling A^2 vs fitted normal
};

namespace detail {

inline double temp_interp(double value_cryo, double value_room, double t) {
    if (t <= kTempCryo) return value_cryo;
    if (t >= kTempRoom) return value_room;
    const double w = (t - kTempCryo) / (kTempRoom - kTempCryo);
    return (1.0 - w) * value_cryo + w * value_room;
}

inline double jitter_sigma(const ArrayConfig& cfg, const ThermalOperatingPoint& op) {
    const double gamma = temp_interp(cfg.retention_jitter_cryo,
                                     cfg.retention_jitter_room, op.temperature);
    const double q = temp_interp(cfg.jitter_vdd_exp_cryo, cfg.jitter_vdd_exp_room,
                                 op.temperature);
    return gamma * std::pow(op.vdd / cfg.dev.vdd_nominal, q);
}

inline void fill_summary(RetentionMap& map) {
    double sum = 0.0, lo = map.retention[0], hi = map.retention[0];
    for (double v : map.retention) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double n = static_cast<double>(map.retention.size());
    map.mean = sum / n;
    double ss = 0.0;
    for (double v : map.retention) ss += (v - map.mean) * (v - map.mean);
    map.std = std::sqrt(ss / n);
    map.min = lo;
    map.max = hi;
    map.cv = map.mean > 0.0 ? map.std / map.mean : 0.0;
}

// Chip-level lognormal scales on the two leakage components.  Chip 0 is
// the reference (calibrated) die; other chips scale relative to it.
inline DeviceParams chip_device(const ArrayConfig& cfg, int chip) {
    DeviceParams dev = cfg.dev;
    if (chip > 0 && (cfg.chip_leak_scale_sigma > 0.0 || cfg.chip_floor_scale_sigma > 0.0)) {
        const auto xi0 = keyed_normal_pair(cfg.seed, 0x00C41000u, 0u, 0xFFFFFFFFu);
        const auto xi = keyed_normal_pair(cfg.seed, 0x00C41000u + static_cast<std::uint32_t>(chip),
                                          0u, 0xFFFFFFFFu);
        dev.i_sub0 *= std::exp(cfg.chip_leak_scale_sigma * (xi.first - xi0.first));
        dev.i_floor *= std::exp(cfg.chip_floor_scale_sigma * (xi.second - xi0.second));
    }
    return dev;
}

}  // namespace detail

// Retention of one cell of the sampled array; exposed so sweeps can
// reuse per-cell draws without materializing full maps.
inline double sampled_cell_retention(const ArrayConfig& cfg, const DeviceParams& chip_dev,
                                     const ThermalOperatingPoint& op, int row, int col,
                                     int chip) {
    const auto z = keyed_normal_pair(cfg.seed, static_cast<std::uint32_t>(row),
                                     static_cast<std::uint32_t>(col),
                                     static_cast<std::uint32_t>(chip));
    DeviceParams dev = chip_dev;
    dev.vth_300 += cfg.sigma_vth_mismatch * z.first;

    const double gamma = detail::jitter_sigma(cfg, op);
    double jitter = 1.0 + gamma * z.second;
    jitter = std::min(20.0, std::max(0.05, jitter));

    try {
        return retention_time(cfg.cell, dev, op, 1.0 / jitter);
    } catch (const NumericError& e) {
        throw NumericError("cell (" + std::to_string(row) + ", " + std::to_string(col) +
                           "): " + e.what());
    }
}

inline RetentionMap sample_array(const ArrayConfig& cfg, const ThermalOperatingPoint& op,
                                 int n_workers = 1, int chip = 0) {
    cfg.validate();
    op.validate();
    RetentionMap map;
    map.rows = cfg.rows;
    map.cols = cfg.cols;
    map.retention.assign(static_cast<size_t>(cfg.rows) * cfg.cols, 0.0);

    const DeviceParams chip_dev = detail::chip_device(cfg, chip);

    auto run_rows = [&](int row_begin, int row_end) {
        for (int r = row_begin; r < row_end; ++r) {
            for (int c = 0; c < cfg.cols; ++c) {
                map.retention[static_cast<size_t>(r) * cfg.cols + c] =
                    sampled_cell_retention(cfg, chip_dev, op, r, c, chip);
            }
        }
    };

    if (n_workers <= 1 || cfg.rows <= 1) {
        run_rows(0, cfg.rows);
    } else {
        const int workers = std::min(n_workers, cfg.rows);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const int chunk = (cfg.rows + workers - 1) / workers;
        std::exception_ptr first_error;
        std::mutex err_mutex;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(cfg.rows, lo + chunk);
            pool.emplace_back([&, lo, hi] {
                try {
                    run_rows(lo, hi);
                } catch (...) {
                    std::lock_guard<std::mutex> g(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    detail::fill_summary(map);
    return map;
}

// Summary statistics plus an Anderson-Darling normality score.
inline ArrayStats array_stats(const RetentionMap& map) {
    if (map.retention.empty()) throw UsageError("array_stats on empty map");
    ArrayStats s;
    RetentionMap scratch = map;
    detail::fill_summary(scratch);
    s.mean = scratch.mean;
    s.std = scratch.std;
    s.min = scratch.min;
    s.max = scratch.max;
    s.cv = scratch.cv;

    if (s.std > 0.0 && map.retention.size() > 4) {
        std::vector<double> sorted = map.retention;
        std::sort(sorted.begin(), sorted.end());
        const size_t n = sorted.size();
        double a2 = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double zi = (sorted[i] - s.mean) / s.std;
            const double zr = (sorted[n - 1 - i] - s.mean) / s.std;
            const double cdf_i = 0.5 * std::erfc(-zi / std::sqrt(2.0));
            const double cdf_r = 0.5 * std::erfc(-zr / std::sqrt(2.0));
            const double u = std::min(std::max(cdf_i, 1e-300), 1.0 - 1e-16);
            const double v = std::min(std::max(1.0 - cdf_r, 1e-300), 1.0 - 1e-16);
            a2 += (2.0 * static_cast<double>(i) + 1.0) * (std::log(u) + std::log(v));
        }
        s.normality_ad = -static_cast<double>(n) - a2 / static_cast<double>(n);
    }
    return s;
}

struct ChipSummary {
    double mean_rel = 1.0;  // t_bar_i / t_bar_0
    double std_rel = 1.0;   // sigma_i / sigma_0
};

inline std::vector<ChipSummary> chip_ensemble(const ArrayConfig& cfg,
                                              const ThermalOperatingPoint& op,
                                              int n_chips, int n_workers = 1) {
    if (n_chips < 1) throw UsageError("n_chips must be >= 1");
    std::vector<ChipSummary> out;
    out.reserve(n_chips);
    double mean0 = 0.0, std0 = 0.0;
    for (int chip = 0; chip < n_chips; ++chip) {
        const RetentionMap map = sample_array(cfg, op, n_workers, chip);
        if (chip == 0) {
            mean0 = map.mean;
            std0 = map.std;
        }
        out.push_back({map.mean / mean0, std0 > 0.0 ? map.std / std0 : 1.0});
    }
    return out;
}

}  // namespace cqsedram
