#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace unif {

// One measurement row. Doubles are written with 17 significant digits so
// CSV and JSON round-trip losslessly; wall_time_ms is 0 unless timing is
// explicitly requested (output bytes stay deterministic).
struct ExperimentRecord {
    std::string sequence_label;
    int d = 1;
    std::uint64_t N = 0;
    std::string metric;
    double value = 0.0;
    double tail = 0.0;       // certificate where applicable
    double bracket_lo = 0.0; // w2_bracket only
    double bracket_hi = 0.0;
    double t_star = 0.0;     // heat bounds only
    std::uint64_t wall_time_ms = 0;
    std::string note; // per-record error text; empty on success

    bool failed() const { return !note.empty(); }
};

std::string records_csv(std::span<const ExperimentRecord> recs);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);
std::string records_json(std::span<const ExperimentRecord> recs);
std::vector<ExperimentRecord> records_from_json(const std::string& text);

// Deterministic least squares of log(value) against log(N).
struct ScalingFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::uint64_t n_min = 0;
    std::uint64_t n_max = 0;

    std::string to_json() const;
};

ScalingFit fit_loglog(std::span<const std::uint64_t> ns, std::span<const double> values);
// generic least squares on already-transformed coordinates
ScalingFit fit_linear(std::span<const double> xs, std::span<const double> ys);

} // namespace unif
