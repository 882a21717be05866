#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace vacancy {

/// Shortest faithful decimal for interchange files: %.17g round-trips every
/// binary64 value.
std::string format_g17(double v);

/// One emitted statistic. Every row carries its provenance (seed,
/// replicates, stderr); exact rows use stderr = 0, replicates = 0.
struct SweepRow {
    std::string model;
    int d = 0;
    double lambda = 0.0;
    int n = 0;
    std::string statistic;
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t replicates = 0;
    std::uint64_t seed = 0;
    int depth_cap = 0;
};

/// Fixed column order: model,d,lambda,n,statistic,value,stderr,replicates,
/// seed,depth_cap. Header row mandatory.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Same rows as a JSON array of objects; numeric values are identical to the
/// CSV encoding (both round-trip binary64).
void write_json(std::ostream& out, const std::vector<SweepRow>& rows);

} // namespace vacancy
