#pragma once

#include "ferro/integrator.hpp"

#include <map>
#include <string>
#include <vector>

namespace ferro {

inline constexpr int kTrajectorySchema = 1;

struct TrajectoryHeader {
    std::uint64_t config_hash = 0;
    std::uint64_t member = 0;
    std::uint64_t seed = 0;
    int kmax = 0;
};

/// Text header, then an index table of (f64 time, u64 byte offset) per snapshot, then the
/// snapshot x coefficient matrix. All binary values little-endian.
void write_trajectory(const std::string& path, const TrajectoryRecord& rec, const TrajectoryHeader& h);

struct TrajectoryFile {
    std::map<std::string, std::string> header;
    std::vector<double> times;
    std::vector<GalerkinState> states;

    std::uint64_t config_hash() const;
};

/// Throws when the stored basis digest differs from the one this build computes.
TrajectoryFile read_trajectory(const std::string& path);

/// RFC-4180 field quoting.
std::string csv_quote(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// 17 significant digits, so values survive a text round trip.
std::string csv_number(double x);

/// Columns: step, t, then every ledger term by name.
std::vector<std::string> ledger_header();
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
EnergyLedger read_ledger_csv(const std::string& path);

}  // namespace ferro
