#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpfa/harness.hpp"

namespace rpfa {

enum class ReportFormat { json, csv };
ReportFormat parse_format(const std::string& name);

// JSON emission. Key order is stable (lexicographic), so two emissions of
// the same report are byte-identical.
std::string to_json_string(const FitResult& fit, std::int64_t n_rows);
std::string to_json_string(const std::vector<CVResult>& results, const FoldAssignment& folds);
std::string to_json_string(const SweepReport& report);
std::string to_json_string(const StudyReport& report);
std::string to_json_string(const RBinReport& report);
std::string to_json_string(const DatasetSummary& summary);

// Flat CSV emission (one row per cell/fold/replication), provenance and
// configuration recorded as leading '#' comment lines.
std::string to_csv_string(const std::vector<CVResult>& results);
std::string to_csv_string(const SweepReport& report);
std::string to_csv_string(const StudyReport& report);
std::string to_csv_string(const RBinReport& report);

/// Write a report string to `path` ("-" for stdout). Throws IoError.
void write_text_file(const std::string& path, const std::string& content);

// Config-file parsing (JSON mirroring the struct field names). Fields that
// are absent keep their defaults.
struct SimConfig {
    Generator generator = Generator::bkt2;
    PopulationConfig population;
    double fs_p_student = 0.08;
    double fs_p_correct = 0.2;
};

SimConfig parse_sim_config(std::istream& in);
StudyConfig parse_study_config(std::istream& in);
SweepGrid parse_sweep_grid(std::istream& in);

/// Model roster entry syntax shared by config files and the CLI:
/// family plus optional decays, e.g. {"family":"r-pfa","decay_r":0.6,
/// "decay_f":0.1,"ghost_count":3}.
ModelSpec model_spec_from_options(const std::string& family, double decay_s, double decay_f,
                                  double decay_r, int ghost_count);

}  // namespace rpfa
