#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpfa/errors.hpp"

namespace rpfa {

/// One graded first attempt by a student on a knowledge component.
struct AttemptRecord {
    std::string student_id;
    std::string kc_id;
    std::optional<int> opportunity;   // 1-based within (student, kc); used for ordering only
    int outcome = 0;                  // 0 incorrect, 1 correct
    std::optional<double> order_key;  // monotone sort key (timestamp, row index, ...)
};

/// Ordered outcome string for one (student, kc) pair; t runs 1..length().
struct PracticeSequence {
    std::string student_id;
    std::string kc_id;
    std::vector<std::uint8_t> outcomes;

    int length() const { return static_cast<int>(outcomes.size()); }
};

/// Canonicalized practice log. Sequences are sorted by (student_id, kc_id)
/// and opportunity indices are gap-free 1..O within each sequence. Immutable
/// after construction; safe to share read-only across threads.
struct Dataset {
    std::vector<PracticeSequence> sequences;  // sorted by (student_id, kc_id)
    std::map<std::string, int> student_index; // id -> dense index, sorted by id
    std::map<std::string, int> kc_index;

    int n_students() const { return static_cast<int>(student_index.size()); }
    int n_kcs() const { return static_cast<int>(kc_index.size()); }
    std::int64_t n_attempts() const;

    const PracticeSequence* find(const std::string& student_id, const std::string& kc_id) const;

    /// Records in canonical order with opportunity filled in.
    std::vector<AttemptRecord> records() const;
};

struct DistributionSummary {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0, mean = 0;
};

struct DatasetSummary {
    int n_students = 0;
    int n_kcs = 0;
    std::int64_t n_attempts = 0;
    DistributionSummary kcs_per_student;
    DistributionSummary attempts_per_student;
    DistributionSummary attempts_per_kc;
    DistributionSummary students_per_kc;
    std::vector<double> percent_correct_per_kc;  // kc_index order
};

/// Column-name mapping for CSV ingestion. Mapped optional columns must exist
/// in the header; leave them unset to ignore.
struct CsvSchema {
    std::string student = "student";
    std::string kc = "kc";
    std::string outcome = "outcome";
    std::optional<std::string> opportunity;
    std::optional<std::string> order_key;
};

/// Group, order, and reindex raw records into a canonical Dataset.
///
/// Within each (student, kc) group, records are ordered by opportunity when
/// every record carries one, otherwise by order_key when every record carries
/// one (ties keep input order). Opportunity indices are then recomputed
/// 1..O regardless of what was provided. A multi-record group with neither
/// ordering source throws OrderingError.
Dataset canonicalize(const std::vector<AttemptRecord>& records);

/// Parse delimited text with a header row and canonicalize it. When the
/// schema maps neither opportunity nor order_key, file order is taken as the
/// attempt order (order_key = data row number).
Dataset ingest_csv(std::istream& source, const CsvSchema& schema);

/// ingest_csv with optional columns mapped automatically when the header
/// contains columns named "opportunity" / "order_key".
Dataset ingest_csv_auto(std::istream& source);

/// Write columns student,kc,opportunity,outcome in canonical order.
void export_csv(const Dataset& dataset, std::ostream& out);

DatasetSummary summarize(const Dataset& dataset);

/// Quartile summary of a value list (linear interpolation between order
/// statistics). Exposed for reuse in reports.
DistributionSummary summarize_values(std::vector<double> values);

}  // namespace rpfa
