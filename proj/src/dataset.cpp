#include "rpfa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace rpfa {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_line(const std::string& line, char delim = ',') {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (trim(header[i]) == name) return static_cast<int>(i);
    return -1;
}

int require_column(const std::vector<std::string>& header, const std::string& name) {
    int idx = find_column(header, name);
    if (idx < 0) throw SchemaError("missing mapped column '" + name + "' in header");
    return idx;
}

}  // namespace

std::int64_t Dataset::n_attempts() const {
    std::int64_t total = 0;
    for (const auto& seq : sequences) total += seq.length();
    return total;
}

const PracticeSequence* Dataset::find(const std::string& student_id,
                                      const std::string& kc_id) const {
    const auto key = std::tie(student_id, kc_id);
    auto it = std::lower_bound(sequences.begin(), sequences.end(), key,
                               [](const PracticeSequence& s, const auto& k) {
                                   return std::tie(s.student_id, s.kc_id) < k;
                               });
    if (it != sequences.end() && it->student_id == student_id && it->kc_id == kc_id) return &*it;
    return nullptr;
}

std::vector<AttemptRecord> Dataset::records() const {
    std::vector<AttemptRecord> out;
    out.reserve(static_cast<std::size_t>(n_attempts()));
    for (const auto& seq : sequences) {
        for (int t = 1; t <= seq.length(); ++t) {
            AttemptRecord rec;
            rec.student_id = seq.student_id;
            rec.kc_id = seq.kc_id;
            rec.opportunity = t;
            rec.outcome = seq.outcomes[static_cast<std::size_t>(t - 1)];
            out.push_back(std::move(rec));
        }
    }
    return out;
}

Dataset canonicalize(const std::vector<AttemptRecord>& records) {
    // Group by (student, kc) in sorted key order; values are input indices.
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.outcome != 0 && r.outcome != 1)
            throw ValidationError("outcome must be 0 or 1 for (" + r.student_id + ", " +
                                  r.kc_id + ")");
        groups[{r.student_id, r.kc_id}].push_back(i);
    }

    Dataset ds;
    ds.sequences.reserve(groups.size());
    for (auto& [key, idxs] : groups) {
        const bool all_opp = std::all_of(idxs.begin(), idxs.end(), [&](std::size_t i) {
            return records[i].opportunity.has_value();
        });
        const bool all_key = std::all_of(idxs.begin(), idxs.end(), [&](std::size_t i) {
            return records[i].order_key.has_value();
        });
        if (all_opp) {
            std::stable_sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
                return *records[a].opportunity < *records[b].opportunity;
            });
            for (std::size_t j = 1; j < idxs.size(); ++j) {
                if (*records[idxs[j]].opportunity == *records[idxs[j - 1]].opportunity)
                    throw ValidationError(
                        "duplicate opportunity " + std::to_string(*records[idxs[j]].opportunity) +
                        " for (" + key.first + ", " + key.second + ")");
            }
        } else if (all_key) {
            std::stable_sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
                return *records[a].order_key < *records[b].order_key;
            });
        } else if (idxs.size() > 1) {
            throw OrderingError("group (" + key.first + ", " + key.second +
                                ") has neither opportunity nor order_key on every record");
        }

        PracticeSequence seq;
        seq.student_id = key.first;
        seq.kc_id = key.second;
        seq.outcomes.reserve(idxs.size());
        for (std::size_t i : idxs)
            seq.outcomes.push_back(static_cast<std::uint8_t>(records[i].outcome));
        ds.sequences.push_back(std::move(seq));
    }

    for (const auto& seq : ds.sequences) {
        ds.student_index.emplace(seq.student_id, 0);
        ds.kc_index.emplace(seq.kc_id, 0);
    }
    int si = 0;
    for (auto& [id, idx] : ds.student_index) idx = si++;
    int ki = 0;
    for (auto& [id, idx] : ds.kc_index) idx = ki++;
    return ds;
}

Dataset ingest_csv(std::istream& source, const CsvSchema& schema) {
    std::string line;
    if (!std::getline(source, line)) throw ParseError("empty input: no header row");
    const auto header = split_line(line);

    const int c_student = require_column(header, schema.student);
    const int c_kc = require_column(header, schema.kc);
    const int c_outcome = require_column(header, schema.outcome);
    const int c_opp = schema.opportunity ? require_column(header, *schema.opportunity) : -1;
    const int c_key = schema.order_key ? require_column(header, *schema.order_key) : -1;
    const bool file_order = (c_opp < 0 && c_key < 0);

    std::vector<AttemptRecord> records;
    std::int64_t row = 0;  // 1-based data row number, header excluded
    while (std::getline(source, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        const int needed = std::max({c_student, c_kc, c_outcome, c_opp, c_key});
        if (static_cast<int>(fields.size()) <= needed)
            throw ParseError("row " + std::to_string(row) + ": expected at least " +
                             std::to_string(needed + 1) + " fields, found " +
                             std::to_string(fields.size()));

        AttemptRecord rec;
        rec.student_id = trim(fields[static_cast<std::size_t>(c_student)]);
        rec.kc_id = trim(fields[static_cast<std::size_t>(c_kc)]);
        if (rec.student_id.empty() || rec.kc_id.empty())
            throw ParseError("row " + std::to_string(row) + ": empty student or kc id");

        const std::string out_s = trim(fields[static_cast<std::size_t>(c_outcome)]);
        if (out_s == "0") {
            rec.outcome = 0;
        } else if (out_s == "1") {
            rec.outcome = 1;
        } else {
            throw ParseError("row " + std::to_string(row) + ": non-binary outcome value '" +
                             out_s + "'");
        }

        if (c_opp >= 0) {
            const std::string opp_s = trim(fields[static_cast<std::size_t>(c_opp)]);
            try {
                std::size_t pos = 0;
                const int opp = std::stoi(opp_s, &pos);
                if (pos != opp_s.size() || opp < 1) throw std::invalid_argument(opp_s);
                rec.opportunity = opp;
            } catch (const std::exception&) {
                throw ParseError("row " + std::to_string(row) +
                                 ": opportunity must be a positive integer, got '" + opp_s + "'");
            }
        }
        if (c_key >= 0) {
            const std::string key_s = trim(fields[static_cast<std::size_t>(c_key)]);
            try {
                std::size_t pos = 0;
                rec.order_key = std::stod(key_s, &pos);
                if (pos != key_s.size()) throw std::invalid_argument(key_s);
            } catch (const std::exception&) {
                throw ParseError("row " + std::to_string(row) +
                                 ": order_key must be numeric, got '" + key_s + "'");
            }
        }
        if (file_order) rec.order_key = static_cast<double>(row);
        records.push_back(std::move(rec));
    }
    return canonicalize(records);
}

Dataset ingest_csv_auto(std::istream& source) {
    // Peek at the header to decide which optional columns to map.
    std::string header_line;
    if (!std::getline(source, header_line)) throw ParseError("empty input: no header row");
    const auto header = split_line(header_line);

    CsvSchema schema;
    if (find_column(header, "opportunity") >= 0) schema.opportunity = "opportunity";
    if (find_column(header, "order_key") >= 0) schema.order_key = "order_key";

    std::stringstream rebuilt;
    rebuilt << header_line << "\n" << source.rdbuf();
    return ingest_csv(rebuilt, schema);
}

void export_csv(const Dataset& dataset, std::ostream& out) {
    out << "student,kc,opportunity,outcome\n";
    for (const auto& seq : dataset.sequences) {
        for (int t = 1; t <= seq.length(); ++t) {
            out << seq.student_id << ',' << seq.kc_id << ',' << t << ','
                << static_cast<int>(seq.outcomes[static_cast<std::size_t>(t - 1)]) << '\n';
        }
    }
}

DistributionSummary summarize_values(std::vector<double> values) {
    DistributionSummary s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    auto quantile = [&](double p) {
        const double h = p * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = h - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    return s;
}

DatasetSummary summarize(const Dataset& dataset) {
    if (dataset.sequences.empty()) throw EmptyInputError("summarize: dataset is empty");

    DatasetSummary s;
    s.n_students = dataset.n_students();
    s.n_kcs = dataset.n_kcs();
    s.n_attempts = dataset.n_attempts();

    std::vector<double> kcs_per_student(static_cast<std::size_t>(s.n_students), 0);
    std::vector<double> attempts_per_student(static_cast<std::size_t>(s.n_students), 0);
    std::vector<double> attempts_per_kc(static_cast<std::size_t>(s.n_kcs), 0);
    std::vector<double> students_per_kc(static_cast<std::size_t>(s.n_kcs), 0);
    std::vector<double> correct_per_kc(static_cast<std::size_t>(s.n_kcs), 0);

    for (const auto& seq : dataset.sequences) {
        const auto si = static_cast<std::size_t>(dataset.student_index.at(seq.student_id));
        const auto ki = static_cast<std::size_t>(dataset.kc_index.at(seq.kc_id));
        kcs_per_student[si] += 1;
        attempts_per_student[si] += seq.length();
        attempts_per_kc[ki] += seq.length();
        students_per_kc[ki] += 1;
        for (auto x : seq.outcomes) correct_per_kc[ki] += x;
    }

    s.percent_correct_per_kc.resize(correct_per_kc.size());
    for (std::size_t k = 0; k < correct_per_kc.size(); ++k)
        s.percent_correct_per_kc[k] = correct_per_kc[k] / attempts_per_kc[k];

    s.kcs_per_student = summarize_values(std::move(kcs_per_student));
    s.attempts_per_student = summarize_values(std::move(attempts_per_student));
    s.attempts_per_kc = summarize_values(std::move(attempts_per_kc));
    s.students_per_kc = summarize_values(std::move(students_per_kc));
    return s;
}

}  // namespace rpfa
