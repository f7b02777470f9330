#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rpfa/dataset.hpp"
#include "rpfa/rng.hpp"

namespace rpfa {

enum class Generator { bkt2, bkt3, bkt_fs };
const char* generator_name(Generator g);
Generator parse_generator(const std::string& name);

struct PopulationConfig {
    int n_kcs = 50;
    int n_students = 3500;
    double kc_mean = 5.0;       // mean of Poisson number of KCs per student
    double attempts_mean = 8.0; // mean of Poisson attempts per (student, KC)
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-KC parameters of the 2-state generator. Priors: initial knowledge
/// Beta(1,2); learn rate Beta(2,2); guess Uniform(0.02,0.3); 1-slip
/// Uniform(0.7,0.98).
struct Bkt2KcParams {
    double init_know = 0;       // P(start in learned state)
    double learn_rate = 0;      // P(unlearned -> learned) after each attempt
    double guess = 0;           // P(correct | unlearned)
    double one_minus_slip = 0;  // P(correct | learned)
};

struct Bkt2Params {
    std::vector<Bkt2KcParams> kcs;
    static Bkt2Params sample(int n_kcs, RngStream& stream);
};

/// Per-KC parameters of the 3-state generator (unlearned, practicing,
/// fluent). Nobody starts fluent and there is no direct unlearned->fluent
/// transition.
struct Bkt3KcParams {
    double init_unlearned = 0;        // P(start unlearned); start practicing otherwise
    double stay_unlearned = 0;        // self-transition of state 1
    double stay_practicing = 0;       // self-transition of state 2
    double p_correct_unlearned = 0;   // Uniform(0.02, 0.2)
    double p_correct_practicing = 0;  // Uniform(0.4, 0.7)
    double p_correct_fluent = 0;      // Uniform(0.85, 1)
};

struct Bkt3Params {
    std::vector<Bkt3KcParams> kcs;
    static Bkt3Params sample(int n_kcs, RngStream& stream);
};

/// 2-state parameters plus the failure-sequence overlay.
struct BktFsParams {
    Bkt2Params base;
    double p_fs_student = 0.08;        // P(G_i = 1)
    std::vector<double> engagement;    // B_j ~ Uniform(0,1) per KC
    double p_correct_during_fs = 0.2;  // per-attempt success rate inside an FS run

    static BktFsParams sample(int n_kcs, double p_fs_student, double p_correct_during_fs,
                              RngStream& stream);
};

/// Latent state for one attempt; states are coded 1 = unlearned, 2 =
/// learned/practicing, 3 = fluent, and 0 for attempts generated by the
/// failure-sequence branch (no chain runs there).
struct LatentRecord {
    std::string student_id;
    std::string kc_id;
    int t = 0;
    int state = 0;
};

struct SimResult {
    Dataset dataset;
    int n_zero_kc_students = 0;          // census of students with no practiced KC
    std::vector<LatentRecord> latent;    // filled only when keep_latent
    std::vector<std::uint8_t> fs_student;       // G_i per student index (bkt_fs only)
    std::vector<std::pair<std::string, std::string>> fs_sequences;  // (student, kc) with W=1
};

/// KC subset and attempt counts for one student: J ~ min(K, Poisson(kc_mean))
/// KCs drawn without replacement, O ~ max(Poisson(attempts_mean), 2).
struct StudentAssignment {
    std::vector<int> kcs;       // ascending KC indices
    std::vector<int> attempts;  // parallel to kcs, each >= 2
};

/// The population structure alone (no outcomes), using the same per-student
/// sub-streams the simulators use.
std::vector<StudentAssignment> sample_population(const PopulationConfig& config);

SimResult simulate_bkt2(const PopulationConfig& config, const Bkt2Params* forced = nullptr,
                        bool keep_latent = false);
SimResult simulate_bkt3(const PopulationConfig& config, const Bkt3Params* forced = nullptr,
                        bool keep_latent = false);
SimResult simulate_bkt_fs(const PopulationConfig& config, double p_fs_student = 0.08,
                          double p_correct_during_fs = 0.2, const BktFsParams* forced = nullptr,
                          bool keep_latent = false);

/// Latent-trace CSV: student,kc,t,Z.
void write_latent_csv(const SimResult& result, std::ostream& out);

std::string student_label(int index);
std::string kc_label(int index);

}  // namespace rpfa
