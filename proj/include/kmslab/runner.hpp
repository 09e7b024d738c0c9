#ifndef KMSLAB_RUNNER_HPP
#define KMSLAB_RUNNER_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmslab/bound_report.hpp"
#include "kmslab/expansional.hpp"
#include "kmslab/types.hpp"

namespace kmslab {

enum class Suite { inequalities, modular, kms, expansional, exponentiable, perturbation, all };

std::string suite_name(Suite s);
Suite suite_from_name(const std::string& name);  // throws ValidationError

struct ExperimentConfig {
    Suite suite = Suite::all;
    std::vector<int> dims = {2, 3, 4};
    int trials = 50;
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerance_overrides;  // row name -> slack tolerance
    SeriesBudget budget;
    std::string output_path = "out";

    double tolerance_for(const std::string& row_name) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);  // ValidationError
nlohmann::json config_to_json(const ExperimentConfig& cfg);  // normalized form
ExperimentConfig load_config(const std::string& path);       // IoFailure/ParseError

struct SuiteReport {
    ExperimentConfig config;
    std::vector<BoundReport> rows;
    nlohmann::json certificates = nlohmann::json::object();
    nlohmann::json flags = nlohmann::json::array();
    int passed = 0;
    int failed = 0;
    int inconclusive = 0;
    double wall_seconds = 0.0;
};

// pure computation: deterministic given the config
SuiteReport collect_suite(const ExperimentConfig& cfg);

// collect + write <out>/report.csv and <out>/summary.json
SuiteReport run_suite(const ExperimentConfig& cfg);

// individual suites (rows only; certificates appended when non-null)
std::vector<BoundReport> suite_inequalities(const ExperimentConfig& cfg);
std::vector<BoundReport> suite_modular(const ExperimentConfig& cfg);
std::vector<BoundReport> suite_kms(const ExperimentConfig& cfg);
std::vector<BoundReport> suite_expansional(const ExperimentConfig& cfg);
std::vector<BoundReport> suite_exponentiable(const ExperimentConfig& cfg, nlohmann::json* certs,
                                             nlohmann::json* flags);
std::vector<BoundReport> suite_perturbation(const ExperimentConfig& cfg, nlohmann::json* certs);

// KMS_LAB_THREADS-capped deterministic index loop (results must go to
// preassigned slots; the cap only bounds worker count)
void parallel_for(int count, const std::function<void(int)>& body);

nlohmann::json builtin_example_definitions();

}  // namespace kmslab

#endif
