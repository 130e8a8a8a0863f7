#pragma once

#include "eigenforce/matrix.hpp"
#include "eigenforce/models.hpp"
#include "eigenforce/stochastic.hpp"
#include "eigenforce/trajectory.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eigenforce {

enum class ModelKind { Explicit, Ring, Transfer, EffectiveHamiltonian };

const char* to_string(ModelKind kind) noexcept;

struct ModelConfig {
  ModelKind kind = ModelKind::Explicit;

  // explicit: M(t) = sum_k t^k coefficients[k]
  std::vector<CMatrix> coefficients;

  // ring
  BiophysicalRing ring;
  bool convective = true;  // variant "omega_le"; "omega" pins h = 0 and U = 0
  Eigen::VectorXd U_rate;
  double h_rate = 0.0;

  // transfer: the trajectory parameter is the wavenumber k
  std::optional<TransferMatrixModel> transfer;
  std::optional<double> difference_step;

  // effective Hamiltonian
  EffectiveHamiltonianSpec hamiltonian;
  CMatrix H_rate;
  std::vector<CMatrix> L_rates;
};

struct TimeConfig {
  double t0 = 0.0;
  double t1 = 1.0;
  Index steps = 1;

  double at(Index k) const { return k == steps ? t1 : t0 + (t1 - t0) * double(k) / double(steps); }
  double step() const { return (t1 - t0) / double(steps); }
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

struct ScenarioConfig {
  std::string name;
  ModelConfig model;
  TimeConfig time;
  std::optional<PerturbationProcess> perturbation;
  std::optional<std::vector<Index>> tracked;  // empty optional tracks every eigenvalue
  double collision_threshold = 1e-6;
  double tolerance = 1e-9;
  std::uint64_t seed = 0;
  OutputConfig output;
  std::uint64_t hash = 0;  // FNV-1a of the effective document and loaded matrices
  std::vector<std::string> warnings;

  Index dim() const;
  MatrixTrajectory trajectory() const;
  std::vector<Index> tracked_indices() const;
};

// Raw scenario text plus its parsed JSON; overrides are applied here before
// the config is built.
struct ScenarioDocument {
  nlohmann::json json;
  std::string text;
  std::filesystem::path base_dir;  // matrix file paths resolve against this
  std::string source = "<scenario>";
};

// Throws ConfigError on malformed JSON (key path "" and a line number in
// the message) and Error{IoError} on unreadable files.
ScenarioDocument parse_scenario_document(std::string text, std::filesystem::path base_dir = ".",
                                         std::string source = "<scenario>");
ScenarioDocument load_scenario_document(const std::filesystem::path& path);

// "a.b.c=value". The value is read as JSON when it parses, else as a string.
void apply_override(ScenarioDocument& doc, std::string_view assignment);

// Validates the document and builds every model input. Throws ConfigError.
ScenarioConfig build_config(const ScenarioDocument& doc);

// 1-based line of the last component of a dotted key path in the raw text,
// following the components in order; 0 when the key is absent.
std::size_t locate_key(std::string_view text, std::string_view key_path);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace eigenforce
