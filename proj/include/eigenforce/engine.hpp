#pragma once

#include "eigenforce/dynamics.hpp"
#include "eigenforce/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eigenforce {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Bits of TrackedValues::flags.
enum StepFlag : std::uint32_t {
  kFlagSingularGap = 1u << 0,       // another eigenvalue inside the gap tolerance; forces NaN
  kFlagNearReal = 1u << 1,          // complex pair with |Im| under the collision threshold; forces NaN
  kFlagAmbiguousMatch = 1u << 2,    // path matching could not separate this path from another
  kFlagIllConditioned = 1u << 3,    // |u_j| above the ill-conditioning threshold
  kFlagNearDegenerate = 1u << 4,    // decomposition saw a near-degenerate eigenvalue
  kFlagSelfPaired = 1u << 5,        // real eigenvalue of a real matrix, no conjugate term
};

struct TrackedValues {
  Index j = 0;
  Complex lambda{};
  Complex velocity{};
  ForceBreakdown force;
  std::optional<Complex> expected_force;  // stochastic real runs, complex-paired j only
  std::uint32_t flags = 0;
};

struct StepRecord {
  double t = 0.0;
  CVector eigenvalues;              // path order
  std::vector<Index> permutation;   // path j came from decompose() output index permutation[j]
  std::vector<Index> partners;      // conjugate partner per path; empty for complex matrices
  std::vector<std::pair<Index, Index>> ambiguous_pairs;
  double match_cost = 0.0;
  double identity_cost = 0.0;
  Complex trace{};
  std::vector<TrackedValues> tracked;
};

enum class CollisionKind : std::uint32_t { RealAxis = 1, Ambiguity = 2, Both = 3 };

struct CollisionEvent {
  double t_lo = 0.0;
  double t_hi = 0.0;
  Index first = 0;
  Index second = 0;
  double min_imag = 0.0;  // smallest |Im| of the pair at t_hi
  CollisionKind kind = CollisionKind::RealAxis;
};

struct Provenance {
  std::string scenario;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version = kLibraryVersion;
  std::string timestamp;  // excluded from equality and reproducibility checks
};

struct RunRecord {
  Provenance provenance;
  Index dim = 0;
  std::vector<Index> tracked_indices;
  double collision_threshold = 0.0;
  bool stochastic = false;
  std::vector<StepRecord> steps;
  std::vector<CollisionEvent> events;
};

// Steps the scenario's trajectory over time.steps + 1 grid points. With a
// perturbation, M_k = M(t_k) + dt sum_{i<k} P_i and Mdot_k = M'(t_k) + P_k,
// where P_i is sample i of the seeded process.
RunRecord run_scenario(const ScenarioConfig& cfg);

// Real-axis events: a tracked pair whose |Im| drops under the threshold
// between consecutive steps (or is already under it at the first step).
// Ambiguity events: onset of a path-matching ambiguity involving a tracked
// path. Both kinds at the same step and pair merge into one event.
std::vector<CollisionEvent> detect_collisions(const std::vector<StepRecord>& steps, double threshold,
                                              const std::vector<Index>& tracked);

}  // namespace eigenforce
