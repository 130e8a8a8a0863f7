#include "eigenforce/engine.hpp"

#include "eigenforce/error.hpp"
#include "eigenforce/kernels.hpp"
#include "eigenforce/spectral.hpp"
#include "eigenforce/stochastic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

namespace eigenforce {

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void poison(ForceBreakdown& f) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  f.inertial = f.conjugate_term = f.others = f.total = Complex{nan, nan};
}

bool involves(const std::vector<std::pair<Index, Index>>& pairs, Index j) {
  return std::any_of(pairs.begin(), pairs.end(), [j](const auto& p) { return p.first == j || p.second == j; });
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& cfg) {
  const MatrixTrajectory traj = cfg.trajectory();
  const Index n = traj.dim();
  const std::vector<Index> tracked = cfg.tracked_indices();

  RunRecord record;
  record.provenance.scenario = cfg.name;
  record.provenance.config_hash = cfg.hash;
  record.provenance.seed = cfg.seed;
  record.provenance.timestamp = utc_timestamp();
  record.dim = n;
  record.tracked_indices = tracked;
  record.collision_threshold = cfg.collision_threshold;
  record.stochastic = cfg.perturbation.has_value();
  record.steps.reserve(static_cast<std::size_t>(cfg.time.steps + 1));

  std::optional<Eigen::MatrixXd> variances;
  if (cfg.perturbation) variances = cfg.perturbation->variance_matrix(n);
  CMatrix offset = CMatrix::Zero(n, n);
  SpectralDecomposition prev;

  for (Index k = 0; k <= cfg.time.steps; ++k) {
    StepRecord step;
    step.t = cfg.time.at(k);
    CMatrix m = traj.value(step.t).matrix();
    CMatrix mdot = traj.first_derivative(step.t).matrix();
    const ComplexSquareMatrix mddot = traj.second_derivative(step.t);
    Eigen::MatrixXd p;
    if (cfg.perturbation) {
      p = sample_perturbation(*cfg.perturbation, n, static_cast<std::uint64_t>(k));
      m += offset;
      mdot += p.cast<Complex>();
    }
    const ComplexSquareMatrix M(std::move(m));
    const ComplexSquareMatrix Mdot(std::move(mdot));

    const SpectralDecomposition raw = decompose(M, cfg.tolerance);
    SpectralDecomposition d;
    if (k == 0) {
      step.permutation.resize(static_cast<std::size_t>(n));
      std::iota(step.permutation.begin(), step.permutation.end(), Index{0});
      d = raw;
    } else {
      PathMatch match = match_paths(prev, raw, cfg.tolerance);
      step.permutation = std::move(match.permutation);
      step.ambiguous_pairs = std::move(match.ambiguous_pairs);
      step.match_cost = match.cost;
      step.identity_cost = match.identity_cost;
      d = permuted(raw, step.permutation);
    }
    step.eigenvalues = d.eigenvalues;
    step.trace = M.trace();

    std::optional<ConjugatePairing> pairing;
    if (M.is_real(0.0)) {
      try {
        pairing = pair_conjugates(d, cfg.tolerance);
        step.partners = pairing->partner;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PairingFailure) throw;
      }
    }
    const ConjugatePairing* pp = pairing ? &*pairing : nullptr;

    const auto forces = kernels::evaluate_forces_parallel(d, Mdot, mddot, pp, tracked);
    step.tracked.resize(tracked.size());
    for (std::size_t q = 0; q < tracked.size(); ++q) {
      const Index j = tracked[q];
      TrackedValues& tv = step.tracked[q];
      tv.j = j;
      tv.lambda = d.eigenvalues(j);
      tv.velocity = forces[q].velocity;
      tv.force = forces[q].force;
      if (forces[q].singular) tv.flags |= kFlagSingularGap;
      const auto cond = d.condition_flags[static_cast<std::size_t>(j)];
      if (cond & kIllConditioned) tv.flags |= kFlagIllConditioned;
      if (cond & kNearDegenerate) tv.flags |= kFlagNearDegenerate;
      if (involves(step.ambiguous_pairs, j)) tv.flags |= kFlagAmbiguousMatch;
      if (!pp) continue;
      const Index partner = pp->partner[static_cast<std::size_t>(j)];
      if (partner == j) {
        tv.flags |= kFlagSelfPaired;
      } else if (std::abs(tv.lambda.imag()) < cfg.collision_threshold) {
        tv.flags |= kFlagNearReal;
        poison(tv.force);
      } else if (variances) {
        tv.expected_force = expected_conjugate_force_general(d, *pp, *variances, j);
      }
    }

    record.steps.push_back(std::move(step));
    prev = std::move(d);
    if (cfg.perturbation) offset += cfg.perturbation->dt * p.cast<Complex>();
  }

  record.events = detect_collisions(record.steps, cfg.collision_threshold, tracked);
  return record;
}

std::vector<CollisionEvent> detect_collisions(const std::vector<StepRecord>& steps, double threshold,
                                              const std::vector<Index>& tracked) {
  std::vector<CollisionEvent> events;
  auto is_tracked = [&](Index j) { return std::find(tracked.begin(), tracked.end(), j) != tracked.end(); };
  auto im_abs = [](const StepRecord& s, Index j) { return std::abs(s.eigenvalues(j).imag()); };

  for (std::size_t k = 0; k < steps.size(); ++k) {
    const StepRecord& step = steps[k];
    const double t_lo = k == 0 ? step.t : steps[k - 1].t;
    const std::size_t first_new = events.size();

    if (!step.partners.empty()) {
      for (Index j : tracked) {
        if (j >= step.eigenvalues.size()) continue;
        if (!(im_abs(step, j) < threshold)) continue;
        if (k > 0 && im_abs(steps[k - 1], j) < threshold) continue;
        // The pair is identified where it was last complex.
        const std::vector<Index>& partners =
            (k > 0 && !steps[k - 1].partners.empty()) ? steps[k - 1].partners : step.partners;
        const Index partner = partners[static_cast<std::size_t>(j)];
        if (partner == j) continue;
        const Index a = std::min(j, partner), b = std::max(j, partner);
        const bool seen = std::any_of(events.begin() + static_cast<std::ptrdiff_t>(first_new), events.end(),
                                      [&](const CollisionEvent& e) { return e.first == a && e.second == b; });
        if (seen) continue;
        events.push_back({t_lo, step.t, a, b, std::min(im_abs(step, a), im_abs(step, b)), CollisionKind::RealAxis});
      }
    }

    if (k == 0) continue;
    for (const auto& [a0, b0] : step.ambiguous_pairs) {
      if (!is_tracked(a0) && !is_tracked(b0)) continue;
      const Index a = std::min(a0, b0), b = std::max(a0, b0);
      const auto& before = steps[k - 1].ambiguous_pairs;
      const bool onset = std::none_of(before.begin(), before.end(), [&](const auto& p) {
        return std::min(p.first, p.second) == a && std::max(p.first, p.second) == b;
      });
      if (!onset) continue;
      auto same = std::find_if(events.begin() + static_cast<std::ptrdiff_t>(first_new), events.end(),
                               [&](const CollisionEvent& e) { return e.first == a && e.second == b; });
      if (same != events.end()) {
        same->kind = CollisionKind::Both;
      } else {
        events.push_back({t_lo, step.t, a, b, std::min(im_abs(step, a), im_abs(step, b)), CollisionKind::Ambiguity});
      }
    }
  }
  return events;
}

}  // namespace eigenforce
