// The measure side of the pressure theory: the objective
// h_mu(T, U) + E(mu) over stationary Markov measures, a derivative-free
// maximizer over memory-k chains (via higher-block recoding), and the
// ergodic-approximation check behind the abundance hypothesis.
//
// Everything here produces lower bounds on the supremum; upper bounds
// come only from the pressure side.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pressurelab/cover.hpp"
#include "pressurelab/energy.hpp"
#include "pressurelab/entropy.hpp"
#include "pressurelab/measure.hpp"
#include "pressurelab/pressure.hpp"
#include "pressurelab/subshift.hpp"

namespace plab {

/// True iff U is exactly the partition into 1-cylinders (one element
/// per symbol); then the cover entropy rate of a Markov measure has the
/// standard closed form and no truncation is involved.
bool is_one_cylinder_partition(const Subshift& S, const Cover& U);

/// h_mu(T, U) (closed form for the 1-cylinder partition, otherwise the
/// cover entropy rate truncated at n_ent) plus E(mu).
double objective(const Subshift& S, const MarkovMeasure& mu, const Cover& U,
                 const EnergyFunctional& E, int n_ent = 6);

struct OptimizeOptions {
  int starts = 8;
  int max_sweeps = 60;          // coordinate passes per start
  std::int64_t budget = 200000;  // objective evaluations across all starts
  std::uint64_t seed = 1;
  int n_ent = 6;                // entropy truncation for non-partition covers
  int golden_iters = 40;        // per 1-D line search
  // Optional pressure side for the rate window and gap; 0 disables.
  int pressure_n_lo = 0;
  int pressure_n_hi = 0;
  Precision prec = Precision::Float;
  SearchCaps caps;
};

struct VariationalReport {
  MarkovMeasure best_measure;   // on the k-block recoding when memory > 1
  std::optional<HigherBlock> block_system;
  int memory = 1;
  double best_value = 0;
  double entropy_term = 0;
  double energy_term = 0;
  int entropy_truncation = 0;   // 0 means the closed form was used
  std::uint64_t evaluations = 0;
  bool budget_exhausted = false;
  // Trailing-window band of p1-rates when the pressure side was run.
  std::optional<RateBand> pressure_rate_window;
  double gap = 0;               // band low minus best_value, when available
  std::string abundance_note;
};

/// Maximize the objective over memory-k Markov measures by multi-start
/// projected coordinate ascent with golden-section line searches on
/// transition-row mass moves.  Deterministic for a fixed seed.  The
/// result is a lower bound for the true supremum.
VariationalReport optimize(const Subshift& S, const Cover& U, const EnergyFunctional& E,
                           int memory, const OptimizeOptions& opts = {});

// For each candidate, look for an ergodic (irreducible and aperiodic)
// Markov measure whose objective is within eps of the candidate's:
// the candidate itself when already ergodic, otherwise its recurrent
// component restrictions and blends toward the uniform kernel.
struct AbundanceWitness {
  bool ergodic_already = false;
  std::optional<MarkovMeasure> witness;
  double candidate_value = 0;
  double witness_value = 0;
  bool ok = false;
};
struct AbundanceReport {
  bool structurally_mixing = false;  // mixing SFT: blends are always ergodic
  std::string note;
  std::vector<AbundanceWitness> rows;
  bool all_ok = true;
};
AbundanceReport abundance_check(const Subshift& S, const std::vector<MarkovMeasure>& candidates,
                                const Cover& U, const EnergyFunctional& E, double eps,
                                int n_ent = 6);

}  // namespace plab
