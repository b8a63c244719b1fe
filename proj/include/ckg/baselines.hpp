#pragma once

#include <cstdint>

#include "ckg/acquisition_ckg.hpp"
#include "ckg/feasibility.hpp"

namespace ckg {

enum class BaselineKind { cEI, NEI, pKG, cTS };

// Closed-form expected improvement over `incumbent` (maximisation).
double expected_improvement(double mean, double std, double incumbent);

// EI times the probability of feasibility. An incumbent of -infinity
// (no feasible observation yet) degenerates to pure PF maximisation.
double cei_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x, double incumbent);

// Noisy EI: cEI averaged over joint posterior samples of the noiseless
// objective/constraint values at the observed inputs, each sample defining
// its own feasible incumbent.
double nei_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x, int sample_count, std::uint64_t seed);

// Penalised KG: standard hybrid-discretisation KG at x_new times PF^n(x_new).
double pkg_value(const GpModel& objective, const ConstraintEnsemble& ensemble,
                 const Vector& x_new, const Discretization& disc, const Vector& x_r);

// Constrained Thompson sampling: one joint posterior realisation at LHS
// candidates; argmax of the sampled objective over sampled-feasible
// candidates, else the minimum-total-violation candidate.
Vector cts_next(const GpModel& objective, const ConstraintEnsemble& ensemble,
                const BoxDomain& domain, int candidate_count, std::uint64_t seed);

} // namespace ckg
