#pragma once

#include "resilnet/network.hpp"
#include "resilnet/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace resilnet {

// Set of nodes damaged at t = 0.
struct AdverseEvent {
    std::vector<NodeId> nodes;
};

enum class CfMode : std::uint8_t { FractionAll, FractionBottom, Weighted };

// Stakeholder definition of critical functionality.
struct CfSpec {
    CfMode mode = CfMode::FractionAll;
    std::vector<std::vector<double>> weights; // per level, Weighted only
};

// CfSpec validated against a concrete network, with flattened weights.
class CfEvaluator {
public:
    CfEvaluator(const CfSpec& spec, const Network& net);

    double operator()(const std::vector<std::uint8_t>& functional) const;
    CfMode mode() const { return mode_; }

private:
    CfMode mode_;
    std::size_t node_count_ = 0;
    std::size_t bottom_begin_ = 0;
    std::size_t bottom_count_ = 0;
    std::vector<double> weights_;
    double total_weight_ = 0.0;
};

// Evolving state of one run. A node is damaged while downtime > 0;
// functional flags are recomputed top-down each step. active_source and
// potential_used start from the network wiring and mutate via switching.
struct SimState {
    std::vector<std::uint8_t> operable;
    std::vector<std::uint32_t> downtime;
    std::vector<std::uint8_t> functional;
    std::vector<std::uint32_t> active_source; // per slot
    std::vector<std::uint8_t> potential_used; // per potential CSR entry
    std::uint32_t t = 0;
};

// Per-run critical functionality samples, one per step t = 0..steps.
struct Trajectory {
    std::vector<double> cf_samples;
    std::uint32_t steps = 0;
    CfMode cf_mode = CfMode::FractionAll;
};

// Switching draw source keyed by (node, required level, step); the run
// is baked into the closure. Keyed draws make trajectories independent
// of evaluation order and couple runs across p_s values.
using SwitchDraw =
    std::function<double(std::uint32_t node, std::uint32_t level, std::uint32_t step)>;

SwitchDraw keyed_switch_draw(const rng::Key& switching_key, std::uint64_t run);

// Damages the event's nodes (downtime = T_R; T_R = 0 means the node is
// repaired instantly and never leaves the operable state), computes the
// initial functional flags, t = 0. Throws InputError on unknown node ids.
SimState apply_event(const Network& net, const AdverseEvent& ev);

// One eligible switch attempt: replace the supply of `slot` with the
// potential candidate at CSR position `candidate` (the lowest-ordinal
// eligible one).
struct SwitchAttempt {
    std::uint32_t slot;
    std::uint32_t candidate; // CSR position consumed by the switch
    std::uint32_t source;    // global index of the new supplier
    std::uint32_t node;
    std::uint32_t level;
};

// Step phases, exposed so the exact enumerator can branch on switch
// outcomes while sharing one set of semantics.
void recover(SimState& state);
// Reads the functional flags as left by the previous step: a (node,
// required level) pair attempts a switch iff the node is operable, its
// active source was non-functional, and at least one unused potential
// candidate was functional. Damaged nodes neither switch nor qualify as
// candidates.
std::vector<SwitchAttempt> collect_attempts(const SimState& state,
                                            const Network& net);
// Consumes the candidate and discards the old active link.
void apply_switch(SimState& state, const SwitchAttempt& attempt);
void propagate(SimState& state, const Network& net);

double compute_cf(const SimState& state, const CfEvaluator& cf);

// Advances one step: recovery, switching (success iff draw < p_s),
// propagation, then appends the measured CF to `samples`.
void step(SimState& state, const Network& net, const SwitchDraw& draw,
          const CfEvaluator& cf, std::vector<double>& samples);

// Full run: apply_event, measure t = 0, then `steps` step() calls.
Trajectory simulate_run(const Network& net, const AdverseEvent& ev,
                        std::uint32_t steps, const CfEvaluator& cf,
                        const SwitchDraw& draw);

} // namespace resilnet
