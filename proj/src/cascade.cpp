#include "resilnet/cascade.hpp"

#include "resilnet/errors.hpp"
#include "resilnet/kernels.hpp"

namespace resilnet {

CfEvaluator::CfEvaluator(const CfSpec& spec, const Network& net)
    : mode_(spec.mode), node_count_(net.node_count()) {
    const auto levels = net.level_count();
    bottom_begin_ = net.level_offset[levels - 1];
    bottom_count_ = net.level_counts[levels - 1];
    if (mode_ != CfMode::Weighted) return;

    if (spec.weights.size() != levels)
        throw InputError("cf.weights: expected one weight list per level");
    for (std::uint32_t lvl = 1; lvl <= levels; ++lvl)
        if (spec.weights[lvl - 1].size() != net.level_counts[lvl - 1])
            throw InputError("cf.weights: level " + std::to_string(lvl) +
                             " has " +
                             std::to_string(spec.weights[lvl - 1].size()) +
                             " weights for " +
                             std::to_string(net.level_counts[lvl - 1]) +
                             " nodes");
    for (const auto& per_level : spec.weights)
        for (const double w : per_level) {
            if (!(w >= 0.0))
                throw InputError("cf.weights: weights must be non-negative");
            weights_.push_back(w);
        }
    total_weight_ = kernels::ops().sum_f64(weights_.data(), weights_.size());
    if (!(total_weight_ > 0.0))
        throw InputError("cf.weights: weights sum to zero");
}

double CfEvaluator::operator()(
    const std::vector<std::uint8_t>& functional) const {
    const auto& k = kernels::ops();
    switch (mode_) {
    case CfMode::FractionAll:
        return static_cast<double>(k.count_true_u8(functional.data(),
                                                   node_count_)) /
               static_cast<double>(node_count_);
    case CfMode::FractionBottom:
        return static_cast<double>(k.count_true_u8(
                   functional.data() + bottom_begin_, bottom_count_)) /
               static_cast<double>(bottom_count_);
    case CfMode::Weighted:
        return k.masked_sum_f64(functional.data(), weights_.data(),
                                node_count_) /
               total_weight_;
    }
    return 0.0;
}

SwitchDraw keyed_switch_draw(const rng::Key& switching_key,
                             std::uint64_t run) {
    return [switching_key, run](std::uint32_t node, std::uint32_t level,
                                std::uint32_t t) {
        return rng::unit(switching_key, run, node,
                         (static_cast<std::uint64_t>(level) << 32) | t);
    };
}

SimState apply_event(const Network& net, const AdverseEvent& ev) {
    const std::uint32_t n = net.node_count();
    SimState st;
    st.operable.assign(n, 1);
    st.downtime.assign(n, 0);
    st.functional.assign(n, 0);
    st.active_source = net.active_source;
    st.potential_used.assign(net.potential_source.size(), 0);
    st.t = 0;

    for (const auto& id : ev.nodes) {
        if (!net.contains(id))
            throw InputError("event: unknown node " + to_string(id));
        if (net.params.t_r == 0) continue; // instant repair
        const auto g = net.global_index(id);
        st.downtime[g] = net.params.t_r;
        st.operable[g] = 0;
    }
    propagate(st, net);
    return st;
}

void recover(SimState& state) {
    for (std::size_t g = 0; g < state.downtime.size(); ++g)
        if (state.downtime[g] > 0 && --state.downtime[g] == 0)
            state.operable[g] = 1;
}

std::vector<SwitchAttempt> collect_attempts(const SimState& state,
                                            const Network& net) {
    std::vector<SwitchAttempt> attempts;
    const std::uint32_t n = net.node_count();
    for (std::uint32_t g = 0; g < n; ++g) {
        if (!state.operable[g]) continue;
        for (std::uint32_t s = net.slot_begin[g]; s < net.slot_begin[g + 1];
             ++s) {
            if (state.functional[state.active_source[s]]) continue;
            for (std::uint32_t c = net.potential_begin[s];
                 c < net.potential_begin[s + 1]; ++c) {
                if (state.potential_used[c]) continue;
                if (!state.functional[net.potential_source[c]]) continue;
                attempts.push_back(
                    {s, c, net.potential_source[c], g, net.slot_level[s]});
                break; // candidates are ordinal-sorted; first hit wins
            }
        }
    }
    return attempts;
}

void apply_switch(SimState& state, const SwitchAttempt& attempt) {
    state.potential_used[attempt.candidate] = 1;
    state.active_source[attempt.slot] = attempt.source;
}

void propagate(SimState& state, const Network& net) {
    const std::uint32_t n = net.node_count();
    // global index order is level order, so suppliers are already fresh
    for (std::uint32_t g = 0; g < n; ++g) {
        std::uint8_t f = state.operable[g];
        for (std::uint32_t s = net.slot_begin[g];
             f && s < net.slot_begin[g + 1]; ++s)
            f = state.functional[state.active_source[s]];
        state.functional[g] = f;
    }
}

double compute_cf(const SimState& state, const CfEvaluator& cf) {
    return cf(state.functional);
}

void step(SimState& state, const Network& net, const SwitchDraw& draw,
          const CfEvaluator& cf, std::vector<double>& samples) {
    const std::uint32_t t = state.t + 1;
    recover(state);
    for (const auto& a : collect_attempts(state, net))
        if (draw(a.node, a.level, t) < net.params.p_s)
            apply_switch(state, a);
    propagate(state, net);
    samples.push_back(compute_cf(state, cf));
    state.t = t;
}

Trajectory simulate_run(const Network& net, const AdverseEvent& ev,
                        std::uint32_t steps, const CfEvaluator& cf,
                        const SwitchDraw& draw) {
    SimState st = apply_event(net, ev);
    Trajectory traj;
    traj.steps = steps;
    traj.cf_mode = cf.mode();
    traj.cf_samples.reserve(steps + 1);
    traj.cf_samples.push_back(compute_cf(st, cf));
    for (std::uint32_t t = 1; t <= steps; ++t)
        step(st, net, draw, cf, traj.cf_samples);
    return traj;
}

} // namespace resilnet
