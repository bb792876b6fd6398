#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resilnet/cascade.hpp"
#include "resilnet/errors.hpp"
#include "resilnet/monte_carlo.hpp"

#include "test_support.hpp"

#include <random>

using namespace resilnet;

namespace {

Network three_node_net(double p_s, std::uint32_t t_r) {
    const auto cfg = testsupport::three_node_config(4, p_s, t_r);
    return build_network(cfg.network, cfg.seed);
}

const SwitchDraw never = [](std::uint32_t, std::uint32_t, std::uint32_t) {
    return 0.999999;
};

} // namespace

TEST_CASE("empty event leaves everything functional") {
    const Network net = three_node_net(0.5, 100);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const SimState st = apply_event(net, {});
    CHECK(compute_cf(st, cf) == 1.0);
    for (const auto f : st.functional) CHECK(f == 1);
}

TEST_CASE("total damage zeroes critical functionality") {
    const Network net = three_node_net(0.5, 100);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const SimState st =
        apply_event(net, {{{1, 0}, {1, 1}, {2, 0}}});
    CHECK(compute_cf(st, cf) == 0.0);
}

TEST_CASE("damaging the active supplier starves the dependent") {
    const Network net = three_node_net(0.5, 100);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const SimState st = apply_event(net, {{{1, 0}}});
    // functional set is exactly {A2}
    CHECK(st.functional[net.global_index({1, 0})] == 0);
    CHECK(st.functional[net.global_index({1, 1})] == 1);
    CHECK(st.functional[net.global_index({2, 0})] == 0);
    CHECK(compute_cf(st, cf) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("unknown event node is an input error") {
    const Network net = three_node_net(0.5, 100);
    CHECK_THROWS_AS(apply_event(net, {{{3, 0}}}), InputError);
}

TEST_CASE("T_R = 0 means instant repair") {
    const Network net = three_node_net(0.5, 0);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const SimState st = apply_event(net, {{{1, 0}}});
    CHECK(compute_cf(st, cf) == 1.0);
}

TEST_CASE("two-node chain: recovery trace [0, 0, 1, 1]") {
    NetworkSpec spec;
    spec.level_counts = {1, 1};
    spec.params = {0.0, 0.5, 2};
    const Network net = build_network(spec, 1);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const Trajectory traj = simulate_run(net, {{{1, 0}}}, 3, cf, never);
    REQUIRE(traj.cf_samples.size() == 4);
    CHECK(traj.cf_samples == std::vector<double>{0.0, 0.0, 1.0, 1.0});
}

TEST_CASE("p_s = 1 switches at the first step") {
    Network net = three_node_net(1.0, 100);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const auto draw = [](std::uint32_t, std::uint32_t, std::uint32_t) {
        return 0.999999; // < 1, so the attempt always succeeds
    };
    const Trajectory traj = simulate_run(net, {{{1, 0}}}, 4, cf, draw);
    const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
    CHECK(traj.cf_samples == std::vector<double>{third, two_thirds, two_thirds,
                                                 two_thirds, two_thirds});
}

TEST_CASE("p_s = 0 never switches; function returns only via recovery") {
    Network net = three_node_net(0.0, 3);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const auto draw = [](std::uint32_t, std::uint32_t, std::uint32_t) {
        return 0.0; // would succeed for any p_s > 0
    };
    const Trajectory traj = simulate_run(net, {{{1, 0}}}, 5, cf, draw);
    const double third = 1.0 / 3.0;
    // A1 recovers at t = 3, B follows in the same step
    CHECK(traj.cf_samples ==
          std::vector<double>{third, third, third, 1.0, 1.0, 1.0});
}

TEST_CASE("oracle trace with fixed draws (0.7 then 0.3) at p_s = 0.5") {
    Network net = three_node_net(0.5, 100);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    const auto draw = [](std::uint32_t, std::uint32_t, std::uint32_t t) {
        return t == 1 ? 0.7 : 0.3; // first attempt fails, second succeeds
    };
    const Trajectory traj = simulate_run(net, {{{1, 0}}}, 4, cf, draw);
    const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
    CHECK(traj.cf_samples ==
          std::vector<double>{third, third, two_thirds, two_thirds, two_thirds});
}

TEST_CASE("a switched-away link stays discarded after recovery") {
    Network net = three_node_net(1.0, 2);
    const CfEvaluator cf({CfMode::FractionAll, {}}, net);
    SimState st = apply_event(net, {{{1, 0}}});
    std::vector<double> samples{compute_cf(st, cf)};
    const auto draw = [](std::uint32_t, std::uint32_t, std::uint32_t) {
        return 0.5;
    };
    for (std::uint32_t t = 1; t <= 4; ++t) step(st, net, draw, cf, samples);
    // B switched to A2 at t=1 and did not switch back after A1 recovered
    const std::uint32_t slot = net.slot_begin[net.global_index({2, 0})];
    CHECK(st.active_source[slot] == net.global_index({1, 1}));
    CHECK(st.potential_used[0] == 1);
    CHECK(samples.back() == 1.0);
}

TEST_CASE("weighted critical functionality") {
    const Network net = three_node_net(0.5, 100);
    CfSpec spec;
    spec.mode = CfMode::Weighted;
    spec.weights = {{2.0, 1.0}, {1.0}};
    const CfEvaluator cf(spec, net);
    // functional = {A1} only
    std::vector<std::uint8_t> functional = {1, 0, 0};
    CHECK(cf(functional) == 0.5); // 2 / 4

    CfSpec zero;
    zero.mode = CfMode::Weighted;
    zero.weights = {{0.0, 0.0}, {0.0}};
    CHECK_THROWS_AS(CfEvaluator(zero, net), InputError);

    CfSpec misshaped;
    misshaped.mode = CfMode::Weighted;
    misshaped.weights = {{1.0, 1.0}};
    CHECK_THROWS_AS(CfEvaluator(misshaped, net), InputError);
}

TEST_CASE("fraction_bottom counts only the lowest level") {
    const Network net = three_node_net(0.5, 100);
    const CfEvaluator cf({CfMode::FractionBottom, {}}, net);
    const SimState st = apply_event(net, {{{1, 0}}});
    CHECK(compute_cf(st, cf) == 0.0); // B is starved
    const SimState ok = apply_event(net, {{{1, 1}}});
    CHECK(compute_cf(ok, cf) == 1.0); // B's supplier is A1, still functional
}

TEST_CASE("property: single-event trajectories recover monotonically") {
    std::mt19937_64 gen(31337);
    for (int round = 0; round < 300; ++round) {
        const auto cfg = testsupport::random_config(gen);
        const Network net = build_network(cfg.network, cfg.seed);
        const CfEvaluator cf(cfg.cf, net);
        validate_event_model(cfg.event_model, net);
        const auto events_key = rng::derive_key(cfg.seed, rng::Stream::Events);
        const auto switch_key =
            rng::derive_key(cfg.seed, rng::Stream::Switching);
        const auto ev = sample_event(cfg.event_model, net, events_key, 0);
        const auto traj = simulate_run(net, ev, cfg.steps, cf,
                                       keyed_switch_draw(switch_key, 0));
        for (std::size_t t = 1; t < traj.cf_samples.size(); ++t) {
            REQUIRE(traj.cf_samples[t] >= traj.cf_samples[t - 1]);
            REQUIRE(traj.cf_samples[t] >= 0.0);
            REQUIRE(traj.cf_samples[t] <= 1.0);
        }
    }
}

TEST_CASE("property: raising p_s never lowers any CF sample") {
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    for (int round = 0; round < 200; ++round) {
        auto cfg = testsupport::random_config(gen);
        double lo = prob(gen), hi = prob(gen);
        if (lo > hi) std::swap(lo, hi);

        cfg.network.params.p_s = lo;
        const Network net_lo = build_network(cfg.network, cfg.seed);
        cfg.network.params.p_s = hi;
        const Network net_hi = build_network(cfg.network, cfg.seed);

        const CfEvaluator cf_lo(cfg.cf, net_lo);
        const CfEvaluator cf_hi(cfg.cf, net_hi);
        const auto events_key = rng::derive_key(cfg.seed, rng::Stream::Events);
        const auto switch_key =
            rng::derive_key(cfg.seed, rng::Stream::Switching);
        const auto ev = sample_event(cfg.event_model, net_lo, events_key, 0);
        const auto draw = keyed_switch_draw(switch_key, 0);
        const auto t_lo = simulate_run(net_lo, ev, cfg.steps, cf_lo, draw);
        const auto t_hi = simulate_run(net_hi, ev, cfg.steps, cf_hi, draw);
        for (std::size_t t = 0; t < t_lo.cf_samples.size(); ++t)
            REQUIRE(t_hi.cf_samples[t] >= t_lo.cf_samples[t]);
    }
}

TEST_CASE("identical inputs give identical trajectories") {
    std::mt19937_64 gen(4);
    const auto cfg = testsupport::random_config(gen);
    const Network net = build_network(cfg.network, cfg.seed);
    const CfEvaluator cf(cfg.cf, net);
    const auto events_key = rng::derive_key(cfg.seed, rng::Stream::Events);
    const auto switch_key = rng::derive_key(cfg.seed, rng::Stream::Switching);
    const auto ev = sample_event(cfg.event_model, net, events_key, 3);
    const auto a = simulate_run(net, ev, cfg.steps, cf,
                                keyed_switch_draw(switch_key, 3));
    const auto b = simulate_run(net, ev, cfg.steps, cf,
                                keyed_switch_draw(switch_key, 3));
    CHECK(a.cf_samples == b.cf_samples);
}
