#include <gtest/gtest.h>

#include <random>

#include "random_models.hpp"
#include "soundvi/errors.hpp"
#include "soundvi/model.hpp"

namespace soundvi {
namespace {

using testing::leaky_chain;
using testing::leaky_mdp;
using testing::split_mdp;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (Error const& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::ParseError;
}

RawModel single_state(std::vector<Transition> row) {
    RawModel raw;
    raw.num_states = 1;
    raw.row_groups = {{RawChoice{std::move(row), 0.0, {}}}};
    return raw;
}

TEST(StateSet, SetAlgebra) {
    StateSet a(6, {0, 2, 4});
    StateSet b(6, {2, 3});
    EXPECT_EQ((a | b).indices(), (std::vector<StateIndex>{0, 2, 3, 4}));
    EXPECT_EQ((a & b).indices(), (std::vector<StateIndex>{2}));
    EXPECT_EQ(a.complement().indices(), (std::vector<StateIndex>{1, 3, 5}));
    EXPECT_TRUE(a.intersects(b));
    EXPECT_FALSE(StateSet(6, {2}).intersects(StateSet(6, {3})));
    EXPECT_TRUE(StateSet(6, {2}).is_subset_of(a));
    EXPECT_EQ(a.count(), 3u);
    EXPECT_TRUE(StateSet(3).empty());
    EXPECT_TRUE(StateSet(3, true).all());
}

TEST(ValidateModel, LeakyChainIsFiveStateChain) {
    auto const m = leaky_chain();
    EXPECT_EQ(m.num_states(), 5u);
    EXPECT_EQ(m.num_transitions(), 9u);
    EXPECT_TRUE(m.is_mc());
    auto row = m.transitions(m.first_choice(2));
    ASSERT_EQ(row.size(), 3u);
    EXPECT_EQ(row[0].target, 0u);
    EXPECT_EQ(row[1].target, 3u);
    EXPECT_EQ(row[2].target, 4u);
}

TEST(ValidateModel, SingleAbsorbingState) {
    auto const m = validate_model(single_state({{0, 1.0}}));
    EXPECT_EQ(m.num_states(), 1u);
    EXPECT_TRUE(m.is_mc());
}

TEST(ValidateModel, RejectsBadRows) {
    EXPECT_EQ(code_of([] { validate_model(single_state({{0, 0.9}})); }), ErrorCode::RowSumError);
    EXPECT_EQ(code_of([] { validate_model(single_state({{1, 1.0}})); }), ErrorCode::DanglingTarget);
    EXPECT_EQ(code_of([] { validate_model(single_state({{0, 1.5}, {0, -0.5}})); }), ErrorCode::NegativeProbability);
    RawModel empty;
    empty.num_states = 1;
    empty.row_groups = {{}};
    EXPECT_EQ(code_of([&] { validate_model(empty); }), ErrorCode::EmptyRowGroup);
}

TEST(ValidateModel, MergesDuplicatesAndRenormalizes) {
    RawModel raw;
    raw.num_states = 2;
    raw.row_groups = {{RawChoice{{{1, 0.25}, {0, 0.5}, {1, 0.2500004}}, 0.0, {}}}, {RawChoice{{{1, 1.0}}, 0.0, {}}}};
    auto const m = validate_model(raw);
    auto row = m.transitions(0);
    ASSERT_EQ(row.size(), 2u);
    EXPECT_EQ(row[0].target, 0u);
    EXPECT_EQ(row[1].target, 1u);
    EXPECT_NEAR(row[0].probability + row[1].probability, 1.0, 1e-15);
    EXPECT_NEAR(row[0].probability, 0.5 / 1.0000004, 1e-15);
}

TEST(ValidateModel, IsIdempotentOnRandomModels) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto const inst = testing::random_instance(rng, i % 2 == 0);
        EXPECT_EQ(validate_model(inst.model.to_raw()), inst.model);
    }
}

TEST(MakeAbsorbing, Examples) {
    auto const m = leaky_chain();
    EXPECT_EQ(make_absorbing(m, StateSet(5, {4})), m);
    EXPECT_EQ(make_absorbing(m, StateSet(5)), m);
    auto const absorbed = make_absorbing(m, StateSet(5, {2}));
    auto row = absorbed.transitions(absorbed.first_choice(2));
    ASSERT_EQ(row.size(), 1u);
    EXPECT_EQ(row[0], (Transition{2, 1.0}));
    EXPECT_EQ(absorbed.reward(absorbed.first_choice(2)), 0.0);
}

TEST(InduceMc, Examples) {
    auto const alpha = induce_mc(leaky_mdp(), Scheduler{{0, 0, 0, 0, 0}});
    auto expected = leaky_chain().to_raw();
    expected.row_groups[0][0].action = "a";
    EXPECT_EQ(alpha, validate_model(expected));

    auto const mc = leaky_chain();
    EXPECT_EQ(induce_mc(mc, Scheduler{{0, 0, 0, 0, 0}}), mc);

    auto const beta = induce_mc(split_mdp(), Scheduler{{1, 0, 0, 0, 0, 0, 0}});
    auto row = beta.transitions(beta.first_choice(0));
    ASSERT_EQ(row.size(), 3u);
    EXPECT_EQ(row[0], (Transition{0, 0.4}));
    EXPECT_EQ(row[1], (Transition{3, 0.3}));
    EXPECT_EQ(row[2], (Transition{5, 0.3}));
}

TEST(InduceMc, RejectsInvalidChoice) {
    EXPECT_EQ(code_of([] { induce_mc(leaky_mdp(), Scheduler{{2, 0, 0, 0, 0}}); }), ErrorCode::InvalidChoiceIndex);
    EXPECT_EQ(code_of([] { induce_mc(leaky_mdp(), Scheduler{{0}}); }), ErrorCode::InvalidChoiceIndex);
}

TEST(Partition, FromGoalAndZero) {
    auto const p = Partition::from(StateSet(5, {4}), StateSet(5, {3}));
    EXPECT_EQ(p.maybe.indices(), (std::vector<StateIndex>{0, 1, 2}));
    EXPECT_EQ(p.num_states(), 5u);
}

}  // namespace
}  // namespace soundvi
