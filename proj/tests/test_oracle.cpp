#include <gtest/gtest.h>

#include "random_models.hpp"
#include "soundvi/errors.hpp"
#include "soundvi/oracle.hpp"

namespace soundvi {
namespace {

TEST(Oracle, ReferenceModelValues) {
    auto const a = oracle_solve(testing::leaky_chain(), testing::leaky_goal(), Objective::Probability, Direction::Maximize);
    EXPECT_NEAR(a[0], 0.75, 1e-12);
    auto const b = oracle_solve(testing::leaky_mdp(), testing::leaky_goal(), Objective::Probability, Direction::Maximize);
    EXPECT_NEAR(b[0], 0.75, 1e-12);
    auto const c = oracle_solve(testing::split_mdp(), testing::split_goal(), Objective::Probability, Direction::Maximize);
    EXPECT_NEAR(c[0], 0.5, 1e-12);
    EXPECT_NEAR(c[1], 0.19, 1e-12);
    EXPECT_EQ(c[5], 0.0);
    EXPECT_EQ(c[3], 1.0);
}

TEST(Oracle, AbsorbingGoalInitialState) {
    auto const v = oracle_solve(testing::leaky_chain(), StateSet(5, {0}), Objective::Probability, Direction::Minimize);
    EXPECT_EQ(v[0], 1.0);
}

TEST(Oracle, RewardChainGeometricSeries) {
    RawModel raw;
    raw.num_states = 2;
    raw.row_groups = {{RawChoice{{{0, 0.5}, {1, 0.5}}, 1.0, {}}}, {RawChoice{{{1, 1.0}}, 0.0, {}}}};
    auto const v = oracle_solve(validate_model(raw), StateSet(2, {1}), Objective::Reward, Direction::Maximize);
    EXPECT_NEAR(v[0], 2.0, 1e-12);
    EXPECT_EQ(v[1], 0.0);
}

TEST(Oracle, RewardRequiresContracting) {
    EXPECT_FALSE(oracle_contracting(testing::leaky_chain(), testing::leaky_goal()));
    EXPECT_TRUE(oracle_contracting(testing::leaky_chain(), StateSet(5, {3, 4})));
    try {
        oracle_solve(testing::leaky_chain(), testing::leaky_goal(), Objective::Reward, Direction::Maximize);
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotContracting);
    }
}

TEST(Oracle, RejectsLargeModels) {
    RawModel raw;
    raw.num_states = 13;
    for (StateIndex s = 0; s < 13; ++s) {
        raw.row_groups.push_back({RawChoice{{{s, 1.0}}, 0.0, {}}});
    }
    auto const big = validate_model(raw);
    try {
        oracle_solve(big, StateSet(13, {0}), Objective::Probability, Direction::Maximize);
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLargeForOracle);
    }

    RawModel wide;
    wide.num_states = 8;
    for (StateIndex s = 0; s < 8; ++s) {
        wide.row_groups.push_back({RawChoice{{{s, 1.0}}, 0.0, {}}, RawChoice{{{0, 1.0}}, 0.0, {}},
                                   RawChoice{{{6, 1.0}}, 0.0, {}}, RawChoice{{{1, 1.0}}, 0.0, {}}});
    }
    try {
        oracle_solve(validate_model(wide), StateSet(8, {7}), Objective::Probability, Direction::Maximize);
        FAIL();
    } catch (Error const& e) {
        EXPECT_EQ(e.code(), ErrorCode::TooLargeForOracle);
    }
}

}  // namespace
}  // namespace soundvi
