#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soundvi/model.hpp"

namespace soundvi {

enum class ModelKind { MC, MDP };

/// Transition rows as read from a .tra file, grouped by (state, choice).
struct TransitionRows {
    ModelKind kind = ModelKind::MC;
    std::size_t num_states = 0;
    /// row_groups[s][c] holds the transitions of choice c at state s.
    std::vector<std::vector<RawChoice>> row_groups;
};

/// Labels parsed from a .lab file; initial_state comes from the "init" label.
struct LabelData {
    LabelMap labels;
    StateIndex initial_state = 0;
};

struct ModelBundle {
    SparseModel model;
    ModelKind kind = ModelKind::MC;
    std::filesystem::path transitions_path;
    std::filesystem::path labels_path;
    std::optional<std::filesystem::path> state_rewards_path;
    std::optional<std::filesystem::path> transition_rewards_path;
};

/// "<numStates> <numTransitions>" header, then "<from> <to> <prob>" lines.
TransitionRows parse_mc_tra(std::string_view text);

/// "<numStates> <numChoices> <numTransitions>" header, then
/// "<from> <choice> <to> <prob> [action]" lines.
TransitionRows parse_mdp_tra(std::string_view text);

/// Dispatches on header arity (2 numbers: MC, 3 numbers: MDP).
TransitionRows parse_tra(std::string_view text);

/// `0="init" 1="goal"` declaration line, then "<state>: <id> <id> ..." lines.
LabelData parse_labels(std::string_view text, std::size_t num_states);

/// Per-choice rewards rho(s,a) = state_reward(s) + choice_reward(s,a).
/// State lines are "<state> <reward>", choice lines "<from> <choice> <reward>".
std::vector<double> parse_rewards(SparseModel const& model, std::optional<std::string_view> state_rewards,
                                  std::optional<std::string_view> transition_rewards);

/// Returns a copy of model with the given per-choice rewards.
SparseModel with_rewards(SparseModel const& model, std::vector<double> const& rewards);

ModelBundle load_model(std::filesystem::path const& tra, std::filesystem::path const& lab,
                       std::optional<std::filesystem::path> const& state_rewards = std::nullopt,
                       std::optional<std::filesystem::path> const& transition_rewards = std::nullopt);

/// Writers emitting the grammar accepted by the parsers (17 significant digits).
std::string write_tra(SparseModel const& model, ModelKind kind);
std::string write_labels(SparseModel const& model);
/// Choice rewards in "<from> <choice> <reward>" form; zero rewards omitted.
std::string write_transition_rewards(SparseModel const& model);

std::string read_file(std::filesystem::path const& path);

}  // namespace soundvi
