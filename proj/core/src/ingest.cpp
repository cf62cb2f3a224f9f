#include "soundvi/ingest.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "soundvi/errors.hpp"

namespace soundvi {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

std::string_view trim(std::string_view s) {
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto const start = s.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) {
            break;
        }
        auto end = s.find_first_of(" \t\r", start);
        if (end == std::string_view::npos) {
            end = s.size();
        }
        tokens.push_back(s.substr(start, end - start));
        pos = end;
    }
    return tokens;
}

// Non-blank, non-comment lines.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++number;
        auto line = trim(text.substr(pos, end - pos));
        if (!line.empty() && line.front() != '#') {
            lines.push_back(Line{number, split_ws(line)});
        }
        pos = end + 1;
    }
    return lines;
}

[[noreturn]] void parse_fail(std::size_t line, std::string const& message) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + message);
}

std::size_t to_index(std::string_view token, std::size_t line) {
    std::size_t value = 0;
    auto const* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        parse_fail(line, "expected a non-negative integer, got '" + std::string(token) + "'");
    }
    return value;
}

double to_real(std::string_view token, std::size_t line) {
    double value = 0.0;
    auto const* begin = token.data();
    auto const* end = token.data() + token.size();
    if (begin != end && *begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        parse_fail(line, "expected a decimal number, got '" + std::string(token) + "'");
    }
    return value;
}

std::string format_real(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void check_source(std::size_t from, std::size_t num_states, std::size_t line) {
    if (from >= num_states) {
        parse_fail(line, "source state " + std::to_string(from) + " out of range (" + std::to_string(num_states) +
                             " states)");
    }
}

}  // namespace

TransitionRows parse_mc_tra(std::string_view text) {
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::ParseError, "missing header line");
    }
    auto const& header = lines.front();
    if (header.tokens.size() != 2) {
        parse_fail(header.number, "MC header must be '<numStates> <numTransitions>'");
    }
    TransitionRows rows;
    rows.kind = ModelKind::MC;
    rows.num_states = to_index(header.tokens[0], header.number);
    auto const declared_transitions = to_index(header.tokens[1], header.number);
    rows.row_groups.resize(rows.num_states);

    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto const& line = lines[i];
        if (line.tokens.size() != 3) {
            parse_fail(line.number, "expected '<from> <to> <prob>'");
        }
        auto const from = to_index(line.tokens[0], line.number);
        auto const to = to_index(line.tokens[1], line.number);
        auto const prob = to_real(line.tokens[2], line.number);
        check_source(from, rows.num_states, line.number);
        auto& group = rows.row_groups[from];
        if (group.empty()) {
            group.emplace_back();
        }
        group.front().transitions.push_back(Transition{to, prob});
    }
    if (lines.size() - 1 != declared_transitions) {
        throw Error(ErrorCode::HeaderMismatch, "header declares " + std::to_string(declared_transitions) +
                                                   " transitions, file has " + std::to_string(lines.size() - 1));
    }
    return rows;
}

TransitionRows parse_mdp_tra(std::string_view text) {
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::ParseError, "missing header line");
    }
    auto const& header = lines.front();
    if (header.tokens.size() != 3) {
        parse_fail(header.number, "MDP header must be '<numStates> <numChoices> <numTransitions>'");
    }
    TransitionRows rows;
    rows.kind = ModelKind::MDP;
    rows.num_states = to_index(header.tokens[0], header.number);
    auto const declared_choices = to_index(header.tokens[1], header.number);
    auto const declared_transitions = to_index(header.tokens[2], header.number);

    std::vector<std::map<std::size_t, RawChoice>> grouped(rows.num_states);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto const& line = lines[i];
        if (line.tokens.size() != 4 && line.tokens.size() != 5) {
            parse_fail(line.number, "expected '<from> <choice> <to> <prob> [action]'");
        }
        auto const from = to_index(line.tokens[0], line.number);
        auto const choice = to_index(line.tokens[1], line.number);
        auto const to = to_index(line.tokens[2], line.number);
        auto const prob = to_real(line.tokens[3], line.number);
        check_source(from, rows.num_states, line.number);
        auto& raw = grouped[from][choice];
        raw.transitions.push_back(Transition{to, prob});
        if (line.tokens.size() == 5 && raw.action.empty()) {
            raw.action = std::string(line.tokens[4]);
        }
    }

    std::size_t total_choices = 0;
    rows.row_groups.resize(rows.num_states);
    for (StateIndex s = 0; s < rows.num_states; ++s) {
        std::size_t expected = 0;
        for (auto& [choice, raw] : grouped[s]) {
            if (choice != expected) {
                throw Error(ErrorCode::NonContiguousChoices, "state " + std::to_string(s) + " is missing choice " +
                                                                 std::to_string(expected));
            }
            rows.row_groups[s].push_back(std::move(raw));
            ++expected;
        }
        total_choices += expected;
    }
    if (total_choices != declared_choices) {
        throw Error(ErrorCode::HeaderMismatch, "header declares " + std::to_string(declared_choices) +
                                                   " choices, file has " + std::to_string(total_choices));
    }
    if (lines.size() - 1 != declared_transitions) {
        throw Error(ErrorCode::HeaderMismatch, "header declares " + std::to_string(declared_transitions) +
                                                   " transitions, file has " + std::to_string(lines.size() - 1));
    }
    return rows;
}

TransitionRows parse_tra(std::string_view text) {
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::ParseError, "missing header line");
    }
    switch (lines.front().tokens.size()) {
        case 2:
            return parse_mc_tra(text);
        case 3:
            return parse_mdp_tra(text);
        default:
            parse_fail(lines.front().number, "header must contain 2 (MC) or 3 (MDP) numbers");
    }
}

LabelData parse_labels(std::string_view text, std::size_t num_states) {
    auto lines = content_lines(text);
    if (lines.empty()) {
        throw Error(ErrorCode::MissingInit, "label file is empty");
    }

    std::map<std::size_t, std::string> names;
    LabelData data;
    for (auto token : lines.front().tokens) {
        auto const eq = token.find('=');
        if (eq == std::string_view::npos || token.size() < eq + 3 || token[eq + 1] != '"' || token.back() != '"') {
            parse_fail(lines.front().number, "expected <id>=\"<name>\", got '" + std::string(token) + "'");
        }
        auto const id = to_index(token.substr(0, eq), lines.front().number);
        auto name = std::string(token.substr(eq + 2, token.size() - eq - 3));
        names[id] = name;
        data.labels.emplace(std::move(name), StateSet(num_states));
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto const& line = lines[i];
        auto const& head = line.tokens.front();
        if (head.size() < 2 || head.back() != ':') {
            parse_fail(line.number, "expected '<state>: <id> ...'");
        }
        auto const state = to_index(head.substr(0, head.size() - 1), line.number);
        if (state >= num_states) {
            parse_fail(line.number, "state " + std::to_string(state) + " out of range");
        }
        for (std::size_t t = 1; t < line.tokens.size(); ++t) {
            auto const id = to_index(line.tokens[t], line.number);
            auto it = names.find(id);
            if (it == names.end()) {
                throw Error(ErrorCode::UnknownLabelId,
                            "line " + std::to_string(line.number) + ": label id " + std::to_string(id) + " not declared");
            }
            data.labels[it->second].set(state);
        }
    }

    auto init = data.labels.find("init");
    if (init == data.labels.end() || init->second.empty()) {
        throw Error(ErrorCode::MissingInit, "no state carries the 'init' label");
    }
    if (init->second.count() > 1) {
        throw Error(ErrorCode::MultipleInitStates,
                    std::to_string(init->second.count()) + " states carry the 'init' label");
    }
    data.initial_state = init->second.indices().front();
    return data;
}

std::vector<double> parse_rewards(SparseModel const& model, std::optional<std::string_view> state_rewards,
                                  std::optional<std::string_view> transition_rewards) {
    std::vector<double> rewards(model.num_choices(), 0.0);
    if (state_rewards) {
        for (auto const& line : content_lines(*state_rewards)) {
            if (line.tokens.size() != 2) {
                parse_fail(line.number, "expected '<state> <reward>'");
            }
            auto const s = to_index(line.tokens[0], line.number);
            auto const r = to_real(line.tokens[1], line.number);
            if (s >= model.num_states()) {
                throw Error(ErrorCode::DanglingTarget, "state reward for unknown state " + std::to_string(s));
            }
            for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
                rewards[c] += r;
            }
        }
    }
    if (transition_rewards) {
        for (auto const& line : content_lines(*transition_rewards)) {
            if (line.tokens.size() != 3) {
                parse_fail(line.number, "expected '<from> <choice> <reward>'");
            }
            auto const s = to_index(line.tokens[0], line.number);
            auto const local = to_index(line.tokens[1], line.number);
            auto const r = to_real(line.tokens[2], line.number);
            if (s >= model.num_states() || local >= model.num_choices(s)) {
                throw Error(ErrorCode::DanglingTarget, "choice reward for unknown choice (" + std::to_string(s) + ", " +
                                                           std::to_string(local) + ")");
            }
            rewards[model.first_choice(s) + local] += r;
        }
    }
    return rewards;
}

SparseModel with_rewards(SparseModel const& model, std::vector<double> const& rewards) {
    RawModel raw = model.to_raw();
    ChoiceIndex c = 0;
    for (auto& group : raw.row_groups) {
        for (auto& choice : group) {
            choice.reward = rewards.at(c++);
        }
    }
    return validate_model(raw);
}

std::string read_file(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ModelBundle load_model(std::filesystem::path const& tra, std::filesystem::path const& lab,
                       std::optional<std::filesystem::path> const& state_rewards,
                       std::optional<std::filesystem::path> const& transition_rewards) {
    auto rows = parse_tra(read_file(tra));
    auto labels = parse_labels(read_file(lab), rows.num_states);

    RawModel raw;
    raw.num_states = rows.num_states;
    raw.initial_state = labels.initial_state;
    raw.row_groups = std::move(rows.row_groups);
    raw.labels = std::move(labels.labels);
    auto model = validate_model(raw);

    if (state_rewards || transition_rewards) {
        std::optional<std::string> srew;
        std::optional<std::string> trew;
        if (state_rewards) {
            srew = read_file(*state_rewards);
        }
        if (transition_rewards) {
            trew = read_file(*transition_rewards);
        }
        auto rewards = parse_rewards(model, srew ? std::optional<std::string_view>(*srew) : std::nullopt,
                                     trew ? std::optional<std::string_view>(*trew) : std::nullopt);
        model = with_rewards(model, rewards);
    }
    return ModelBundle{std::move(model), rows.kind, tra, lab, state_rewards, transition_rewards};
}

std::string write_tra(SparseModel const& model, ModelKind kind) {
    std::ostringstream out;
    if (kind == ModelKind::MC) {
        if (!model.is_mc()) {
            throw Error(ErrorCode::InvalidConfig, "cannot write an MDP in MC format");
        }
        out << model.num_states() << ' ' << model.num_transitions() << '\n';
    } else {
        out << model.num_states() << ' ' << model.num_choices() << ' ' << model.num_transitions() << '\n';
    }
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            for (auto const& t : model.transitions(c)) {
                out << s << ' ';
                if (kind == ModelKind::MDP) {
                    out << (c - model.first_choice(s)) << ' ';
                }
                out << t.target << ' ' << format_real(t.probability);
                if (kind == ModelKind::MDP && !model.action(c).empty()) {
                    out << ' ' << model.action(c);
                }
                out << '\n';
            }
        }
    }
    return out.str();
}

std::string write_labels(SparseModel const& model) {
    std::ostringstream out;
    std::vector<std::string const*> names;
    for (auto const& [name, states] : model.labels()) {
        out << (names.empty() ? "" : " ") << names.size() << "=\"" << name << '"';
        names.push_back(&name);
    }
    out << '\n';
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        std::string ids;
        for (std::size_t id = 0; id < names.size(); ++id) {
            if (model.label(*names[id]).test(s)) {
                ids += ' ' + std::to_string(id);
            }
        }
        if (!ids.empty()) {
            out << s << ':' << ids << '\n';
        }
    }
    return out.str();
}

std::string write_transition_rewards(SparseModel const& model) {
    std::ostringstream out;
    for (StateIndex s = 0; s < model.num_states(); ++s) {
        for (auto c = model.first_choice(s); c < model.end_choice(s); ++c) {
            if (model.reward(c) != 0.0) {
                out << s << ' ' << (c - model.first_choice(s)) << ' ' << format_real(model.reward(c)) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace soundvi
