#include "soundvi/errors.hpp"

namespace soundvi {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::RowSumError:
            return "RowSumError";
        case ErrorCode::DanglingTarget:
            return "DanglingTarget";
        case ErrorCode::EmptyRowGroup:
            return "EmptyRowGroup";
        case ErrorCode::NegativeProbability:
            return "NegativeProbability";
        case ErrorCode::InvalidChoiceIndex:
            return "InvalidChoiceIndex";
        case ErrorCode::HeaderMismatch:
            return "HeaderMismatch";
        case ErrorCode::ParseError:
            return "ParseError";
        case ErrorCode::NonContiguousChoices:
            return "NonContiguousChoices";
        case ErrorCode::UnknownLabelId:
            return "UnknownLabelId";
        case ErrorCode::MultipleInitStates:
            return "MultipleInitStates";
        case ErrorCode::MissingInit:
            return "MissingInit";
        case ErrorCode::UnknownLabel:
            return "UnknownLabel";
        case ErrorCode::Io:
            return "Io";
        case ErrorCode::MecContainsGoal:
            return "MecContainsGoal";
        case ErrorCode::NotContracting:
            return "NotContracting";
        case ErrorCode::RewardOnMec:
            return "RewardOnMec";
        case ErrorCode::IterationLimit:
            return "IterationLimit";
        case ErrorCode::MissingRewardBounds:
            return "MissingRewardBounds";
        case ErrorCode::InvalidConfig:
            return "InvalidConfig";
        case ErrorCode::TooLargeForOracle:
            return "TooLargeForOracle";
        case ErrorCode::MalformedCsv:
            return "MalformedCsv";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::RowSumError:
        case ErrorCode::DanglingTarget:
        case ErrorCode::EmptyRowGroup:
        case ErrorCode::NegativeProbability:
        case ErrorCode::InvalidChoiceIndex:
        case ErrorCode::HeaderMismatch:
        case ErrorCode::ParseError:
        case ErrorCode::NonContiguousChoices:
        case ErrorCode::UnknownLabelId:
        case ErrorCode::MultipleInitStates:
        case ErrorCode::MissingInit:
        case ErrorCode::UnknownLabel:
        case ErrorCode::Io:
        case ErrorCode::InvalidConfig:
        case ErrorCode::MalformedCsv:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, std::string const& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace soundvi
