#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace soundvi {

enum class ErrorCode {
    // model validation
    RowSumError,
    DanglingTarget,
    EmptyRowGroup,
    NegativeProbability,
    InvalidChoiceIndex,
    // ingest
    HeaderMismatch,
    ParseError,
    NonContiguousChoices,
    UnknownLabelId,
    MultipleInitStates,
    MissingInit,
    UnknownLabel,
    Io,
    // graph analysis and solving
    MecContainsGoal,
    NotContracting,
    RewardOnMec,
    IterationLimit,
    MissingRewardBounds,
    InvalidConfig,
    TooLargeForOracle,
    // reporting
    MalformedCsv,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by malformed input (files, models, arguments) as
/// opposed to errors raised while analysing or solving a well-formed model.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& message);

    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

}  // namespace soundvi
