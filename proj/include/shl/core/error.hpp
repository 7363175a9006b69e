#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace shl {

// Base for every error the pipeline raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid configuration value or geometry (rate above native fps, region
// outside the frame, k larger than the data rank, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed input data: empty series, shape mismatch, non-finite values.
class InputError : public Error {
public:
    using Error::Error;
};

// Media could not be opened or decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

// A recording lacks a view (e.g. no audio track). Callers may continue with
// the remaining views.
class ViewUnavailable : public Error {
public:
    using Error::Error;
};

// Text file that does not follow its schema.
class ParseError : public Error {
public:
    using Error::Error;
};

class TrainingDivergence : public Error {
public:
    TrainingDivergence(const std::string& what, int epoch) : Error(what), epoch_(epoch) {}
    int epoch() const noexcept { return epoch_; }

private:
    int epoch_;
};

// A condition the code guarantees was violated anyway.
class InvariantError : public Error {
public:
    using Error::Error;
};

// Pipeline-level failure tagged with the stage that raised it.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace shl
