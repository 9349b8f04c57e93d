#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lgs {

enum class errc {
    parameter,
    precondition,
    generation_failure,
    resource,
    numeric,
    non_termination,
    stuck,
    verification,
    io,
    internal
};

// Error with a machine-readable kind and the pipeline stage that raised it.
class error : public std::runtime_error {
public:
    error(errc code, std::string stage, const std::string& what)
        : std::runtime_error(stage.empty() ? what : stage + ": " + what),
          code_(code),
          stage_(std::move(stage)) {}

    errc code() const { return code_; }
    const std::string& stage() const { return stage_; }

private:
    errc code_;
    std::string stage_;
};

[[noreturn]] inline void fail(errc code, const std::string& stage, const std::string& what) {
    throw error(code, stage, what);
}

} // namespace lgs
