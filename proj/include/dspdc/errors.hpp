#pragma once

#include <stdexcept>
#include <string>

namespace dspdc {

// Enumeration/materialization request exceeds the configured cap.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative numeric routine failed to converge within its budget.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested operation has no definition for the given object (e.g. the
// conjugate of the PSD-cone regularizer).
struct unsupported_operation : std::runtime_error {
    explicit unsupported_operation(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant violated (maintained-product drift, corrupt state).
struct consistency_error : std::logic_error {
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

// Malformed input file; carries a 1-based line number when known.
struct parse_error : std::runtime_error {
    parse_error(const std::string& what, std::size_t line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    explicit parse_error(const std::string& what) : std::runtime_error(what), line(0) {}
    std::size_t line;
};

// Experiment configuration rejected before any run starts.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dspdc
