#pragma once

#include <stdexcept>
#include <string>

namespace joinguard {

// Failure categories, one per pipeline stage. The CLI prints them as
// "error: <category>: <message>" so scripts can dispatch on the prefix.
enum class ErrorCategory {
    Argument,
    Ingest,
    Lookup,
    Metric,
    Join,
    Assess,
    Train,
    Persist,
};

const char* to_string(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }
    const char* category_name() const { return to_string(category_); }

private:
    ErrorCategory category_;
};

} // namespace joinguard
