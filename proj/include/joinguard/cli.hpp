#pragma once

#include <ostream>

namespace joinguard::cli {

/// Runs one joinguard invocation. Exit codes: 0 success, 1 pipeline
/// error (ingest, metric, join, training, persistence), 2 usage error,
/// 3 failed --min-accuracy gate. Errors print one line to `err` shaped
/// "error: <category>: <message>".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace joinguard::cli
