#pragma once

// Command dispatch for the pw front end: every command reads a manifest,
// runs the checks of one module and returns a JSON report and an exit code
// (0 pass, 1 a mathematical check failed, 2 usage or parse error, 3
// inconclusive because a window was too small).

#include "pw/dsl.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pw::cli {

inline constexpr int schema_version = 1;

enum Exit { exit_pass = 0, exit_fail = 1, exit_usage = 2, exit_inconclusive = 3 };

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    int max_weight = 6;
    int min_degree = -8;
    int max_degree = 8;
    int max_size = 4;
    std::string block;   // block to act on when several fit
    std::string kind;    // operad kind, invariant kind
    int n = 0;
    int p = 2;
    int arity = 3;
    int stage = 1;
    std::optional<Rational> specialize;
    bool timings = false;
};

/// Defaults overridden by PW_MAX_WEIGHT, PW_MAX_DEGREE ("hi" or "lo:hi")
/// and PW_MAX_SIZE.
Options default_options();

/// Window and operad settings from the options blocks of a manifest.
void apply_options_block(Options& o, const dsl::Manifest& m);

const std::vector<std::string>& commands();
/// Commands that do not read a manifest.
bool needs_manifest(const std::string& command);

struct Outcome {
    int exit_code = exit_pass;
    nlohmann::json report;
};

Outcome run(const std::string& command, const std::optional<dsl::Manifest>& manifest, const Options& o);
/// Parses, applies the options blocks over `o`, then runs; parse errors
/// become exit 2 with the location in the report.
Outcome run_source(const std::string& command, const std::string& source, const Options& o);

std::string render_json(const Outcome& r);
std::string render_text(const Outcome& r);

}  // namespace pw::cli
