#include "pw/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

std::string read_input(const std::string& path)
{
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pw::cli::UsageError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void parse_degree_window(const std::string& s, pw::cli::Options& o)
{
    try {
        auto colon = s.find(':');
        if (colon == std::string::npos) {
            o.max_degree = std::stoi(s);
            o.min_degree = -o.max_degree;
        } else {
            o.min_degree = std::stoi(s.substr(0, colon));
            o.max_degree = std::stoi(s.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw pw::cli::UsageError("--max-degree takes hi or lo:hi");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace pw::cli;
    CLI::App app{"pw: exact workbench for shifted Poisson geometry"};
    app.set_help_all_flag("--help-all");

    std::string command;
    std::vector<std::string> rest;
    bool json_out = false, timings = false;
    int max_weight = 0, max_size = 0, n = 0, p = 0, arity = 0, stage = 0;
    std::string degree_window, block, kind, specialize;

    std::string command_help = "one of:";
    for (const auto& c : commands()) command_help += " " + c;
    app.add_option("command", command, command_help)->required();
    app.add_option("args", rest, "manifest path or - for stdin; for operad: kind [manifest]");
    app.add_flag("--json", json_out, "machine-readable report");
    app.add_flag("--timings", timings, "add a timings section to the report");
    auto* o_weight = app.add_option("--max-weight", max_weight, "weight window (default 6, env PW_MAX_WEIGHT)");
    auto* o_degree = app.add_option("--max-degree", degree_window, "degree window hi or lo:hi (default -8:8, env PW_MAX_DEGREE)");
    auto* o_size = app.add_option("--max-size", max_size, "monomial size window (default 4, env PW_MAX_SIZE)");
    auto* o_block = app.add_option("--block", block, "block to act on");
    auto* o_kind = app.add_option("--kind", kind, "sym2 | wedge3 for invariants");
    auto* o_n = app.add_option("--n", n, "shift (operads, closed forms)");
    auto* o_p = app.add_option("--p", p, "form weight for closed-forms (default 2)");
    auto* o_arity = app.add_option("--arity", arity, "operad arity (<= 4)");
    auto* o_stage = app.add_option("--stage", stage, "Tate stage or Koszul tower length");
    auto* o_spec = app.add_option("--specialize", specialize, "value of hbar for bd1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    Outcome out;
    try {
        Options o = default_options();
        std::optional<pw::dsl::Manifest> manifest;
        std::string source;
        std::vector<std::string> args = rest;
        if (command == "operad") {
            if (args.empty()) throw UsageError("operad needs a kind: pn, as, lie, bd1, bd0, arnold or weyl");
            o.kind = args.front();
            args.erase(args.begin());
        }
        if (args.size() > 1) throw UsageError("too many arguments");
        if (!args.empty() || needs_manifest(command)) {
            source = read_input(args.empty() ? "-" : args.front());
            try {
                manifest = pw::dsl::parse(source);
                apply_options_block(o, *manifest);
            } catch (const pw::Error&) {
                out = run_source(command, source, o);
                std::cout << (json_out ? render_json(out) : render_text(out));
                return out.exit_code;
            }
        }
        if (*o_weight) o.max_weight = max_weight;
        if (*o_degree) parse_degree_window(degree_window, o);
        if (*o_size) o.max_size = max_size;
        if (*o_block) o.block = block;
        if (*o_kind) o.kind = kind;
        if (*o_n) o.n = n;
        if (*o_p) o.p = p;
        if (*o_arity) o.arity = arity;
        if (*o_stage) o.stage = stage;
        if (*o_spec) o.specialize = pw::parse_rational(specialize);
        o.timings = timings;
        out = run(command, manifest, o);
    } catch (const UsageError& e) {
        std::cerr << "pw: " << e.what() << "\n";
        return exit_usage;
    } catch (const pw::Error& e) {
        std::cerr << "pw: " << e.what() << "\n";
        return exit_usage;
    }
    std::cout << (json_out ? render_json(out) : render_text(out));
    return out.exit_code;
}
