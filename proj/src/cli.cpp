#include "cmbp/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmbp/bench.hpp"
#include "cmbp/oracle.hpp"
#include "cmbp/planner.hpp"

namespace cmbp::cli {

namespace {

constexpr int k_schema_version = 1;

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* outcome_name(planner::outcome o) {
    switch (o) {
    case planner::outcome::plan: return "plan";
    case planner::outcome::fail: return "fail";
    case planner::outcome::unknown: return "unknown";
    }
    return "unknown";
}

const char* outcome_name(oracle::outcome o) {
    switch (o) {
    case oracle::outcome::plan: return "plan";
    case oracle::outcome::fail: return "fail";
    case oracle::outcome::unknown: return "unknown";
    }
    return "unknown";
}

int outcome_exit(planner::outcome o) {
    switch (o) {
    case planner::outcome::plan: return 0;
    case planner::outcome::fail: return 1;
    case planner::outcome::unknown: return 2;
    }
    return 2;
}

std::string join_plan(const std::vector<std::string>& plan) {
    std::string out;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (i) out += ";";
        out += plan[i];
    }
    return out;
}

std::vector<std::string> split_plan(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        // trim surrounding blanks
        std::size_t b = cur.find_first_not_of(" \t");
        if (b == std::string::npos) {
            cur.clear();
            return;
        }
        std::size_t e = cur.find_last_not_of(" \t");
        out.push_back(cur.substr(b, e - b + 1));
        cur.clear();
    };
    for (char c : text) {
        if (c == ';') {
            flush();
        } else {
            cur += c;
        }
    }
    flush();
    return out;
}

dd::store_options store_options_with(int table_bits) {
    dd::store_options opts = dd::options_from_env();
    if (table_bits >= 0) {
        unsigned bits = static_cast<unsigned>(table_bits);
        opts.unique_table_bits = bits < 8 ? 8u : bits > 28 ? 28u : bits;
    }
    return opts;
}

// --- plan --------------------------------------------------------------------

struct plan_args {
    std::string file;
    std::size_t max_depth = 64;
    bool no_prune = false;
    std::size_t all_plans = 1;
    bool json = false;
    int table_bits = -1;
};

int cmd_plan(const plan_args& args) {
    auto t0 = std::chrono::steady_clock::now();
    lang::domain d = lang::load(read_file(args.file));
    dd::store_options sopts = store_options_with(args.table_bits);
    dd::node_store store(sopts);
    sym::symbolic_domain sd = sym::compile(d, store);

    planner::options popts;
    popts.max_depth = args.max_depth;
    popts.prune = !args.no_prune;
    popts.plan_limit = args.all_plans == 0 ? 1 : args.all_plans;
    planner::search_report report = planner::conformant_plan(sd, popts);
    double elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();

    if (args.json) {
        ordered_json j;
        j["version"] = k_schema_version;
        j["command"] = "plan";
        j["instance"] = d.name;
        j["outcome"] = outcome_name(report.verdict);
        j["plan"] = report.plans.empty() ? std::vector<std::string>{}
                                         : report.plans.front();
        j["length"] = report.length;
        ordered_json levels = ordered_json::array();
        for (const auto& l : report.levels) {
            ordered_json row;
            row["level"] = l.level;
            row["relation_nodes"] = l.relation_nodes;
            row["plans_kept"] = l.plans_kept;
            levels.push_back(std::move(row));
        }
        j["levels"] = std::move(levels);
        j["bs_inserted"] = report.beliefs_inserted;
        j["bs_hits"] = report.belief_hits;
        j["elapsed_ms"] = elapsed_ms;
        if (args.all_plans > 1) j["plans"] = report.plans;
        std::cout << j.dump(2) << "\n";
        return outcome_exit(report.verdict);
    }

    std::cout << "instance: " << d.name << "\n";
    switch (report.verdict) {
    case planner::outcome::plan:
        std::cout << "outcome: plan\nlength: " << report.length << "\n";
        for (const auto& plan : report.plans)
            std::cout << "plan: " << join_plan(plan) << "\n";
        break;
    case planner::outcome::fail:
        std::cout << "outcome: fail\nno conformant solution\n";
        break;
    case planner::outcome::unknown:
        std::cout << "outcome: unknown\nno conclusion within depth "
                  << args.max_depth << "\n";
        break;
    }
    for (const auto& l : report.levels)
        std::cout << "level " << l.level << ": nodes=" << l.relation_nodes
                  << " plans_kept=" << l.plans_kept << "\n";
    std::cout << "beliefs inserted: " << report.beliefs_inserted << "\n";
    std::cout << "belief hits: " << report.belief_hits << "\n";
    return outcome_exit(report.verdict);
}

// --- verify ---------------------------------------------------------------------

struct verify_args {
    std::string file;
    std::string plan_text;
    int table_bits = -1;
};

void print_belief(sym::symbolic_domain& sd, dd::bdd belief) {
    double size = sd.store().sat_count(belief, sd.layout().state_vars());
    std::cout << size << " state" << (size == 1.0 ? "" : "s");
    if (size > 16 || size != static_cast<double>(static_cast<long long>(size))) {
        std::cout << "\n";
        return;
    }
    std::cout << ":";
    const auto& fluents = sd.source().fluents;
    for (lang::state s : sd.decode_belief(belief)) {
        std::cout << " {";
        bool first = true;
        for (std::size_t k = 0; k < fluents.size(); ++k) {
            if (!((s >> k) & 1)) continue;
            if (!first) std::cout << " ";
            std::cout << fluents[k];
            first = false;
        }
        std::cout << "}";
    }
    std::cout << "\n";
}

int cmd_verify(const verify_args& args) {
    lang::domain d = lang::load(read_file(args.file));
    dd::node_store store(store_options_with(args.table_bits));
    sym::symbolic_domain sd = sym::compile(d, store);

    std::vector<std::string> plan = split_plan(args.plan_text);
    planner::plan_check check = planner::verify_plan(sd, plan);

    std::cout << "instance: " << d.name << "\n";
    std::cout << "plan: " << join_plan(plan) << "\n";
    for (std::size_t i = 0; i < check.trace.size(); ++i) {
        std::cout << "belief " << i << ": ";
        print_belief(sd, check.trace[i]);
    }
    if (check.ok) {
        std::cout << "conformant\n";
        return 0;
    }
    std::cout << "not conformant: " << check.reason << "\n";
    return 1;
}

// --- oracle ---------------------------------------------------------------------

struct oracle_args {
    std::string file;
    std::size_t bound = std::size_t{1} << 14;
    std::size_t max_depth = 64;
};

int cmd_oracle(const oracle_args& args) {
    lang::domain d = lang::load(read_file(args.file));
    oracle::options opts;
    opts.max_expansions = args.bound;
    opts.max_depth = args.max_depth;
    oracle::result res = oracle::search(d, opts);

    std::cout << "instance: " << d.name << "\n";
    std::cout << "outcome: " << outcome_name(res.verdict) << "\n";
    switch (res.verdict) {
    case oracle::outcome::plan:
        std::cout << "length: " << res.length << "\n";
        std::cout << "plan: " << join_plan(res.plan) << "\n";
        break;
    case oracle::outcome::fail:
        std::cout << "no conformant solution\n";
        break;
    case oracle::outcome::unknown:
        std::cout << "inconclusive: bound exceeded\n";
        break;
    }
    std::cout << "expanded: " << res.expanded << "\n";
    switch (res.verdict) {
    case oracle::outcome::plan: return 0;
    case oracle::outcome::fail: return 1;
    case oracle::outcome::unknown: return 2;
    }
    return 2;
}

// --- bench ----------------------------------------------------------------------

struct bench_args {
    std::string family;
    int min_a = -1;
    int max_a = -1;
    std::string variant;
    std::string emit_dir;
    bool json = false;
    bool no_prune = false;
    std::size_t max_depth = 64;
    std::size_t budget_ms = 60000;
    int table_bits = -1;
};

int cmd_bench(const bench_args& args) {
    std::string fname = args.family;
    std::transform(fname.begin(), fname.end(), fname.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto fam = bench::family_from_name(fname);
    if (!fam) throw usage_error("unknown family '" + args.family + "'");

    std::optional<bench::variant> var;
    if (!args.variant.empty()) {
        var = bench::variant_from_name(args.variant);
        if (!var) throw usage_error("unknown variant '" + args.variant + "'");
    }

    int lo = args.min_a >= 0 ? args.min_a : 0;
    int hi = args.max_a >= 0 ? args.max_a : 1 << 20;
    std::vector<bench::registry_row> rows = bench::select(*fam, lo, hi, var);
    if (rows.empty())
        throw usage_error("no registry rows for this family and range");

    if (!args.emit_dir.empty()) {
        std::filesystem::create_directories(args.emit_dir);
        for (const auto& row : rows) {
            std::filesystem::path path =
                std::filesystem::path(args.emit_dir) /
                (bench::instance_name(row.spec) + ".dom");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw usage_error("cannot write '" + path.string() + "'");
            out << bench::generate(row.spec);
            std::cout << path.string() << "\n";
        }
        return 0;
    }

    bench::suite_options sopts;
    sopts.max_depth = args.max_depth;
    sopts.prune = !args.no_prune;
    sopts.budget = std::chrono::milliseconds(args.budget_ms);
    sopts.store = store_options_with(args.table_bits);
    std::vector<bench::suite_row> results = bench::run_suite(rows, sopts);

    bool all_pass = true;
    std::size_t ran = 0, passed = 0;
    for (const auto& r : results) {
        if (r.skipped) continue;
        ++ran;
        if (r.pass)
            ++passed;
        else
            all_pass = false;
    }

    if (args.json) {
        ordered_json j;
        j["version"] = k_schema_version;
        j["command"] = "bench";
        ordered_json out_rows = ordered_json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& r = results[i];
            ordered_json row;
            row["instance"] = bench::instance_name(r.spec);
            row["expected"] =
                rows[i].expected == bench::expectation::plan ? "plan" : "fail";
            row["expected_length"] = rows[i].length;
            row["skipped"] = r.skipped;
            row["outcome"] = outcome_name(r.got);
            row["length"] = r.length;
            row["bs_inserted"] = r.beliefs_inserted;
            row["bs_hits"] = r.belief_hits;
            row["elapsed_ms"] = r.elapsed_ms;
            row["pass"] = r.pass;
            out_rows.push_back(std::move(row));
        }
        j["rows"] = std::move(out_rows);
        j["ran"] = ran;
        j["passed"] = passed;
        std::cout << j.dump(2) << "\n";
        return all_pass ? 0 : 1;
    }

    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::cout << bench::instance_name(r.spec) << ": ";
        if (r.skipped) {
            std::cout << "skipped (budget)\n";
            continue;
        }
        std::cout << outcome_name(r.got);
        if (r.got == planner::outcome::plan) std::cout << " length " << r.length;
        std::cout << " (expected ";
        if (rows[i].expected == bench::expectation::plan)
            std::cout << "plan length " << rows[i].length;
        else
            std::cout << "fail";
        std::cout << ") #BS " << r.beliefs_inserted << " #BSH " << r.belief_hits
                  << " " << r.elapsed_ms << " ms "
                  << (r.pass ? "pass" : "FAIL") << "\n";
    }
    std::cout << passed << "/" << ran << " passed\n";
    return all_pass ? 0 : 1;
}

void report_location(std::ostream& os, const lang::source_span& span) {
    if (span.line > 0) os << " at " << span.line << ":" << span.column;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"conformant planner on belief states"};
    app.require_subcommand(1);

    plan_args pa;
    CLI::App* plan = app.add_subcommand("plan", "search for a conformant plan");
    plan->add_option("file", pa.file, "domain file")->required();
    plan->add_option("--max-depth", pa.max_depth, "longest plan to consider");
    plan->add_flag("--no-prune", pa.no_prune, "keep already-visited belief states");
    plan->add_option("--all-plans", pa.all_plans, "decode up to K plans");
    plan->add_flag("--json", pa.json, "machine-readable report");
    plan->add_option("--table-bits", pa.table_bits, "unique table size, log2");

    verify_args va;
    CLI::App* verify = app.add_subcommand("verify", "check a plan for conformance");
    verify->add_option("file", va.file, "domain file")->required();
    verify->add_option("--plan", va.plan_text, "semicolon-separated action names")
        ->required();
    verify->add_option("--table-bits", va.table_bits, "unique table size, log2");

    oracle_args oa;
    CLI::App* orc = app.add_subcommand("oracle", "explicit-state reference search");
    orc->add_option("file", oa.file, "domain file")->required();
    orc->add_option("--bound", oa.bound, "belief expansions before giving up");
    orc->add_option("--max-depth", oa.max_depth, "longest plan to consider");

    bench_args ba;
    CLI::App* bch = app.add_subcommand("bench", "run benchmark families");
    bch->add_option("--family", ba.family, "family name")->required();
    bch->add_option("--min", ba.min_a, "smallest size parameter");
    bch->add_option("--max", ba.max_a, "largest size parameter");
    bch->add_option("--variant", ba.variant, "family variant");
    bch->add_option("--emit", ba.emit_dir, "write domain files here instead of running");
    bch->add_flag("--json", ba.json, "machine-readable report");
    bch->add_flag("--no-prune", ba.no_prune, "keep already-visited belief states");
    bch->add_option("--max-depth", ba.max_depth, "longest plan to consider");
    bch->add_option("--budget-ms", ba.budget_ms, "total time budget");
    bch->add_option("--table-bits", ba.table_bits, "unique table size, log2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (plan->parsed()) return cmd_plan(pa);
        if (verify->parsed()) return cmd_verify(va);
        if (orc->parsed()) return cmd_oracle(oa);
        if (bch->parsed()) return cmd_bench(ba);
        std::cerr << "no command\n";
        return 3;
    } catch (const lang::parse_error& e) {
        std::cerr << "parse error";
        report_location(std::cerr, e.where());
        std::cerr << ": " << e.what() << "\n";
        return 3;
    } catch (const lang::validation_error& e) {
        std::cerr << "validation error";
        report_location(std::cerr, e.where());
        std::cerr << ": " << e.what() << "\n";
        return 3;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}

} // namespace cmbp::cli
