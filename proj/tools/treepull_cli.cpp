#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "treepull/scenario.hpp"

namespace fs = std::filesystem;
using namespace treepull;

namespace {

enum Exit { kOk = 0, kGoldenMismatch = 1, kInvalid = 2, kBreach = 3 };

struct Job {
    std::string path;
    int code = kOk;
    std::string out;  // stdout text
    std::string err;  // stderr text
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ScenarioError("cannot write " + p.string());
    out << text;
}

std::string first_difference(const std::string& a, const std::string& b) {
    std::istringstream sa(a), sb(b);
    std::string la, lb;
    for (std::size_t n = 1;; ++n) {
        bool ga = static_cast<bool>(std::getline(sa, la));
        bool gb = static_cast<bool>(std::getline(sb, lb));
        if (!ga && !gb) return "files differ in trailing bytes";
        if (ga != gb || la != lb)
            return "line " + std::to_string(n) + ":\n  got:    " + (ga ? la : "<eof>") + "\n  golden: " + (gb ? lb : "<eof>");
    }
}

void run_one(Job& job, const RunOptions& opt, const fs::path& out_dir, const std::string& golden) {
    std::ostringstream out, err;
    try {
        RunOutput r = run_scenario(load_json_file(job.path), opt);
        for (const auto& w : r.warnings) err << job.path << ": warning: " << w << "\n";
        std::string log;
        for (const auto& l : r.log_lines) log += l + "\n";
        fs::create_directories(out_dir);
        write_file(out_dir / (r.name + ".result.json"), r.result.dump(1) + "\n");
        write_file(out_dir / (r.name + ".log.jsonl"), log);
        out << r.name << ": ok, " << r.log_lines.size() << " events\n";
        if (!golden.empty()) {
            bool same = true;
            for (const auto& [file, text] : {std::pair{r.name + ".log.jsonl", log},
                                             std::pair{r.name + ".result.json", r.result.dump(1) + "\n"}}) {
                fs::path g = fs::path(golden) / file;
                if (!fs::exists(g)) {
                    err << r.name << ": no golden file " << g.string() << "\n";
                    same = false;
                } else if (std::string want = read_file(g); want != text) {
                    err << r.name << ": " << file << " differs from golden, " << first_difference(text, want) << "\n";
                    same = false;
                }
            }
            if (same)
                out << r.name << ": matches golden\n";
            else
                job.code = kGoldenMismatch;
        }
    } catch (const ValidationError& e) {
        err << job.path << ": invalid scenario: " << e.what() << "\n";
        if (e.witness) err << "counterexample: " << to_string(*e.witness) << "\n";
        job.code = kInvalid;
    } catch (const InvariantBreach& e) {
        err << job.path << ": invariant breach: " << e.what() << "\n";
        job.code = kBreach;
    } catch (const std::logic_error& e) {
        // std::invalid_argument and friends come from malformed input
        if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e)) {
            err << job.path << ": invalid scenario: " << e.what() << "\n";
            job.code = kInvalid;
        } else {
            err << job.path << ": invariant breach: " << e.what() << "\n";
            job.code = kBreach;
        }
    } catch (const std::exception& e) {
        err << job.path << ": invalid scenario: " << e.what() << "\n";
        job.code = kInvalid;
    }
    job.out = out.str();
    job.err = err.str();
}

int cmd_run(const std::vector<std::string>& files, const RunOptions& opt, const std::string& out_dir,
            const std::string& golden, unsigned jobs) {
    std::vector<Job> work;
    for (const auto& f : files) {
        Job j;
        j.path = f;
        work.push_back(std::move(j));
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < work.size();) run_one(work[i], opt, out_dir, golden);
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kOk;
    for (const auto& j : work) {
        std::cout << j.out;
        std::cerr << j.err;
        // severity: breach > invalid > golden mismatch
        if (j.code == kBreach || (j.code == kInvalid && code != kBreach) || (j.code == kGoldenMismatch && code == kOk))
            code = j.code;
    }
    return code;
}

int cmd_check(const std::string& file, const std::vector<std::string>& names) {
    std::vector<CheckReport> reports;
    try {
        reports = run_checks(load_json_file(file), names);
    } catch (const std::exception& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return kInvalid;
    }
    bool failed = false;
    for (const auto& r : reports) {
        std::cout << r.name << ": pass=" << r.pass << " fail=" << r.fail << " undecided=" << r.undecided << "\n";
        for (const auto& m : r.messages) std::cout << "  " << m << "\n";
        failed = failed || r.fail > 0;
    }
    return failed ? 1 : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tree pulldown scenarios: run constructions and check their results"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    RunOptions opt;
    std::string out_dir = ".";
    std::string golden;
    unsigned jobs = 1;
    auto* run = app.add_subcommand("run", "run scenario files, writing <name>.result.json and <name>.log.jsonl");
    run->add_option("scenarios", files, "scenario JSON files")->required()->check(CLI::ExistingFile);
    run->add_option("--stages", opt.stages, "override the stage budget");
    run->add_option("--depth", opt.depth, "override the depth budget");
    run->add_option("--branch-bound", opt.branch_bound, "override the fragment branch bound");
    run->add_option("--out", out_dir, "output directory")->capture_default_str();
    run->add_option("--golden-compare", golden, "directory of golden logs to compare against");
    run->add_option("--jobs", jobs, "scenarios to run in parallel")->capture_default_str()->check(CLI::PositiveNumber);

    std::string result_file;
    std::vector<std::string> checks;
    auto* check = app.add_subcommand("check", "run checkers over a result file");
    check->add_option("result", result_file, "result JSON file")->required()->check(CLI::ExistingFile);
    check->add_option("checks", checks,
                      "expansionary, identity-prefix, range, permanence, nice, genericity, splitting, "
                      "copy-agreement, composition, identity-below-copy, rho (default: all that apply)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInvalid;
    }
    if (*run) return cmd_run(files, opt, out_dir, golden, jobs);
    return cmd_check(result_file, checks);
}
