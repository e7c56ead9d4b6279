// pwin — possible-winner decisions for partitioned preference profiles.
//
// Subcommands: solve, classify, reduce, gen, oracle, verify-q.
// All results go to stdout as JSON; diagnostics go to stderr.
// Exit codes for solve/oracle: 0 = yes, 1 = no, 2 = error.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "pwin/flow.hpp"
#include "pwin/gen.hpp"
#include "pwin/model.hpp"
#include "pwin/oracle.hpp"
#include "pwin/reduction.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pwin;

namespace {

struct RuleFlags {
    std::string family;
    std::string vector_csv;
    int k = 0;
    int i = 0;
    int l = 0;
    long long a = 1;
};

void add_rule_flags(CLI::App* cmd, RuleFlags& flags) {
    cmd->add_option("--rule", flags.family,
                    "plurality|veto|borda|two-one-zero|k-approval|lemma6-template|lemma7-template");
    cmd->add_option("--vector", flags.vector_csv, "explicit scoring vector, e.g. 2,1,1,0");
    cmd->add_option("--k", flags.k, "k for k-approval / run length for the templates");
    cmd->add_option("--i", flags.i, "bottom-up anchor index for the templates");
    cmd->add_option("--l", flags.l, "lower run length for lemma7-template");
    cmd->add_option("--a", flags.a, "run value for lemma6-template");
}

Rule rule_from_flags(const RuleFlags& flags) {
    if (!flags.vector_csv.empty()) {
        std::vector<Score> entries;
        std::stringstream ss(flags.vector_csv);
        std::string item;
        while (std::getline(ss, item, ',')) entries.push_back(std::stoll(item));
        return Rule::of(ScoringVector{std::move(entries)});
    }
    if (flags.family == "plurality") return Rule::of(RuleFamily::plurality());
    if (flags.family == "veto") return Rule::of(RuleFamily::veto());
    if (flags.family == "borda") return Rule::of(RuleFamily::borda());
    if (flags.family == "two-one-zero") return Rule::of(RuleFamily::two_one_zero());
    if (flags.family == "k-approval") return Rule::of(RuleFamily::k_approval(flags.k));
    if (flags.family == "lemma6-template")
        return Rule::of(RuleFamily::lemma6_template(flags.i, flags.k, flags.a));
    if (flags.family == "lemma7-template")
        return Rule::of(RuleFamily::lemma7_template(flags.i, flags.k, flags.l));
    throw ValidationError("unknown rule: " + flags.family);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

json witness_json(const ElectionInstance& instance, const LinearProfile& witness) {
    json votes = json::array();
    for (const auto& vote : witness) {
        std::vector<std::string> names;
        for (int c : vote) names.push_back(instance.candidates[static_cast<size_t>(c)]);
        votes.push_back(names);
    }
    const std::vector<Score> totals =
        score_linear_profile(witness, instance.m(), instance.scoring_vector());
    json scores = json::object();
    for (int a = 0; a < instance.m(); ++a)
        scores[instance.candidates[static_cast<size_t>(a)]] = totals[static_cast<size_t>(a)];
    return json{{"votes", votes}, {"scores", scores}};
}

bool flow_supports(const ElectionInstance& instance) {
    if (instance.m() < 2) return true; // degenerate, solved without a network
    ScoringVector v;
    try {
        v = normalize(instance.scoring_vector());
    } catch (const Error&) {
        return false;
    }
    const RuleClassification cls = classify(v);
    return cls.distinct_values == 2 || cls.is_two_one_zero;
}

struct SolveFlags {
    std::string path;
    std::string mode;
    std::string engine = "auto";
    std::string witness_path;
    std::uint64_t budget = 1'000'000;
    bool prune = false;
    int jobs = 1;
};

// Returns (exit code, report). Exit: 0 yes, 1 no, 2 error.
std::pair<int, json> solve_one(const std::string& path, const SolveFlags& flags) {
    const auto start = std::chrono::steady_clock::now();
    json report;
    report["instance"] = path;
    try {
        ElectionInstance instance = load_instance_file(path);
        if (flags.mode == "unique")
            instance.mode = WinnerMode::UniqueWinner;
        else if (flags.mode == "co-winner")
            instance.mode = WinnerMode::CoWinner;
        else if (!flags.mode.empty())
            throw ValidationError("mode must be unique or co-winner");
        report["mode"] = instance.mode == WinnerMode::UniqueWinner ? "unique" : "co-winner";

        bool use_flow;
        if (flags.engine == "flow") {
            if (!flow_supports(instance))
                throw UnsupportedRuleError("--engine flow does not support this rule");
            use_flow = true;
        } else if (flags.engine == "oracle") {
            use_flow = false;
        } else if (flags.engine == "auto") {
            use_flow = flow_supports(instance);
        } else {
            throw ValidationError("engine must be auto, flow, or oracle");
        }

        bool yes = false;
        std::optional<LinearProfile> witness;
        if (use_flow) {
            const FlowDecision d = decide_flow(instance);
            yes = d.yes;
            witness = d.witness;
            report["algorithm"] = "flow";
            report["target"] = d.target;
            report["max_flow"] = d.max_flow_value;
        } else {
            OracleOptions options;
            options.max_joint = flags.budget;
            options.prune = flags.prune;
            const OracleResult r = decide_oracle(instance, options);
            yes = r.yes;
            witness = r.witness;
            report["algorithm"] = "oracle";
        }
        report["decision"] = yes ? "yes" : "no";
        if (yes && witness && !flags.witness_path.empty()) {
            write_file(flags.witness_path, witness_json(instance, *witness).dump(2));
            report["witness_path"] = flags.witness_path;
        }
        const auto elapsed = std::chrono::steady_clock::now() - start;
        report["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count() / 1000.0;
        return {yes ? 0 : 1, report};
    } catch (const std::exception& e) {
        report["error"] = e.what();
        return {2, report};
    }
}

int cmd_solve(const SolveFlags& flags) {
    if (fs::is_directory(flags.path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(flags.path))
            if (entry.path().extension() == ".json") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());

        std::vector<json> reports(files.size());
        std::vector<int> codes(files.size(), 0);
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            while (true) {
                const size_t idx = next.fetch_add(1);
                if (idx >= files.size()) return;
                SolveFlags one = flags;
                one.witness_path.clear(); // per-file witnesses are not supported in batch mode
                auto [code, report] = solve_one(files[idx], one);
                reports[idx] = std::move(report);
                codes[idx] = code;
            }
        };
        std::vector<std::thread> pool;
        const int jobs = std::max(1, flags.jobs);
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        for (const auto& r : reports) std::cout << r.dump() << "\n";
        return std::any_of(codes.begin(), codes.end(), [](int c) { return c == 2; }) ? 2 : 0;
    }
    auto [code, report] = solve_one(flags.path, flags);
    std::cout << report.dump(2) << "\n";
    return code;
}

int cmd_classify(const RuleFlags& flags, int m) {
    const Rule rule = rule_from_flags(flags);
    const ScoringVector v = rule.resolve(m);
    const ScoringVector norm = normalize(v);
    const RuleClassification cls = classify(norm);
    json j;
    j["m"] = m;
    j["vector"] = v.entries;
    j["normalized"] = norm.entries;
    j["distinct"] = cls.distinct_values;
    if (cls.two_valued_k) j["k"] = *cls.two_valued_k;
    j["two_one_zero"] = cls.is_two_one_zero;
    j["differentiating"] = cls.is_differentiating;
    j["max_equal_run"] = cls.max_equal_run;
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct ReduceFlags {
    std::string input;
    int lemma = 6;
    RuleFlags rule; // --k/--i/--a double as the construction parameters
    std::string out;
    std::string layout_out;
    std::string q_out;
};

int cmd_reduce(const ReduceFlags& flags) {
    const ThreeDMInstance dm = load_3dm_file(flags.input);
    const int k = flags.rule.k > 0 ? flags.rule.k : 1;
    const int i = flags.rule.i > 0 ? flags.rule.i : (flags.lemma == 6 ? 2 : 1);
    RuleFamily family = RuleFamily::plurality();
    if (!flags.rule.family.empty() || !flags.rule.vector_csv.empty()) {
        const Rule r = rule_from_flags(flags.rule);
        if (!r.family) throw ValidationError("reduce requires a rule family, not a fixed vector");
        family = *r.family;
    } else if (flags.lemma == 6) {
        family = RuleFamily::lemma6_template(i, k, flags.rule.a);
    } else {
        family = RuleFamily::lemma7_template(i, k, 3 * dm.m_size() - 2);
    }

    const ReductionOutput out = flags.lemma == 6 ? reduce_lemma6(dm, k, i, family)
                                                 : reduce_lemma7(dm, i, k, family);
    const std::string instance_text = serialize_instance(out.instance);
    if (flags.out.empty())
        std::cout << instance_text << "\n";
    else
        write_file(flags.out, instance_text);
    const std::string layout_text = serialize_layout(out.layout);
    if (!flags.layout_out.empty())
        write_file(flags.layout_out, layout_text);
    else
        std::cerr << layout_text << "\n";

    if (!flags.q_out.empty()) {
        // Re-derivable artifact for verify-q: the adjustment votes are the
        // tail of the generated profile.
        json q;
        q["vector"] = out.instance.scoring_vector().entries;
        json named = json::array();
        json offsets = json::array();
        for (const auto& [name, offset] : out.layout.q_offsets) {
            named.push_back(name);
            offsets.push_back(offset);
        }
        q["named"] = named;
        q["offsets"] = offsets;
        q["dummies"] = out.layout.dummies;
        q["lambda"] = out.layout.lambda;
        json votes = json::array();
        const size_t q_start = out.instance.profile.votes.size() -
                               static_cast<size_t>(out.layout.adjustment_vote_count);
        for (size_t idx = q_start; idx < out.instance.profile.votes.size(); ++idx) {
            std::vector<std::string> vote;
            for (const auto& block : out.instance.profile.votes[idx].blocks)
                for (int c : block)
                    vote.push_back(out.instance.candidates[static_cast<size_t>(c)]);
            votes.push_back(vote);
        }
        q["votes"] = votes;
        write_file(flags.q_out, q.dump(2));
    }
    return 0;
}

int cmd_verify_q(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j = json::parse(in);

    std::vector<Score> entries;
    for (const auto& e : j.at("vector")) entries.push_back(e.get<Score>());
    const ScoringVector v{entries};
    const std::vector<std::string> named = j.at("named").get<std::vector<std::string>>();
    const std::vector<Score> offsets = j.at("offsets").get<std::vector<Score>>();
    const std::vector<std::string> dummies = j.at("dummies").get<std::vector<std::string>>();
    const Score lambda = j.at("lambda").get<Score>();

    std::vector<std::string> all = named;
    all.insert(all.end(), dummies.begin(), dummies.end());
    auto index_of = [&](const std::string& name) {
        for (size_t idx = 0; idx < all.size(); ++idx)
            if (all[idx] == name) return static_cast<int>(idx);
        throw ValidationError("vote references unknown candidate " + name);
    };
    LinearProfile votes;
    for (const auto& jv : j.at("votes")) {
        LinearOrder order;
        for (const auto& jn : jv) order.push_back(index_of(jn.get<std::string>()));
        votes.push_back(std::move(order));
    }
    const std::vector<Score> totals =
        score_linear_profile(votes, static_cast<int>(all.size()), v);

    json report;
    report["lambda"] = lambda;
    json mismatches = json::array();
    for (size_t idx = 0; idx < named.size(); ++idx) {
        const Score want = lambda + offsets[idx];
        if (totals[idx] != want)
            mismatches.push_back({{"candidate", named[idx]},
                                  {"expected", want},
                                  {"actual", totals[idx]}});
    }
    for (size_t idx = 0; idx < dummies.size(); ++idx) {
        const Score got = totals[named.size() + idx];
        if (got >= lambda)
            mismatches.push_back(
                {{"candidate", dummies[idx]}, {"expected_below", lambda}, {"actual", got}});
    }
    report["ok"] = mismatches.empty();
    report["mismatches"] = mismatches;
    std::cout << report.dump(2) << "\n";
    return mismatches.empty() ? 0 : 1;
}

struct GenFlags {
    int candidates = 4;
    int votes = 3;
    int max_blocks = 3;
    RuleFlags rule;
    std::string mode = "co-winner";
    std::uint64_t seed = 0;
    std::string distinguished;
    std::string out;
};

int cmd_gen(const GenFlags& flags) {
    GenOptions options;
    options.candidates = flags.candidates;
    options.votes = flags.votes;
    options.max_blocks = flags.max_blocks;
    options.rule = rule_from_flags(flags.rule);
    options.mode = flags.mode == "unique" ? WinnerMode::UniqueWinner : WinnerMode::CoWinner;
    options.seed = flags.seed;
    ElectionInstance instance = generate_instance(options);
    if (!flags.distinguished.empty()) {
        const int idx = instance.candidate_index(flags.distinguished);
        if (idx < 0) throw ValidationError("distinguished candidate " + flags.distinguished +
                                           " is not generated (names are c1..cm)");
        instance.distinguished = idx;
    }
    const std::string text = serialize_instance(instance);
    if (flags.out.empty())
        std::cout << text << "\n";
    else
        write_file(flags.out, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"possible-winner decisions over partitioned preference profiles"};
    app.require_subcommand(1);

    SolveFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "decide an instance file (or directory)");
    solve->add_option("instance", solve_flags.path, "instance JSON file or directory")->required();
    solve->add_option("--mode", solve_flags.mode, "override the instance mode");
    solve->add_option("--engine", solve_flags.engine, "auto|flow|oracle");
    solve->add_option("--witness", solve_flags.witness_path, "write the witness profile here");
    solve->add_option("--budget", solve_flags.budget, "oracle joint-extension budget");
    solve->add_flag("--prune", solve_flags.prune, "enable sound oracle pruning");
    solve->add_option("--jobs", solve_flags.jobs, "parallel workers for directory batches");

    SolveFlags oracle_flags;
    oracle_flags.engine = "oracle";
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "decide with the brute-force oracle");
    oracle_cmd->add_option("instance", oracle_flags.path, "instance JSON file")->required();
    oracle_cmd->add_option("--mode", oracle_flags.mode, "override the instance mode");
    oracle_cmd->add_option("--witness", oracle_flags.witness_path, "write the witness profile here");
    oracle_cmd->add_option("--budget", oracle_flags.budget, "joint-extension budget");
    oracle_cmd->add_flag("--prune", oracle_flags.prune, "enable sound pruning");

    RuleFlags classify_rule;
    int classify_m = 0;
    CLI::App* classify_cmd = app.add_subcommand("classify", "classify a rule's vector for m");
    add_rule_flags(classify_cmd, classify_rule);
    classify_cmd->add_option("--m", classify_m, "number of candidates")->required();

    ReduceFlags reduce_flags;
    CLI::App* reduce_cmd =
        app.add_subcommand("reduce", "generate a possible-winner instance from a 3DM instance");
    reduce_cmd->add_option("input", reduce_flags.input, "3DM JSON file")->required();
    reduce_cmd->add_option("--lemma", reduce_flags.lemma, "6 or 7")->required();
    add_rule_flags(reduce_cmd, reduce_flags.rule);
    reduce_cmd->add_option("-o,--out", reduce_flags.out, "instance output file");
    reduce_cmd->add_option("--layout", reduce_flags.layout_out, "layout report output file");
    reduce_cmd->add_option("--emit-q", reduce_flags.q_out, "adjustment-profile artifact for verify-q");

    GenFlags gen_flags;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a seeded random instance");
    gen_cmd->add_option("--candidates", gen_flags.candidates, "number of candidates")->required();
    gen_cmd->add_option("--votes", gen_flags.votes, "number of votes")->required();
    gen_cmd->add_option("--max-blocks", gen_flags.max_blocks, "max blocks per vote");
    add_rule_flags(gen_cmd, gen_flags.rule);
    gen_cmd->add_option("--mode", gen_flags.mode, "unique|co-winner");
    gen_cmd->add_option("--seed", gen_flags.seed, "random seed")->required();
    gen_cmd->add_option("--distinguished", gen_flags.distinguished, "candidate name (c1..cm)");
    gen_cmd->add_option("-o,--out", gen_flags.out, "output file");

    std::string verify_q_path;
    CLI::App* verify_cmd = app.add_subcommand("verify-q", "re-score an adjustment profile artifact");
    verify_cmd->add_option("artifact", verify_q_path, "artifact JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_flags);
        if (oracle_cmd->parsed()) {
            oracle_flags.engine = "oracle";
            auto [code, report] = solve_one(oracle_flags.path, oracle_flags);
            std::cout << report.dump(2) << "\n";
            return code;
        }
        if (classify_cmd->parsed()) return cmd_classify(classify_rule, classify_m);
        if (reduce_cmd->parsed()) return cmd_reduce(reduce_flags);
        if (gen_cmd->parsed()) return cmd_gen(gen_flags);
        if (verify_cmd->parsed()) return cmd_verify_q(verify_q_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
