#include "pwin/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace pwin {

using nlohmann::json;

bool PartitionedVote::is_linear() const {
    return std::all_of(blocks.begin(), blocks.end(),
                       [](const std::vector<int>& b) { return b.size() == 1; });
}

int PartitionedVote::candidate_count() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    return n;
}

int PartitionedVote::block_of(int c) const {
    for (size_t j = 0; j < blocks.size(); ++j)
        if (std::binary_search(blocks[j].begin(), blocks[j].end(), c))
            return static_cast<int>(j);
    return -1;
}

int ElectionInstance::candidate_index(const std::string& name) const {
    for (size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i] == name) return static_cast<int>(i);
    return -1;
}

void validate_partitioned(const PartitionedVote& vote, const std::vector<std::string>& candidates) {
    std::vector<int> seen(candidates.size(), 0);
    for (const auto& block : vote.blocks) {
        if (block.empty()) throw ValidationError("vote contains an empty block");
        for (int c : block) {
            if (c < 0 || c >= static_cast<int>(candidates.size()))
                throw ValidationError("vote references candidate index out of range");
            if (seen[static_cast<size_t>(c)]++)
                throw ValidationError("candidate " + candidates[static_cast<size_t>(c)] +
                                      " appears in two blocks");
        }
    }
    for (size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw ValidationError("candidate " + candidates[i] + " uncovered");
}

void validate_instance(const ElectionInstance& instance) {
    if (instance.candidates.empty()) throw ValidationError("instance has no candidates");
    std::set<std::string> names;
    for (const auto& n : instance.candidates) {
        if (n.empty()) throw ValidationError("candidate name is empty");
        if (!names.insert(n).second) throw ValidationError("duplicate candidate name " + n);
    }
    for (size_t i = 0; i < instance.profile.votes.size(); ++i) {
        try {
            validate_partitioned(instance.profile.votes[i], instance.candidates);
        } catch (const ValidationError& e) {
            throw ValidationError("vote " + std::to_string(i) + ": " + e.what());
        }
    }
    if (instance.distinguished < 0 || instance.distinguished >= instance.m())
        throw ValidationError("distinguished candidate is not in the candidate set");
    if (instance.rule.vector && instance.rule.vector->size() != instance.m())
        throw ValidationError("rule vector length " + std::to_string(instance.rule.vector->size()) +
                              " does not match " + std::to_string(instance.m()) + " candidates");
}

namespace {

Rule parse_rule(const json& j) {
    if (!j.is_object()) throw ParseError("rule must be an object");
    if (j.contains("vector")) {
        std::vector<Score> entries;
        for (const auto& e : j.at("vector")) entries.push_back(e.get<Score>());
        return Rule::of(ScoringVector{std::move(entries)});
    }
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "plurality") return Rule::of(RuleFamily::plurality());
    if (fam == "veto") return Rule::of(RuleFamily::veto());
    if (fam == "borda") return Rule::of(RuleFamily::borda());
    if (fam == "two-one-zero") return Rule::of(RuleFamily::two_one_zero());
    if (fam == "k-approval") return Rule::of(RuleFamily::k_approval(j.at("k").get<int>()));
    if (fam == "lemma6-template")
        return Rule::of(RuleFamily::lemma6_template(j.at("i").get<int>(), j.at("k").get<int>(),
                                                    j.at("a").get<Score>()));
    if (fam == "lemma7-template")
        return Rule::of(RuleFamily::lemma7_template(j.at("i").get<int>(), j.at("k").get<int>(),
                                                    j.at("l").get<int>()));
    throw ParseError("unknown rule family " + fam);
}

json rule_to_json(const Rule& rule) {
    json j = json::object();
    if (rule.vector) {
        j["vector"] = rule.vector->entries;
        return j;
    }
    const RuleFamily& f = *rule.family;
    j["family"] = f.name();
    switch (f.kind) {
        case RuleFamily::Kind::KApproval: j["k"] = f.k; break;
        case RuleFamily::Kind::Lemma6Template:
            j["i"] = f.anchor;
            j["k"] = f.k;
            j["a"] = f.run_value;
            break;
        case RuleFamily::Kind::Lemma7Template:
            j["i"] = f.anchor;
            j["k"] = f.k;
            j["l"] = f.run_l;
            break;
        case RuleFamily::Kind::ExplicitTable: {
            json t = json::object();
            for (const auto& [m, v] : f.table) t[std::to_string(m)] = v.entries;
            j["table"] = std::move(t);
            break;
        }
        default: break;
    }
    return j;
}

} // namespace

ElectionInstance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    ElectionInstance instance;
    try {
        for (const auto& c : j.at("candidates")) instance.candidates.push_back(c.get<std::string>());
        instance.rule = parse_rule(j.at("rule"));

        std::unordered_map<std::string, int> index;
        for (size_t i = 0; i < instance.candidates.size(); ++i)
            index[instance.candidates[i]] = static_cast<int>(i);

        int vote_no = 0;
        for (const auto& jv : j.at("votes")) {
            PartitionedVote vote;
            for (const auto& jb : jv) {
                std::vector<int> block;
                for (const auto& jn : jb) {
                    const std::string name = jn.get<std::string>();
                    auto it = index.find(name);
                    if (it == index.end())
                        throw ParseError("vote " + std::to_string(vote_no) +
                                         ": unknown candidate " + name);
                    block.push_back(it->second);
                }
                std::sort(block.begin(), block.end());
                vote.blocks.push_back(std::move(block));
            }
            instance.profile.votes.push_back(std::move(vote));
            ++vote_no;
        }

        const std::string distinguished = j.at("distinguished").get<std::string>();
        instance.distinguished = instance.candidate_index(distinguished);
        if (instance.distinguished < 0)
            throw ParseError("distinguished candidate " + distinguished + " is not listed");

        const std::string mode = j.value("mode", "co-winner");
        if (mode == "unique")
            instance.mode = WinnerMode::UniqueWinner;
        else if (mode == "co-winner")
            instance.mode = WinnerMode::CoWinner;
        else
            throw ParseError("mode must be \"unique\" or \"co-winner\", got " + mode);
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance schema: ") + e.what());
    }
    validate_instance(instance);
    return instance;
}

std::string serialize_instance(const ElectionInstance& instance) {
    json j;
    j["candidates"] = instance.candidates;
    j["rule"] = rule_to_json(instance.rule);
    json votes = json::array();
    for (const auto& vote : instance.profile.votes) {
        json jv = json::array();
        for (const auto& block : vote.blocks) {
            std::vector<std::string> names;
            names.reserve(block.size());
            for (int c : block) names.push_back(instance.candidates[static_cast<size_t>(c)]);
            std::sort(names.begin(), names.end());
            jv.push_back(names);
        }
        votes.push_back(std::move(jv));
    }
    j["votes"] = std::move(votes);
    j["distinguished"] = instance.candidates[static_cast<size_t>(instance.distinguished)];
    j["mode"] = instance.mode == WinnerMode::UniqueWinner ? "unique" : "co-winner";
    return j.dump(2);
}

ElectionInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

} // namespace pwin
