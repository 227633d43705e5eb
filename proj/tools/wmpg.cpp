/*
 * Copyright 2026 The wmpg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wmpg/wmpg.hpp"

namespace {

using namespace wmpg;

constexpr int kExitAccepted = 0;
constexpr int kExitRejected = 1;
constexpr int kExitInputError = 2;

StochasticGame load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open game file '" + path + "'");
    return parse_game(in);
}

std::vector<Rat> load_certificate(const StochasticGame& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open certificate file '" + path + "'");
    return parse_certificate(g, in);
}

struct ObjectiveArgs {
    std::string objective = "fwmp";
    int window = 1;

    ObjectiveKind kind() const {
        if (objective == "fwmp") return ObjectiveKind::Fwmp;
        if (objective == "bwmp") return ObjectiveKind::Bwmp;
        throw error("unknown objective '" + objective + "' (use fwmp or bwmp)");
    }
    void add_to(CLI::App* cmd, bool window_needed = true) {
        cmd->add_option("--objective", objective, "objective kind: fwmp or bwmp")->capture_default_str();
        if (window_needed)
            cmd->add_option("--window", window, "window length (FWMP only)")->capture_default_str();
    }
    void check() const {
        if (kind() == ObjectiveKind::Fwmp && window < 1) throw error("--window must be >= 1 for fwmp");
    }
};

Int pick_bound(const StochasticGame& g, const ObjectiveArgs& obj, const std::string& spec) {
    DenominatorBounds b = compute_bounds(g, obj.kind(), obj.window);
    if (spec == "worst" || spec.empty()) return b.global_bound;
    if (spec == "tight") return b.tight_bound > b.global_bound ? b.global_bound : b.tight_bound;
    auto r = try_parse_rational(spec);
    if (!r || den(*r) != 1 || num(*r) < 1) throw error("--bound must be 'worst', 'tight', or a positive integer");
    return num(*r);
}

void print_report(const StochasticGame& g, const VerificationReport& rep) {
    if (rep.structural_defect) {
        std::cout << "bellman: FAIL (structural: " << *rep.structural_defect << ")\n";
    } else if (!rep.bellman_pass) {
        const auto& v = *rep.bellman_violation;
        std::cout << "bellman: FAIL at " << g.ids[v.vertex] << " (equation gives " << rat_str(v.expected)
                  << ", vector has " << rat_str(v.actual) << ")\n";
    } else {
        std::cout << "bellman: pass\n";
    }
    auto side = [&](const char* name, const std::vector<ConditionClassResult>& rs) {
        for (std::size_t k = 0; k < rs.size(); ++k) {
            std::cout << name << " class " << k;
            if (rep.decomposition)
                std::cout << " (value " << rat_str(rep.decomposition->classes[k].value) << ")";
            if (rs[k].vacuous) std::cout << ": pass (empty trap)\n";
            else if (rs[k].pass) std::cout << ": pass\n";
            else std::cout << ": FAIL at " << g.ids[*rs[k].losing_vertex] << "\n";
        }
    };
    side("lower-bound", rep.lower);
    side("upper-bound", rep.upper);
    std::cout << "verdict: " << (rep.accepted ? "accepted" : "rejected") << "\n";
    if (!rep.accepted) std::cout << "failing condition: " << rep.failing_condition() << "\n";
}

void print_machine(const StochasticGame& g, const StrategyMachine& m) { std::cout << serialize_machine(g, m); }

int cmd_validate(const std::string& game_path) {
    StochasticGame g = load_game(game_path);
    std::cout << "valid: game '" << g.name << "' with " << g.size() << " vertices, " << g.edge_count()
              << " edges\n";
    return kExitAccepted;
}

int cmd_verify(const std::string& game_path, const std::string& cert_path, const ObjectiveArgs& obj,
               const std::string& bound_spec) {
    StochasticGame g = load_game(game_path);
    obj.check();
    std::vector<Rat> cert = load_certificate(g, cert_path);
    VerificationReport rep = verify(g, cert, obj.kind(), obj.window, pick_bound(g, obj, bound_spec));
    print_report(g, rep);
    return rep.accepted ? kExitAccepted : kExitRejected;
}

int cmd_solve(const std::string& game_path, const ObjectiveArgs& obj, const std::string& out_path) {
    StochasticGame g = load_game(game_path);
    obj.check();
    SolveReport rep;
    try {
        rep = solve(g, obj.kind(), obj.window);
    } catch (const SolveError& e) {
        std::cout << "solve failed: " << e.what() << "\n";
        for (const auto& [cand, cond] : e.rejected) {
            std::cout << "rejected candidate (" << cond << "):";
            for (int v = 0; v < g.size(); ++v) std::cout << " " << rat_str(cand[static_cast<std::size_t>(v)]);
            std::cout << "\n";
        }
        return kExitRejected;
    }
    std::cout << "method: "
              << (rep.method == SolveReport::Method::EstimateRound ? "estimate+round" : "enumerate") << "\n";
    std::cout << "vertex value\n";
    for (int v = 0; v < g.size(); ++v)
        std::cout << "  " << g.ids[v] << " " << rat_str(rep.values[static_cast<std::size_t>(v)]) << "\n";

    std::ostringstream machine;
    machine << serialize_certificate(g, rep.values);
    for (std::size_t k = 0; k < rep.provenance.size(); ++k)
        machine << "provenance " << k << " " << rep.provenance[k] << "\n";
    machine << serialize_machine(g, *rep.verification.strategy_max);
    if (rep.verification.strategy_min) machine << serialize_machine(g, *rep.verification.strategy_min);
    std::cout << machine.str();
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw error("cannot open output file '" + out_path + "'");
        out << machine.str();
    }
    return kExitAccepted;
}

int cmd_almost_sure(const std::string& game_path, const ObjectiveArgs& obj, const std::string& player_name,
                    const std::string& threshold_str, bool strict) {
    StochasticGame g = load_game(game_path);
    obj.check();
    Owner player;
    if (player_name == "max") player = Owner::Max;
    else if (player_name == "min") player = Owner::Min;
    else throw error("--player must be max or min");
    Rat threshold = parse_rational(threshold_str);
    QualitativeResult res = obj.kind() == ObjectiveKind::Fwmp
                                ? almost_sure_fwmp(g, player, obj.window, threshold, strict)
                                : almost_sure_bwmp(g, player, threshold, strict);
    std::cout << "winning:";
    for (int v : res.winning) std::cout << " " << g.ids[v];
    std::cout << "\n";
    if (res.strategy) print_machine(g, *res.strategy);
    else std::cout << "strategy: none (finite memory does not suffice)\n";
    return kExitAccepted;
}

int cmd_eval_lasso(const std::string& game_path, const std::string& lasso_str, const ObjectiveArgs& obj) {
    StochasticGame g = load_game(game_path);
    obj.check();
    auto semi = lasso_str.find(';');
    if (semi == std::string::npos) throw error("--lasso expects 'stem;cycle' with comma-separated vertices");
    auto split = [&](const std::string& part) {
        std::vector<int> out;
        std::string tok;
        std::istringstream is(part);
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            int v = g.index_of(tok);
            if (v < 0) throw error("unknown vertex '" + tok + "' in lasso");
            out.push_back(v);
        }
        return out;
    };
    Lasso lasso{split(lasso_str.substr(0, semi)), split(lasso_str.substr(semi + 1))};
    Rat value = obj.kind() == ObjectiveKind::Fwmp ? fwmp_value_lasso(lasso, g, obj.window)
                                                  : bwmp_value_lasso(lasso, g);
    std::cout << rat_str(value) << "\n";
    return kExitAccepted;
}

int cmd_simulate(const std::string& game_path, const std::string& profile_path, const ObjectiveArgs& obj,
                 const std::string& start_id, int episodes, std::uint64_t seed, int horizon) {
    StochasticGame g = load_game(game_path);
    obj.check();
    std::ifstream pin(profile_path);
    if (!pin) throw error("cannot open profile file '" + profile_path + "'");
    auto machines = parse_machines(g, pin);
    const StrategyMachine* mx = nullptr;
    const StrategyMachine* mn = nullptr;
    for (const auto& m : machines)
        (m.player == Owner::Max ? mx : mn) = &m;
    if (!mx || !mn) throw error("profile must contain one max and one min strategy");
    int start = start_id.empty() ? 0 : g.index_of(start_id);
    if (start < 0) throw error("unknown start vertex '" + start_id + "'");
    MonteCarloResult r = monte_carlo_value(g, *mx, *mn, start, obj.kind(), obj.window, episodes, seed, horizon);
    std::cout << "estimate " << rat_str(r.estimate) << " radius " << rat_str(r.radius) << " (episodes "
              << r.episodes << ", horizon " << r.horizon << ", discard " << r.discard << ")\n";
    return kExitAccepted;
}

int cmd_export_dot(const std::string& game_path, const std::string& cert_path) {
    StochasticGame g = load_game(game_path);
    std::optional<std::vector<Rat>> values;
    if (!cert_path.empty()) values = load_certificate(g, cert_path);
    std::cout << export_dot(g, values);
    return kExitAccepted;
}

int cmd_gen_ssg(const std::string& game_path, const std::string& target, const std::string& out_path) {
    StochasticGame g = load_game(game_path);
    StochasticGame h = reachability_to_fwmp(g, target);
    std::string text = serialize_game(h);
    if (out_path.empty()) std::cout << text;
    else {
        std::ofstream out(out_path);
        if (!out) throw error("cannot open output file '" + out_path + "'");
        out << text;
    }
    return kExitAccepted;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wmpg: exact solving and certification of stochastic games with window mean-payoff objectives"};
    app.require_subcommand(1);

    std::string game_path, cert_path, out_path, player_name = "max", threshold_str = "0";
    std::string lasso_str, profile_path, start_id, target_id, bound_spec = "worst";
    bool strict = false;
    int episodes = 10000, horizon = 0;
    std::uint64_t seed = 1;
    ObjectiveArgs obj;

    auto* validate = app.add_subcommand("validate", "parse and validate a game file");
    validate->add_option("game", game_path, "game file")->required();

    auto* verify_cmd = app.add_subcommand("verify", "check a value certificate");
    verify_cmd->add_option("game", game_path, "game file")->required();
    verify_cmd->add_option("certificate", cert_path, "certificate file (value lines)")->required();
    obj.add_to(verify_cmd);
    verify_cmd->add_option("--bound", bound_spec,
                           "denominator bound: 'worst', 'tight', or an integer")->capture_default_str();

    auto* solve_cmd = app.add_subcommand("solve", "compute the expected-value vector with strategies");
    solve_cmd->add_option("game", game_path, "game file")->required();
    ObjectiveArgs solve_obj;
    solve_obj.add_to(solve_cmd);
    solve_cmd->add_option("-o,--output", out_path, "also write the machine-readable report here");

    auto* as_cmd = app.add_subcommand("almost-sure", "almost-sure threshold analysis");
    as_cmd->add_option("game", game_path, "game file")->required();
    ObjectiveArgs as_obj;
    as_obj.add_to(as_cmd);
    as_cmd->add_option("--threshold", threshold_str, "threshold (rational)")->capture_default_str();
    as_cmd->add_option("--player", player_name, "max or min")->capture_default_str();
    as_cmd->add_flag("--strict", strict, "use a strict threshold");

    auto* lasso_cmd = app.add_subcommand("eval-lasso", "window value of an ultimately periodic play");
    lasso_cmd->add_option("game", game_path, "game file")->required();
    lasso_cmd->add_option("--lasso", lasso_str, "'stem;cycle', comma-separated vertex ids")->required();
    ObjectiveArgs lasso_obj;
    lasso_obj.add_to(lasso_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo estimate under a strategy profile");
    sim_cmd->add_option("game", game_path, "game file")->required();
    sim_cmd->add_option("--profile", profile_path, "profile file with max and min strategy blocks")->required();
    ObjectiveArgs sim_obj;
    sim_obj.add_to(sim_cmd);
    sim_cmd->add_option("--start", start_id, "start vertex (default: first)");
    sim_cmd->add_option("--episodes", episodes, "number of episodes")->capture_default_str();
    sim_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
    sim_cmd->add_option("--horizon", horizon, "steps per episode (default 50*|V|*l)");

    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering, optionally clustered by classes");
    dot_cmd->add_option("game", game_path, "game file")->required();
    dot_cmd->add_option("--classes", cert_path, "certificate whose classes become clusters");

    auto* ssg_cmd = app.add_subcommand("gen-ssg", "turn a reachability game into a window mean-payoff instance");
    ssg_cmd->add_option("game", game_path, "reachability game file")->required();
    ssg_cmd->add_option("--target", target_id, "absorbing target vertex")->required();
    ssg_cmd->add_option("-o,--output", out_path, "output game file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(game_path);
        if (verify_cmd->parsed()) return cmd_verify(game_path, cert_path, obj, bound_spec);
        if (solve_cmd->parsed()) return cmd_solve(game_path, solve_obj, out_path);
        if (as_cmd->parsed()) return cmd_almost_sure(game_path, as_obj, player_name, threshold_str, strict);
        if (lasso_cmd->parsed()) return cmd_eval_lasso(game_path, lasso_str, lasso_obj);
        if (sim_cmd->parsed()) return cmd_simulate(game_path, profile_path, sim_obj, start_id, episodes, seed, horizon);
        if (dot_cmd->parsed()) return cmd_export_dot(game_path, cert_path);
        if (ssg_cmd->parsed()) return cmd_gen_ssg(game_path, target_id, out_path);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
