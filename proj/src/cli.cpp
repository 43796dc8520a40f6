#include "stab/cli.hpp"

#include "stab/oracle.hpp"
#include "stab/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace stab {

namespace {

struct Options {
    std::string file;
    bool json = false;
    bool verify = false;
    unsigned long seed = 0; // accepted for interface stability; sampling is deterministic
    std::size_t length = 5;
    std::size_t max_k = 3;
};

Problem load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

nlohmann::json witness_json(const LadderWitness& w) {
    nlohmann::json j;
    j["k"] = w.k;
    auto tuples = [](const std::vector<Vec>& pts) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pts) {
            nlohmann::json t = nlohmann::json::array();
            for (const auto& q : p) t.push_back(rat_to_string(q));
            arr.push_back(std::move(t));
        }
        return arr;
    };
    j["a"] = tuples(w.a);
    j["b"] = tuples(w.b);
    return j;
}

nlohmann::json pieces_json(const StabilityVerdict& v) {
    nlohmann::json arr = nlohmann::json::array();
    const VarList vars = v.partition.all();
    for (const auto& p : v.pieces) {
        nlohmann::json pj;
        pj["Z"] = print_formula(p.zset.to_set(vars).to_formula(), vars);
        pj["W"] = print_formula(p.wset.to_set(vars).to_formula(), vars);
        pj["X"] = print_formula(p.xset.to_formula(), v.partition.x);
        pj["Y"] = print_formula(p.yset.to_formula(), v.partition.y);
        arr.push_back(std::move(pj));
    }
    return arr;
}

// cross-checks behind --verify; the ladder lengths mirror the acceptance
// gate for unstable verdicts
nlohmann::json run_checks(const StabilityVerdict& v, bool& ok) {
    nlohmann::json checks;
    if (v.stable()) {
        DecompositionReport rep = verify_decomposition(v.set, v.pieces, v.partition);
        checks["decomposition_union"] = rep.union_matches;
        checks["decomposition_special"] = rep.pieces_special;
        checks["decomposition_subset"] = rep.pieces_subset;
        ok = rep.pass();
    } else {
        ok = true;
        for (std::size_t k : {1, 5, 10, 25}) {
            LadderWitness w = make_ladder(*v.culprit, *v.component, v.set, v.partition, k);
            bool good = verify_ladder(v.set, w, v.partition);
            checks["ladder_k" + std::to_string(k)] = good;
            ok = ok && good;
        }
    }
    return checks;
}

void emit(std::ostream& out, const Options& opt, const nlohmann::json& j, const std::string& text,
          double ms) {
    if (opt.json) {
        out << j.dump() << "\n";
    } else {
        out << text;
        out << "elapsed: " << ms << " ms\n";
    }
}

int cmd_analyze(const Options& opt, std::ostream& out, bool with_pieces, bool with_witness) {
    auto t0 = std::chrono::steady_clock::now();
    Problem prob = load(opt.file);
    StabilityVerdict v = analyze(prob);
    nlohmann::json j;
    std::ostringstream text;
    j["verdict"] = v.stable() ? "stable" : "unstable";
    text << "verdict: " << (v.stable() ? "stable" : "unstable") << "\n";
    if (v.stable() && with_pieces) {
        j["pieces"] = pieces_json(v);
        text << "pieces: " << v.pieces.size() << "\n";
        const VarList vars = v.partition.all();
        for (const auto& p : v.pieces) {
            text << "  Z " << print_formula(p.zset.to_set(vars).to_formula(), vars) << "\n";
            if (!p.wset.components.empty())
                text << "    minus W " << print_formula(p.wset.to_set(vars).to_formula(), vars)
                     << "\n";
            text << "    X " << print_formula(p.xset.to_formula(), v.partition.x) << "\n";
            text << "    Y " << print_formula(p.yset.to_formula(), v.partition.y) << "\n";
        }
    }
    if (!v.stable() && with_witness) {
        LadderWitness w = make_ladder(*v.culprit, *v.component, v.set, v.partition, opt.length);
        j["witness"] = witness_json(w);
        text << "witness length " << w.k << "\n";
        for (std::size_t i = 0; i < w.k; ++i) {
            text << "  a" << i + 1 << " = (";
            for (std::size_t t = 0; t < w.a[i].size(); ++t)
                text << (t ? " " : "") << rat_to_string(w.a[i][t]);
            text << ")  b" << i + 1 << " = (";
            for (std::size_t t = 0; t < w.b[i].size(); ++t)
                text << (t ? " " : "") << rat_to_string(w.b[i][t]);
            text << ")\n";
        }
    }
    bool checks_ok = true;
    j["checks"] = nlohmann::json::object();
    if (opt.verify) {
        j["checks"] = run_checks(v, checks_ok);
        text << "checks: " << (checks_ok ? "pass" : "FAIL") << "\n";
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(out, opt, j, text.str(), ms);
    if (opt.verify && !checks_ok) return 3;
    return v.stable() ? 0 : 10;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
    auto t0 = std::chrono::steady_clock::now();
    Problem prob = load(opt.file);
    SemilinearSet d = eliminate_quantifiers(prob);
    LadderSearch r = ladder_exists(d, prob.partition, opt.max_k);
    nlohmann::json j;
    std::ostringstream text;
    j["checks"] = nlohmann::json::object();
    switch (r.status) {
    case LadderStatus::Found: {
        j["verdict"] = "unstable";
        j["witness"] = witness_json(*r.witness);
        text << "verdict: unstable (ladder of length " << opt.max_k << " found)\n";
        if (opt.verify) {
            bool good = verify_ladder(d, *r.witness, prob.partition);
            j["checks"]["ladder"] = good;
            text << "checks: " << (good ? "pass" : "FAIL") << "\n";
            if (!good) {
                emit(out, opt, j, text.str(), 0);
                return 3;
            }
        }
        break;
    }
    case LadderStatus::None:
        j["verdict"] = "stable";
        text << "verdict: stable (no ladder of length " << opt.max_k << ")\n";
        break;
    case LadderStatus::Budget:
        j["verdict"] = "unknown";
        text << "verdict: unknown (search budget exceeded)\n";
        break;
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(out, opt, j, text.str(), ms);
    if (r.status == LadderStatus::Budget) return 2;
    return r.status == LadderStatus::Found ? 10 : 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stability classifier for definable relations over dense orders"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", opt.file, "problem file")->required();
        cmd->add_flag("--json", opt.json, "machine-readable output");
        cmd->add_flag("--verify", opt.verify, "run oracle cross-checks");
        cmd->add_option("--seed", opt.seed, "sampling seed (output is deterministic)");
    };
    CLI::App* check = app.add_subcommand("check", "decide stability");
    add_common(check);
    CLI::App* decompose = app.add_subcommand("decompose", "emit special stable pieces");
    add_common(decompose);
    CLI::App* witness = app.add_subcommand("witness", "emit a half-graph witness");
    add_common(witness);
    witness->add_option("--length", opt.length, "ladder length")->default_val(5);
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force ladder search");
    add_common(oracle);
    oracle->add_option("--max-k", opt.max_k, "ladder length to search")->default_val(3);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (check->parsed()) return cmd_analyze(opt, out, false, false);
        if (decompose->parsed()) return cmd_analyze(opt, out, true, false);
        if (witness->parsed()) return cmd_analyze(opt, out, false, true);
        if (oracle->parsed()) return cmd_oracle(opt, out);
        err << "error: no command\n";
        return 1;
    } catch (const parse_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        err << "internal error: " << e.what() << "\n";
        return 70;
    }
}

} // namespace stab
