// ashg - additively separable hedonic games under valuation updates.
// Subcommands: check, distance, nearest, repair, gen, reduce, simulate,
// enumerate-stable. JSON in, JSON (or table) out; exit codes: 0 ok,
// 1 "not stable" (check only), 2 input/contract error, 3 resource error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ashg/errors.hpp"
#include "ashg/instances.hpp"
#include "ashg/json_io.hpp"
#include "ashg/nearby.hpp"
#include "ashg/repair.hpp"
#include "ashg/simseq.hpp"

namespace {

constexpr const char* kVersion = "ashg 0.1.0 (instance schema 1)";

ashg::Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ashg::input_error("cannot open '" + path + "'");
    try {
        return ashg::Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ashg::input_error("malformed JSON in '" + path + "': " + e.what());
    }
}

struct Output {
    std::string path;    // empty: stdout
    std::string format;  // "json" or "table"

    void emit(const ashg::Json& j, const std::string& table) const {
        std::string text = format == "table" ? table : j.dump(2) + "\n";
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(path);
            if (!out) throw ashg::input_error("cannot write '" + path + "'");
            out << text;
        }
    }
};

ashg::Notion parse_notion(const std::string& s) { return ashg::notion_from_name(s); }

int run(int argc, char** argv) {
    CLI::App app{"Solver toolkit for additively separable hedonic games under valuation updates"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // accept global options after the subcommand name

    Output out;
    app.add_option("--output", out.path, "write the result to a file instead of stdout");
    out.format = "json";
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for the nearest search")
        ->check(CLI::PositiveNumber);

    // ---- check
    auto* check = app.add_subcommand("check", "decide whether a partition is stable");
    std::string check_game, check_partition, check_notion = "ns";
    check->add_option("--game", check_game, "game JSON")->required();
    check->add_option("--partition", check_partition, "partition JSON")->required();
    check->add_option("--notion", check_notion, "ns|is|cns|cis")->required();

    // ---- distance
    auto* dist = app.add_subcommand("distance", "single-agent-move distance between partitions");
    std::string dist_a, dist_b;
    dist->add_option("--a", dist_a, "first partition JSON")->required();
    dist->add_option("--b", dist_b, "second partition JSON")->required();

    // ---- nearest
    auto* nearest = app.add_subcommand("nearest", "nearest stable partition within a budget");
    std::string nearest_instance;
    std::size_t nearest_cap = ashg::kDefaultVisitedCap;
    nearest->add_option("--instance", nearest_instance,
                        "instance JSON {game, partition, update, notion, k}")
        ->required();
    nearest->add_option("--visited-cap", nearest_cap, "visited-set memory guard");

    // ---- repair
    auto* repair = app.add_subcommand("repair", "constructive stability repair");
    std::string repair_instance, repair_algorithm = "close-cns";
    std::uint64_t repair_seed = 0;
    bool repair_random = false;
    repair->add_option("--instance", repair_instance, "instance JSON (single-pair update)")
        ->required();
    repair->add_option("--algorithm", repair_algorithm, "close-cns|cis-dynamics")
        ->check(CLI::IsMember({"close-cns", "cis-dynamics"}));
    repair->add_flag("--random-policy", repair_random, "pick deviations at random (needs --seed)");
    auto* repair_seed_opt = repair->add_option("--seed", repair_seed, "policy seed");

    // ---- gen (random | fig3 | fig4 | fig5 | reduce)
    auto* gen = app.add_subcommand("gen", "generate games and instances");
    gen->require_subcommand(1);
    auto* gen_random = gen->add_subcommand("random", "random restricted-class game");
    int gr_n = 6;
    std::string gr_class = "feg";
    bool gr_asym = false;
    std::optional<std::uint64_t> gr_seed;
    std::vector<std::string> gr_palette;
    gen_random->add_option("--n", gr_n, "agent count")->required();
    gen_random->add_option("--class", gr_class, "general|strict|feng|feg|afg|aeg");
    gen_random->add_flag("--asymmetric", gr_asym, "draw directed valuations");
    gen_random->add_option("--seed", gr_seed, "generator seed (required)");
    gen_random->add_option("--palette", gr_palette, "value palette, e.g. -1 1 2/3");

    auto* gen_fig3 = gen->add_subcommand("fig3", "tight eight-agent repair instance");
    auto* gen_fig4 = gen->add_subcommand("fig4", "directed-cycle lower-bound instance");
    int f4_n = 6;
    std::string f4_notion = "cis";
    gen_fig4->add_option("--n", f4_n, "agent count (>= 4)");
    gen_fig4->add_option("--notion", f4_notion, "cns|cis");
    auto* gen_fig5 = gen->add_subcommand("fig5", "alternating hub gadget (both directions)");
    int f5_n = 6;
    std::string f5_notion = "is";
    gen_fig5->add_option("--n", f5_n, "agent count (>= 6)");
    gen_fig5->add_option("--notion", f5_notion, "ns|is");

    auto make_reduce = [&](CLI::App* parent) {
        auto* r = parent->add_subcommand("reduce", "compile a cover instance into a gadget");
        return r;
    };
    auto* gen_reduce = make_reduce(gen);
    auto* reduce_alias = app.add_subcommand("reduce", "compile a cover instance into a gadget");
    std::string rd_theorem, rd_cover, rd_alpha = "1", rd_beta = "1", rd_notion = "cns";
    for (CLI::App* r : {gen_reduce, reduce_alias}) {
        r->add_option("--theorem", rd_theorem,
                      "thm43|thm51|thm52|thm57|thm58|thm59|thm510|thm510-afg")
            ->required();
        r->add_option("--cover", rd_cover, "cover instance JSON")->required();
        r->add_option("--alpha", rd_alpha, "positive rational or 'linear'");
        r->add_option("--beta", rd_beta, "positive rational or 'linear'");
        r->add_option("--notion", rd_notion, "ns|is|cns|cis");
    }

    // ---- simulate
    auto* sim = app.add_subcommand("simulate", "run an update sequence with a repair policy");
    std::string sim_game, sim_partition, sim_updates, sim_policy = "greedy", sim_notion = "ns";
    std::string sim_csv;
    int sim_m = 0;
    std::optional<std::uint64_t> sim_seed;
    sim->add_option("--game", sim_game, "game JSON")->required();
    sim->add_option("--partition", sim_partition, "stable start partition JSON")->required();
    sim->add_option("--updates", sim_updates, "updates JSON (array of update events)");
    sim->add_option("--random", sim_m, "generate this many random updates (needs --seed)");
    sim->add_option("--seed", sim_seed, "sequence seed");
    sim->add_option("--policy", sim_policy, "close-cns|cis|nearest:<k>|greedy");
    sim->add_option("--notion", sim_notion, "ns|is|cns|cis");
    sim->add_option("--csv", sim_csv, "also write step,distance,phi,sw rows here");

    // ---- enumerate-stable
    auto* enumerate = app.add_subcommand("enumerate-stable", "all stable partitions (small n)");
    std::string en_game, en_notion = "ns";
    int en_cap = 10;
    enumerate->add_option("--game", en_game, "game JSON")->required();
    enumerate->add_option("--notion", en_notion, "ns|is|cns|cis");
    enumerate->add_option("--cap", en_cap, "agent-count cap for exhaustive enumeration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help/--version keep 0; bad usage is an input error
    }

    if (check->parsed()) {
        ashg::Game g = ashg::game_from_json(load_json(check_game));
        ashg::Partition p = ashg::partition_from_json(load_json(check_partition), g.n());
        bool stable = ashg::is_stable(g, p, parse_notion(check_notion));
        out.emit(ashg::Json{{"stable", stable}},
                 std::string(stable ? "stable" : "not stable") + "\n");
        return stable ? 0 : 1;
    }

    if (dist->parsed()) {
        ashg::Json ja = load_json(dist_a), jb = load_json(dist_b);
        int n = 0;
        for (const auto& c : ja)
            for (const auto& v : c) n = std::max(n, v.get<int>() + 1);
        for (const auto& c : jb)
            for (const auto& v : c) n = std::max(n, v.get<int>() + 1);
        ashg::Partition a = ashg::partition_from_json(ja, n);
        ashg::Partition b = ashg::partition_from_json(jb, n);
        int d = ashg::partition_distance(a, b);
        out.emit(ashg::Json{{"distance", d}}, "distance " + std::to_string(d) + "\n");
        return 0;
    }

    if (nearest->parsed()) {
        ashg::AlteredInstance inst = ashg::instance_from_json(load_json(nearest_instance));
        ashg::SearchOutcome o = ashg::nearest_stable(inst, nearest_cap, jobs);
        std::ostringstream table;
        if (o.found)
            table << "found at distance " << o.distance << " after exploring " << o.explored
                  << " partitions\n";
        else
            table << "no stable partition within " << inst.k << " (explored " << o.explored
                  << ")\n";
        out.emit(ashg::outcome_to_json(o), table.str());
        return 0;
    }

    if (repair->parsed()) {
        ashg::AlteredInstance inst = ashg::instance_from_json(load_json(repair_instance));
        auto [a, b, v] = inst.update.single_pair();
        ashg::RepairReport rep;
        if (repair_algorithm == "close-cns") {
            rep = ashg::close_cns(inst.game, inst.start, {a, b}, v);
        } else {
            ashg::DynamicsPolicy pol = ashg::FirstInOrder{};
            if (repair_random) {
                if (repair_seed_opt->count() == 0)
                    throw ashg::input_error("--random-policy requires an explicit --seed");
                pol = ashg::RandomPolicy{repair_seed};
            }
            rep = ashg::cis_repair(inst.game, inst.start, {a, b}, v, pol);
        }
        std::ostringstream table;
        table << "repaired at distance " << rep.distance << " (" << rep.steps.steps.size()
              << " deviations, " << rep.merges.size() << " merges)\n";
        out.emit(ashg::repair_report_to_json(rep), table.str());
        return 0;
    }

    auto emit_bundle = [&](const ashg::GadgetBundle& b) {
        std::ostringstream table;
        table << b.provenance << ": n=" << b.game.n() << " notion=" << ashg::notion_name(b.notion)
              << " budget=" << b.budget << "\n";
        out.emit(ashg::bundle_to_json(b), table.str());
    };

    if (gen_random->parsed()) {
        if (!gr_seed) throw ashg::input_error("generator subcommands require an explicit --seed");
        std::vector<ashg::Rational> palette;
        for (const auto& s : gr_palette) palette.push_back(ashg::Rational::parse(s));
        ashg::Game g = ashg::gen_random_game(gr_n, ashg::game_class_from_name(gr_class), !gr_asym,
                                             *gr_seed, palette);
        out.emit(ashg::game_to_json(g),
                 "random " + gr_class + " game on " + std::to_string(gr_n) + " agents\n");
        return 0;
    }
    if (gen_fig3->parsed()) {
        emit_bundle(ashg::build_fig3_tight());
        return 0;
    }
    if (gen_fig4->parsed()) {
        emit_bundle(ashg::build_fig4_cycle(f4_n, parse_notion(f4_notion)));
        return 0;
    }
    if (gen_fig5->parsed()) {
        auto [down, up] = ashg::build_fig5_updown(f5_n, parse_notion(f5_notion));
        ashg::Json j{{"down", ashg::bundle_to_json(down)}, {"up", ashg::bundle_to_json(up)}};
        out.emit(j, "hub gadget on " + std::to_string(f5_n) + " agents (both directions)\n");
        return 0;
    }
    if (gen_reduce->parsed() || reduce_alias->parsed()) {
        ashg::CoverInstance cover = ashg::cover_from_json(load_json(rd_cover));
        ashg::ReductionParams params;
        params.alpha = ashg::ParamFn::parse(rd_alpha);
        params.beta = ashg::ParamFn::parse(rd_beta);
        emit_bundle(ashg::compile_reduction(rd_theorem, cover, params, parse_notion(rd_notion)));
        return 0;
    }

    if (sim->parsed()) {
        ashg::Game g = ashg::game_from_json(load_json(sim_game));
        ashg::Partition p = ashg::partition_from_json(load_json(sim_partition), g.n());
        ashg::Notion notion = parse_notion(sim_notion);
        ashg::UpdateSequence seq;
        if (!sim_updates.empty()) {
            seq.game = g;
            seq.start = p;
            seq.notion = notion;
            for (const auto& ju : load_json(sim_updates)) seq.updates.push_back(ashg::update_from_json(ju));
        } else {
            if (sim_m <= 0) throw ashg::input_error("provide --updates or --random <m> with --seed");
            if (!sim_seed) throw ashg::input_error("generator subcommands require an explicit --seed");
            seq = ashg::gen_update_sequence(g, p, notion, sim_m, *sim_seed);
        }
        ashg::SequencePolicy policy = ashg::GreedyDynamicsPolicy{};
        if (sim_policy == "close-cns") policy = ashg::CloseCnsPolicy{};
        else if (sim_policy == "cis") policy = ashg::CisDynamicsPolicy{};
        else if (sim_policy == "greedy") policy = ashg::GreedyDynamicsPolicy{};
        else if (sim_policy.rfind("nearest:", 0) == 0)
            policy = ashg::NearestStablePolicy{std::stoi(sim_policy.substr(8)),
                                               ashg::kDefaultVisitedCap};
        else throw ashg::input_error("unknown policy '" + sim_policy + "'");
        ashg::SequenceReport rep = ashg::run_sequence(seq, policy);
        if (!sim_csv.empty()) {
            std::ofstream csv(sim_csv);
            if (!csv) throw ashg::input_error("cannot write '" + sim_csv + "'");
            csv << ashg::sequence_report_to_csv(rep);
        }
        std::ostringstream table;
        table << rep.per_step.size() << " steps, total distance " << rep.total_distance;
        if (rep.average) table << ", average " << rep.average->str();
        table << (rep.completed ? "" : " [aborted: " + rep.failure + "]") << "\n";
        out.emit(ashg::sequence_report_to_json(rep), table.str());
        return 0;
    }

    if (enumerate->parsed()) {
        ashg::Game g = ashg::game_from_json(load_json(en_game));
        auto stable = ashg::enumerate_all_stable(g, parse_notion(en_notion), en_cap);
        ashg::Json arr = ashg::Json::array();
        for (const auto& p : stable) arr.push_back(ashg::partition_to_json(p));
        out.emit(ashg::Json{{"count", stable.size()}, {"partitions", arr}},
                 std::to_string(stable.size()) + " stable partitions\n");
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ashg::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const ashg::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
