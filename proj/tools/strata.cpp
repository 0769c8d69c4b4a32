// Command-line front end: sample synthetic clouds, recover incidence graphs,
// validate ground-truth files, and run the fixture benchmark.

#include <CLI11.hpp>

#include "strata/pipeline.hpp"
#include "strata/validate.hpp"

namespace {

// exit codes
constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kParse = 3;
constexpr int kThreshold = 4;
constexpr int kUnclassifiable = 5;
constexpr int kStructural = 6;

int cmd_sample(const std::string& fixture_name, double epsilon, double R, double noise,
               double step, std::uint64_t seed, const std::string& out,
               const std::string& truth_out, bool unsafe) {
    strata::Thresholds t = strata::Thresholds::make(epsilon, R, !unsafe);
    strata::LinearEmbedding E = strata::fixture(fixture_name, t);
    strata::SamplingSpec spec;
    spec.epsilon = epsilon;
    spec.density_step = step > 0 ? step : epsilon / 2;
    spec.noise_amplitude = noise;
    spec.seed = seed;
    strata::PointCloud cloud = strata::sample(E, spec);
    strata::save_cloud(out, cloud);
    if (!truth_out.empty()) strata::save_embedding(truth_out, E);
    std::cout << "sampled " << cloud.size() << " points (dim " << cloud.dim() << ") from "
              << fixture_name << "\n";
    return kOk;
}

int cmd_validate(const std::string& path, double epsilon, double R, bool unsafe) {
    strata::LinearEmbedding E = strata::load_embedding(path);
    strata::Thresholds t = strata::Thresholds::make(epsilon, R, !unsafe);
    const auto emb = strata::validate_embedding(E);
    const auto asm_rep = strata::validate_assumptions(E, t);
    for (const auto& v : emb.violations)
        std::cout << v.condition << ": " << v.detail << " (measured " << v.measured << ", bound "
                  << v.bound << ")\n";
    for (const auto& v : asm_rep.violations)
        std::cout << v.condition << ": " << v.detail << " (measured " << v.measured << ", bound "
                  << v.bound << ")\n";
    if (emb.ok() && asm_rep.ok()) {
        std::cout << "valid embedding, all assumption conditions hold\n";
        return kOk;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure recovery for sampled 2-complexes"};
    app.require_subcommand(1);

    // --- sample ---
    auto* s = app.add_subcommand("sample", "sample a fixture complex");
    std::string s_fixture, s_out, s_truth;
    double s_eps = 1, s_R = 14, s_noise = 0, s_step = 0;
    std::uint64_t s_seed = 0;
    bool s_unsafe = false;
    s->add_option("--fixture", s_fixture, "fixture name")->required();
    s->add_option("--epsilon", s_eps, "sampling density bound");
    s->add_option("--R", s_R, "shell radius");
    s->add_option("--noise", s_noise, "noise amplitude (< epsilon)");
    s->add_option("--step", s_step, "grid pitch (default epsilon/2)");
    s->add_option("--seed", s_seed, "random seed");
    s->add_option("--out", s_out, "output point-cloud file")->required();
    s->add_option("--truth", s_truth, "also write the ground-truth complex here");
    s->add_flag("--unsafe-thresholds", s_unsafe, "skip the 14..16 epsilon ratio check");

    // --- recover ---
    auto* r = app.add_subcommand("recover", "recover the incidence graph from a cloud");
    strata::RunConfig cfg;
    r->add_option("--cloud", cfg.input, "input point-cloud file")->required();
    r->add_option("--epsilon", cfg.epsilon, "sample density epsilon");
    r->add_option("--R", cfg.R, "shell radius R (14..16 epsilon)");
    r->add_option("--out", cfg.output, "output incidence-graph file");
    r->add_option("--dump-partitions", cfg.dump_partitions, "write partition summary");
    r->add_option("--dump-classification", cfg.dump_classification,
                  "write per-sample classification lines");
    r->add_option("--plot", cfg.plot, "write an SVG scatter of the classification");
    r->add_option("--threads", cfg.threads, "worker threads (default STRATA_THREADS or cores)");
    r->add_option("--slack", cfg.slack_override, "comparison slack override");
    r->add_option("--witness-radius", cfg.witness_radius_override, "witness radius override");
    r->add_option("--diameter-bound", cfg.diameter_bound_override,
                  "component diameter bound override");
    r->add_flag("--bracket-antipodal", cfg.bracket_antipodal,
                "use the bracketed width test variant");
    r->add_flag("--exact-signatures", cfg.exact_signatures,
                "force full boundary-matrix reduction for every sample");
    r->add_flag("--unsafe-thresholds", cfg.unsafe_thresholds,
                "skip the 14..16 epsilon ratio check");

    // --- validate ---
    auto* v = app.add_subcommand("validate", "check a ground-truth complex file");
    std::string v_path;
    double v_eps = 1, v_R = 14;
    bool v_unsafe = false;
    v->add_option("--complex", v_path, "ground-truth complex file")->required();
    v->add_option("--epsilon", v_eps, "epsilon");
    v->add_option("--R", v_R, "R");
    v->add_flag("--unsafe-thresholds", v_unsafe, "skip the ratio check");

    // --- benchmark ---
    auto* b = app.add_subcommand("benchmark", "fixture sweep with isomorphism checks");
    strata::BenchmarkConfig bc;
    int b_seeds = 5;
    b->add_option("--fixtures", bc.fixtures, "subset of fixtures (default: all)");
    b->add_option("--epsilon", bc.epsilon, "epsilon");
    b->add_option("--R", bc.rvalues, "R values");
    b->add_option("--noise", bc.noises, "noise amplitudes");
    b->add_option("--seeds", b_seeds, "number of seeds");
    b->add_option("--threads", bc.threads, "worker threads");
    b->add_flag("--exact-signatures", bc.exact_signatures, "force exact signatures");

    CLI11_PARSE(app, argc, argv);

    try {
        if (s->parsed())
            return cmd_sample(s_fixture, s_eps, s_R, s_noise, s_step, s_seed, s_out, s_truth,
                              s_unsafe);
        if (v->parsed()) return cmd_validate(v_path, v_eps, v_R, v_unsafe);
        if (r->parsed()) {
            strata::run_recover(cfg);
            return kOk;
        }
        if (b->parsed()) {
            bc.seeds.clear();
            for (int i = 1; i <= b_seeds; ++i) bc.seeds.push_back(static_cast<std::uint64_t>(i));
            const auto start = std::chrono::steady_clock::now();
            auto rows = strata::run_benchmark(bc);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            int pass = 0;
            for (const auto& row : rows) pass += (row.pass && row.counts_ok) ? 1 : 0;
            std::cout << pass << "/" << rows.size() << " runs recovered the ground truth in "
                      << secs << "s\n";
            return pass == static_cast<int>(rows.size()) ? kOk : 1;
        }
    } catch (const strata::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const strata::unclassifiable_partition_error& e) {
        std::cerr << "unclassifiable partition: " << e.what() << "\n";
        return kUnclassifiable;
    } catch (const strata::structural_error& e) {
        std::cerr << "structural error: " << e.what() << "\n";
        return kStructural;
    } catch (const strata::internal_consistency_error& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return kStructural;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        const std::string msg = e.what();
        return msg.find("epsilon") != std::string::npos ? kThreshold : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
