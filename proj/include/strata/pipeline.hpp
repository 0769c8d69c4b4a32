#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "strata/isomorphism.hpp"
#include "strata/recovery.hpp"
#include "strata/sampler.hpp"

namespace strata {

struct RunConfig {
    Scalar epsilon = 1;
    Scalar R = 14;
    std::string input;
    std::string output;
    std::string dump_partitions;
    std::string dump_classification;
    std::string plot;
    int threads = 0;  // 0: STRATA_THREADS env or hardware concurrency
    bool unsafe_thresholds = false;
    bool exact_signatures = false;
    Scalar slack_override = -1;
    Scalar witness_radius_override = -1;
    Scalar diameter_bound_override = -1;
    bool bracket_antipodal = false;

    Thresholds make_thresholds() const {
        Thresholds t = Thresholds::make(epsilon, R, !unsafe_thresholds);
        if (slack_override >= 0) t.slack = slack_override;
        if (witness_radius_override > 0) t.witness_r = witness_radius_override;
        return t;
    }

    int effective_threads() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("STRATA_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc ? static_cast<int>(hc) : 1;
    }

    ClassifyOptions classify_options() const {
        ClassifyOptions opt;
        opt.exact_signatures = exact_signatures;
        if (diameter_bound_override > 0) opt.diameter_bound = diameter_bound_override;
        opt.bracket_antipodal = bracket_antipodal;
        opt.full_signature = !dump_classification.empty();
        return opt;
    }
};

/// Classify every sample, farming index ranges over a worker pool.  Records
/// are written into per-index slots, so the result does not depend on the
/// thread count.
inline Partition classify_all(const LocalToolkit& tk, const ClassifyOptions& opt, int threads) {
    Partition part;
    const std::size_t n = tk.cloud().size();
    part.records.resize(n);
    threads = std::max(1, threads);
    if (n < 64) threads = 1;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    auto worker = [&]() {
        auto scratch = tk.make_scratch();
        const std::size_t chunk = 256;
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) break;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i)
                    part.records[i] = tk.classify(static_cast<std::uint32_t>(i), scratch, opt);
            } catch (const std::exception& e) {
                std::scoped_lock lk(error_mutex);
                failed = true;
                if (error.empty()) error = e.what();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed) throw internal_consistency_error(error);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (part.records[i].is_maximal)
            part.lm[part.records[i].dimension].push_back(i);
        else
            part.nlm.push_back(i);
    }
    return part;
}

inline void dump_classification_file(const std::string& path, const Partition& part) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    for (const auto& r : part.records) {
        os << r.index << " " << r.rk0 << " " << r.rk1 << " " << (r.is_maximal ? 1 : 0) << " "
           << r.dimension << " " << to_string(r.fired) << "\n";
    }
}

inline void dump_partitions_file(const std::string& path, const RecoveryResult& res) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < res.partitions.size(); ++i) {
        const auto& p = res.partitions[i];
        os << "partition " << i << " label " << p.label << " size " << p.members.size();
        os << " se";
        for (int e : p.se) os << " " << e;
        os << " st";
        for (int t : p.st) os << " " << t;
        os << "\n";
    }
}

/// Minimal SVG scatter of the first two coordinates, coloured by class.
inline void write_plot(const std::string& path, const PointCloud& cloud, const Partition& part) {
    Scalar minx = 0, maxx = 1, miny = 0, maxy = 1;
    if (!cloud.empty()) {
        minx = maxx = cloud[0][0];
        miny = maxy = cloud[0][1];
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            minx = std::min(minx, cloud[i][0]);
            maxx = std::max(maxx, cloud[i][0]);
            miny = std::min(miny, cloud[i][1]);
            maxy = std::max(maxy, cloud[i][1]);
        }
    }
    const Scalar w = 800, pad = 20;
    const Scalar span = std::max({maxx - minx, maxy - miny, 1e-9});
    const Scalar s = (w - 2 * pad) / span;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << w << "'>\n";
    static const char* colour[4] = {"#888888", "#1f77b4", "#2ca02c", "#d62728"};
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto& r = part.records[i];
        const int c = r.is_maximal ? 1 + r.dimension : 0;
        os << "<circle cx='" << pad + (cloud[i][0] - minx) * s << "' cy='"
           << w - pad - (cloud[i][1] - miny) * s << "' r='1.5' fill='" << colour[c] << "'/>\n";
    }
    os << "</svg>\n";
}

struct RecoverOutcome {
    IncidenceGraph graph;
    std::array<int, 3> counts{0, 0, 0};
};

inline RecoverOutcome run_recover_on_cloud(const PointCloud& cloud, const RunConfig& cfg,
                                           std::vector<std::string>* log = nullptr) {
    if (cloud.empty()) throw std::invalid_argument("point cloud is empty");
    const Thresholds t = cfg.make_thresholds();
    LocalToolkit tk(cloud, t);
    Partition part = classify_all(tk, cfg.classify_options(), cfg.effective_threads());
    RecoveryResult res = recover_structure(tk, part, log);
    if (!cfg.dump_classification.empty()) dump_classification_file(cfg.dump_classification, part);
    if (!cfg.dump_partitions.empty()) dump_partitions_file(cfg.dump_partitions, res);
    if (!cfg.plot.empty()) write_plot(cfg.plot, cloud, part);
    RecoverOutcome out;
    out.counts = res.graph.weight_counts();
    out.graph = std::move(res.graph);
    return out;
}

inline RecoverOutcome run_recover(const RunConfig& cfg) {
    PointCloud cloud = load_cloud(cfg.input);
    RecoverOutcome out = run_recover_on_cloud(cloud, cfg);
    if (!cfg.output.empty()) {
        std::ofstream os(cfg.output);
        if (!os) throw std::runtime_error("cannot open " + cfg.output + " for writing");
        write_incidence_graph(os, out.graph);
    }
    std::cout << "vertices=" << out.counts[0] << " edges=" << out.counts[1]
              << " triangles=" << out.counts[2] << "\n";
    return out;
}

struct BenchmarkRow {
    std::string fixture;
    Scalar R = 0, noise = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    bool counts_ok = false;
    double seconds = 0;
    std::string error;
};

struct BenchmarkConfig {
    std::vector<std::string> fixtures;  // empty: whole catalog
    std::vector<Scalar> rvalues{14, 16};
    std::vector<Scalar> noises{0, 0.4};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    Scalar epsilon = 1;
    int threads = 0;
    bool exact_signatures = false;
};

inline std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& bc,
                                               std::ostream& os = std::cout) {
    std::vector<BenchmarkRow> rows;
    const auto fixtures = bc.fixtures.empty() ? fixture_names() : bc.fixtures;
    for (const auto& name : fixtures) {
        for (Scalar R : bc.rvalues) {
            const Thresholds t = Thresholds::make(bc.epsilon, R);
            const LinearEmbedding E = fixture(name, t);
            const IncidenceGraph truth = incidence_graph_of(E.complex);
            for (Scalar noise : bc.noises) {
                for (std::uint64_t seed : bc.seeds) {
                    BenchmarkRow row{name, R, noise, seed, false, false, 0, ""};
                    const auto start = std::chrono::steady_clock::now();
                    try {
                        SamplingSpec spec;
                        spec.epsilon = bc.epsilon;
                        spec.density_step = bc.epsilon / 2;
                        spec.noise_amplitude = noise;
                        spec.seed = seed;
                        spec.verify_hausdorff = false;  // checked separately in tests
                        PointCloud cloud = sample(E, spec);
                        RunConfig cfg;
                        cfg.epsilon = bc.epsilon;
                        cfg.R = R;
                        cfg.threads = bc.threads;
                        cfg.exact_signatures = bc.exact_signatures;
                        auto out = run_recover_on_cloud(cloud, cfg);
                        row.pass = graphs_isomorphic(out.graph, truth);
                        const auto tc = truth.weight_counts();
                        row.counts_ok = out.counts == tc;
                    } catch (const std::exception& e) {
                        row.error = e.what();
                    }
                    row.seconds = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
                    os << (row.pass && row.counts_ok ? "PASS " : "FAIL ") << name << " R=" << R
                       << " noise=" << noise << " seed=" << seed << " (" << row.seconds << "s)"
                       << (row.error.empty() ? "" : "  error: " + row.error) << "\n";
                    rows.push_back(std::move(row));
                    if (noise == 0) {
                        // noise-free sampling is seed independent; replicate
                        for (std::size_t k = 1; k < bc.seeds.size(); ++k) {
                            BenchmarkRow dup = rows.back();
                            dup.seed = bc.seeds[k];
                            rows.push_back(dup);
                        }
                        break;
                    }
                }
            }
        }
    }
    return rows;
}

}  // namespace strata
