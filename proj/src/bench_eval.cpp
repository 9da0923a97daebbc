#include "decompkit/pipeline/bench_eval.hpp"

#include "decompkit/support/text_io.hpp"

#include <algorithm>
#include <iomanip>
#include <mutex>
#include <semaphore>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace dk::pipeline {

namespace fs = std::filesystem;

std::vector<BenchSample> load_benchmark(const fs::path& dir) {
    std::vector<BenchSample> out;
    if (!fs::exists(dir)) return out;
    std::vector<fs::path> sample_dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) sample_dirs.push_back(entry.path());
    }
    std::sort(sample_dirs.begin(), sample_dirs.end());
    for (const auto& sdir : sample_dirs) {
        if (!fs::exists(sdir / "source.c") || !fs::exists(sdir / "harness.c")) continue;
        BenchSample s;
        s.id = sdir.filename().string();
        s.source = read_file(sdir / "source.c");
        s.harness = read_file(sdir / "harness.c");
        if (fs::exists(sdir / "pseudo.txt")) s.pseudo = read_file(sdir / "pseudo.txt");
        if (fs::exists(sdir / "meta.json")) {
            auto meta = nlohmann::json::parse(read_file(sdir / "meta.json"));
            s.opt_level = meta.value("opt_level", "O0");
            s.original_name = meta.value("original_name", "");
            s.stripped = meta.value("stripped", false);
        } else {
            s.opt_level = "O0";
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::string> validate_benchmark(const std::vector<BenchSample>& bench,
                                            const reward::CompilerConfig& config) {
    std::vector<std::string> failing(bench.size());
    parallel_for(bench.size(), std::thread::hardware_concurrency(), [&](size_t i) {
        const BenchSample& s = bench[i];
        metrics::TestCaseSuite suite{s.harness, 0, 5000};
        metrics::ReexecResult r = metrics::reexecute(s.source, suite, s.original_name, config);
        if (!r.passed) failing[i] = s.id;
    });
    std::vector<std::string> out;
    for (auto& id : failing)
        if (!id.empty()) out.push_back(std::move(id));
    return out;
}

EvalReport run_benchmark(const std::vector<BenchSample>& bench,
                         const std::map<std::string, std::string>& generated,
                         const std::string& task, const EvalOptions& options) {
    if (bench.empty()) throw metrics::EmptyInput("benchmark has no samples");
    EvalReport report;
    report.task = task;
    if (task == "r2i") report.weights_id = options.weights.weights_id;
    if (task == "judge" && options.judge_client)
        report.judge_model_id = options.judge_client->model_id();

    report.samples.resize(bench.size());
    std::mutex judge_mutex;
    int judge_slots = std::max(1, options.judge_max_inflight);
    std::counting_semaphore<256> judge_sem{judge_slots};

    unsigned jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
    parallel_for(bench.size(), jobs, [&](size_t i) {
        const BenchSample& s = bench[i];
        SampleEval& eval = report.samples[i];
        eval.id = s.id;
        eval.opt_level = s.opt_level;

        auto gen_it = generated.find(s.id);
        if (gen_it == generated.end()) {
            eval.error = "no generated output for sample";
            if (task == "reexec") {
                metrics::ReexecResult r;
                r.stage_failed = metrics::Stage::Compile;
                eval.reexec = r;
            } else if (task == "r2i") {
                metrics::R2IScore score;
                score.value = 0.0;
                score.parse_ok = false;
                score.weights_id = options.weights.weights_id;
                eval.r2i = score;
            }
            return;
        }
        const std::string& gen = gen_it->second;

        if (task == "reexec") {
            metrics::TestCaseSuite suite{s.harness, 0, 5000};
            eval.reexec = metrics::reexecute(gen, suite, s.original_name, options.compiler);
        } else if (task == "r2i") {
            eval.r2i = metrics::r2i_score(gen, options.weights);
        } else if (task == "judge") {
            if (!options.judge_client) {
                eval.error = "no judge client configured";
                return;
            }
            judge_sem.acquire();
            try {
                eval.judge = metrics::judge_identifier_quality(gen, s.source,
                                                               *options.judge_client);
            } catch (const std::exception& e) {
                eval.error = e.what();
            }
            judge_sem.release();
        } else {
            eval.error = "unknown task: " + task;
        }
    });

    std::sort(report.samples.begin(), report.samples.end(),
              [](const SampleEval& a, const SampleEval& b) { return a.id < b.id; });

    // r2i scores are only comparable under one weight table
    for (const auto& eval : report.samples) {
        if (eval.r2i && eval.r2i->weights_id != options.weights.weights_id) {
            throw std::invalid_argument("mixed r2i weights_id in one report: " +
                                        eval.r2i->weights_id + " vs " +
                                        options.weights.weights_id);
        }
    }

    auto fold = [&](LevelAggregate& agg, const SampleEval& eval) {
        ++agg.samples;
        if (eval.reexec && eval.reexec->passed) agg.reexec_rate += 1.0;
        if (eval.r2i) agg.r2i_mean += eval.r2i->value;
        if (eval.judge) {
            agg.judge_mean += eval.judge->rating;
            ++agg.judged;
        }
    };
    for (const auto& eval : report.samples) {
        fold(report.per_level[eval.opt_level], eval);
        fold(report.overall, eval);
    }
    auto finish = [](LevelAggregate& agg) {
        if (agg.samples > 0) {
            agg.reexec_rate /= double(agg.samples);
            agg.r2i_mean /= double(agg.samples);
        }
        if (agg.judged > 0) agg.judge_mean /= double(agg.judged);
    };
    for (auto& [level, agg] : report.per_level) finish(agg);
    finish(report.overall);
    return report;
}

namespace {

double aggregate_value(const EvalReport& report, const LevelAggregate& agg) {
    if (report.task == "reexec") return agg.reexec_rate;
    if (report.task == "r2i") return agg.r2i_mean;
    return agg.judge_mean;
}

} // namespace

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json json;
    json["task"] = report.task;
    if (!report.weights_id.empty()) json["weights_id"] = report.weights_id;
    if (!report.judge_model_id.empty()) json["judge_model_id"] = report.judge_model_id;

    nlohmann::ordered_json levels;
    for (const auto& [level, agg] : report.per_level) {
        levels[level] = {{"samples", agg.samples},
                         {"value", aggregate_value(report, agg)}};
    }
    json["per_level"] = std::move(levels);
    json["overall"] = {{"samples", report.overall.samples},
                       {"value", aggregate_value(report, report.overall)}};

    auto rows = nlohmann::ordered_json::array();
    for (const auto& eval : report.samples) {
        nlohmann::ordered_json row;
        row["id"] = eval.id;
        row["opt_level"] = eval.opt_level;
        if (eval.reexec) {
            row["passed"] = eval.reexec->passed;
            row["stage_failed"] = metrics::stage_name(eval.reexec->stage_failed);
            row["exit_code"] = eval.reexec->exit_code;
        }
        if (eval.r2i) {
            row["r2i"] = eval.r2i->value;
            row["parse_ok"] = eval.r2i->parse_ok;
        }
        if (eval.judge) row["rating"] = eval.judge->rating;
        if (!eval.error.empty()) row["error"] = eval.error;
        rows.push_back(std::move(row));
    }
    json["samples"] = std::move(rows);
    return json.dump(2) + "\n";
}

std::string report_render_table(const EvalReport& report) {
    std::vector<std::string> levels;
    for (const auto& [level, agg] : report.per_level) levels.push_back(level);
    std::sort(levels.begin(), levels.end());

    std::ostringstream out;
    out << "task: " << report.task;
    if (!report.weights_id.empty()) out << "  (weights " << report.weights_id << ")";
    if (!report.judge_model_id.empty()) out << "  (judge " << report.judge_model_id << ")";
    out << "\n";

    out << std::left << std::setw(10) << "";
    for (const auto& level : levels) out << std::right << std::setw(9) << level;
    out << std::right << std::setw(9) << "AVG" << "\n";

    out << std::left << std::setw(10) << "value";
    out << std::fixed << std::setprecision(4);
    for (const auto& level : levels)
        out << std::right << std::setw(9) << aggregate_value(report, report.per_level.at(level));
    out << std::right << std::setw(9) << aggregate_value(report, report.overall) << "\n";

    out << std::left << std::setw(10) << "samples";
    for (const auto& level : levels)
        out << std::right << std::setw(9) << report.per_level.at(level).samples;
    out << std::right << std::setw(9) << report.overall.samples << "\n";
    return out.str();
}

} // namespace dk::pipeline
