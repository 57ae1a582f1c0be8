// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "oracles/dense_oracle.hpp"
#include "support/cfg_oracle.hpp"
#include "support/generators.hpp"

#include "scamdetect/cfg.hpp"
#include "scamdetect/data.hpp"
#include "scamdetect/disasm.hpp"
#include "scamdetect/error.hpp"
#include "scamdetect/features.hpp"
#include "scamdetect/gnn.hpp"
#include "scamdetect/interp.hpp"
#include "scamdetect/model.hpp"
#include "scamdetect/obfuscate.hpp"
#include "scamdetect/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

using namespace scamdetect;
using namespace scamdetect::gnn;

namespace
{
constexpr std::uint64_t kSeed = 20260101;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

constexpr ModelKind kAllKinds[] = {ModelKind::Histogram, ModelKind::Gcn, ModelKind::Sage, ModelKind::Gin,
    ModelKind::Gat, ModelKind::Tag};

std::vector<DatasetRecord> synth_corpus()
{
    return split(synth_generate(200, 200, kSeed), {}, kSeed);
}

std::vector<DatasetRecord> of_split(const std::vector<DatasetRecord>& records, Split s)
{
    std::vector<DatasetRecord> out;
    for (const auto& r : records)
        if (r.split == s)
            out.push_back(r);
    return out;
}

std::vector<GraphSample> graphs_of_split(const std::vector<GraphSample>& samples, const char* name)
{
    std::vector<GraphSample> out;
    for (const auto& s : samples)
        if (s.split == name)
            out.push_back(s);
    return out;
}

const std::vector<NamedObfConfig>& robustness_configs()
{
    static const std::vector<NamedObfConfig> configs{{"junk", {{ObfPass::Junk}, 11, 0.5}},
        {"reorder", {{ObfPass::Reorder}, 12, 0.5}}, {"substitute", {{ObfPass::Substitute}, 13, 0.5}}};
    return configs;
}

Outcome disasm_round_trip()
{
    const auto t0 = Clock::now();
    testgen::Engine e{kSeed};
    std::size_t failures = 0;
    constexpr int kInputs = 10'000;
    for (int i = 0; i < kInputs; ++i)
    {
        const auto code = testgen::random_bytes(e, 4096);
        if (reencode(disassemble(code)) != code)
            ++failures;
    }
    const double dt = seconds_since(t0);
    return {failures == 0 && dt < 10.0,
        std::to_string(kInputs) + " inputs, " + std::to_string(failures) + " mismatches, " + fmt(dt) + " s"};
}

Outcome cfg_oracle_corpus()
{
    const auto cases = testgen::check_cfg_oracle(SCAMDETECT_TEST_DATA_DIR "/cfg_oracle.json");
    std::string bad;
    for (const auto& c : cases)
        if (!c.mismatches.empty())
            bad += " " + c.name + "(" + c.mismatches.front() + ")";
    return {cases.size() >= 10 && bad.empty(),
        std::to_string(cases.size()) + " hand-traced cases" + (bad.empty() ? "" : "; mismatches:" + bad)};
}

Outcome idiom_resolution()
{
    testgen::Engine e{kSeed + 3};
    std::size_t sites = 0, resolved = 0;
    while (sites < 600)
    {
        const auto contract = testgen::idiom_contract(e, testgen::pick(e, 2, 10));
        const auto c = build_cfg(contract.code);
        for (const auto& [jump_at, dest] : contract.sites)
        {
            ++sites;
            const auto from = std::find_if(c.blocks.begin(), c.blocks.end(),
                [&](const BasicBlock& b) { return b.instructions.back().offset == jump_at; });
            if (from == c.blocks.end())
                continue;
            bool ok = true, found = false;
            for (const auto& ed : c.edges)
                if (ed.from == from->id)
                {
                    found = true;
                    ok = ok && ed.kind == EdgeKind::Jump && ed.to != kUnknownBlock &&
                         c.blocks[ed.to].start_offset == dest;
                }
            if (found && ok)
                ++resolved;
        }
    }
    return {resolved == sites && sites >= 500, std::to_string(resolved) + "/" + std::to_string(sites) + " sites resolved"};
}

Outcome dense_oracle()
{
    testgen::Engine e{kSeed + 4};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        const auto s = testgen::random_sample(e, 16);
        const auto g = make_graph(s);
        const auto a = oracle::adjacency(s.num_nodes, s.edges);
        const auto f = testgen::pick(e, 1, 18);
        const auto hid = testgen::pick(e, 1, 8);
        const auto h = testgen::random_matrix(e, s.num_nodes, f);
        const auto oh = testgen::to_oracle(h);
        const auto w1 = testgen::random_matrix(e, f, hid);
        const auto w2 = testgen::random_matrix(e, f, hid);
        const auto w3 = testgen::random_matrix(e, hid, hid);
        const auto att = testgen::random_matrix(e, 2 * hid, 1);
        std::vector<DenseMatrix> ws{w1, w2, testgen::random_matrix(e, f, hid), testgen::random_matrix(e, f, hid)};
        std::vector<oracle::Mat> ow;
        for (const auto& w : ws)
            ow.push_back(testgen::to_oracle(w));
        const double diffs[] = {
            testgen::max_diff(gcn_layer(h, g, w1), oracle::gcn(oh, a, testgen::to_oracle(w1))),
            testgen::max_diff(sage_layer(h, g, w1, w2), oracle::sage(oh, a, testgen::to_oracle(w1), testgen::to_oracle(w2))),
            testgen::max_diff(gin_layer(h, g, w1, w3),
                oracle::gin(oh, a, testgen::to_oracle(w1), testgen::to_oracle(w3), 0.0)),
            testgen::max_diff(gat_layer(h, g, w1, att), oracle::gat(oh, a, testgen::to_oracle(w1), att.data(), 0.2)),
            testgen::max_diff(tag_layer(h, g, ws), oracle::tag(oh, a, ow)),
        };
        for (const double d : diffs)
            worst = std::max(worst, std::isfinite(d) ? d : 1e300);
    }
    return {worst <= 1e-6, "100 graphs x 5 layers, max abs diff " + fmt(worst)};
}

Outcome gradient_checks()
{
    const auto t0 = Clock::now();
    testgen::Engine e{kSeed + 5};
    double worst = 0.0;
    std::size_t checked = 0, kinks = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const auto s = testgen::random_sample(e, 8);
        for (const auto k : kAllKinds)
        {
            const auto r = grad_check(k, s, seed);
            worst = std::max(worst, r.max_rel_error);
            checked += r.checked;
            kinks += r.skipped_kinks;
        }
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-3 && dt < 60.0,
        "6 kinds x 20 seeds, " + std::to_string(checked) + " coordinates (" + std::to_string(kinks) +
            " at kinks), max rel error " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Outcome permutation_invariance()
{
    testgen::Engine e{kSeed + 6};
    double worst = 0.0;
    for (const auto k : kAllKinds)
    {
        const auto p = init_params(k, kSeed);
        for (int i = 0; i < 50; ++i)
        {
            const auto s = testgen::random_sample(e, 16);
            const auto t = testgen::permute(s, testgen::random_permutation(e, s.num_nodes));
            worst = std::max(worst, std::abs(forward(p, s) - forward(p, t)));
        }
    }
    return {worst <= 1e-9, "6 kinds x 50 permutations, max diff " + fmt(worst)};
}

struct DetectionRun
{
    std::string model_json;
    std::string metrics_json;
    Metrics metrics;
    std::size_t train = 0, val = 0, test = 0;
    double seconds = 0.0;
};

DetectionRun detection_run()
{
    const auto t0 = Clock::now();
    const auto fr = featurize(synth_corpus(), 1);
    if (!fr.errors.empty())
        throw Error{ErrorCode::PreconditionViolated, "synthetic corpus failed to featurize"};
    const auto train_set = graphs_of_split(fr.samples, "train");
    const auto test_set = graphs_of_split(fr.samples, "test");
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.seed = kSeed;
    const auto report = train(ModelKind::Gcn, train_set, cfg);
    DetectionRun run;
    run.metrics = evaluate(report.model, test_set);
    run.model_json = dump_stable(to_json(report.model));
    run.metrics_json = dump_stable(to_json(run.metrics));
    run.train = train_set.size();
    run.val = graphs_of_split(fr.samples, "val").size();
    run.test = test_set.size();
    run.seconds = seconds_since(t0);
    return run;
}

Outcome detection(const DetectionRun& run)
{
    const bool sizes = run.train == 320 && run.val == 40 && run.test == 40;
    return {sizes && run.metrics.accuracy >= 0.90 && run.seconds < 300.0,
        "split " + std::to_string(run.train) + "/" + std::to_string(run.val) + "/" + std::to_string(run.test) +
            ", GCN test accuracy " + fmt(run.metrics.accuracy) + ", " + fmt(run.seconds) + " s"};
}

Outcome obfuscation_preservation()
{
    const auto test = of_split(synth_corpus(), Split::Test);
    const std::vector<std::pair<std::string, std::vector<ObfPass>>> pass_sets{{"junk", {ObfPass::Junk}},
        {"reorder", {ObfPass::Reorder}}, {"substitute", {ObfPass::Substitute}},
        {"composite", {ObfPass::Junk, ObfPass::Reorder, ObfPass::Substitute}}};
    std::size_t subset = 0, checks = 0, equivalent = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
    {
        const auto code = test[i].code();
        if (check_equivalence(code, code, 32, kSeed).verdict != Verdict::Equivalent)
            continue;
        ++subset;
        for (std::size_t p = 0; p < pass_sets.size(); ++p)
        {
            const auto obf = obfuscate(code, {pass_sets[p].second, kSeed + i * 7 + p, 0.5});
            ++checks;
            if (check_equivalence(code, obf, 32, kSeed + i).verdict == Verdict::Equivalent)
                ++equivalent;
        }
    }
    return {subset > 0 && equivalent == checks,
        std::to_string(subset) + "/" + std::to_string(test.size()) + " test contracts in the interpreter subset, " +
            std::to_string(equivalent) + "/" + std::to_string(checks) + " equivalent over 32 vectors"};
}

Outcome obfuscation_drift()
{
    const auto records = synth_corpus();
    std::size_t changed = 0;
    double min_l1 = 1e300;
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        const auto code = records[i].code();
        const auto obf = obfuscate(code, {{ObfPass::Junk}, kSeed + i, 0.5});
        const auto a = opcode_histogram(disassemble(code));
        const auto b = opcode_histogram(disassemble(obf));
        double l1 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            l1 += std::abs(a[k] - b[k]);
        min_l1 = std::min(min_l1, l1);
        if (l1 > 0.0)
            ++changed;
    }
    return {changed == records.size(), std::to_string(changed) + "/" + std::to_string(records.size()) +
                                           " histograms moved, min L1 " + fmt(min_l1)};
}

bytes metadata_trailer(testgen::Engine& e)
{
    bytes t{0xa2, 0x64, 'i', 'p', 'f', 's', 0x58, 0x22};
    for (int i = 0; i < 34; ++i)
        t.push_back(static_cast<std::uint8_t>(testgen::pick(e, 0, 255)));
    const std::uint8_t version[] = {0x64, 's', 'o', 'l', 'c', 0x43, 0x00, 0x08, 0x13};
    t.insert(t.end(), std::begin(version), std::end(version));
    const auto len = t.size();
    t.push_back(static_cast<std::uint8_t>(len >> 8));
    t.push_back(static_cast<std::uint8_t>(len & 0xff));
    return t;
}

DatasetRecord record(std::string address, const bytes& code)
{
    return {std::move(address), to_hex(code, true), Label::Benign, RecordSource::File, {}};
}

Outcome dedup_checks()
{
    testgen::Engine e{kSeed + 10};
    std::size_t pattern_failures = 0;
    for (int i = 0; i < 200; ++i)
    {
        Address impl{};
        for (auto& b : impl)
            b = static_cast<std::uint8_t>(testgen::pick(e, 0, 255));
        const auto ref = parse_hex("363d3d373d3d3d363d73" + to_hex(impl) + "5af43d82803e903d91602b57fd5bf3").code;
        if (minimal_proxy_code(impl) != ref || is_minimal_proxy(ref) != impl)
            ++pattern_failures;
        auto mutated = ref;
        const auto pos = testgen::pick(e, 0, ref.size() - 1);
        mutated[pos] ^= 0x01;
        if (pos >= 10 && pos < 30)
        {
            if (!is_minimal_proxy(mutated))
                ++pattern_failures;
        }
        else if (is_minimal_proxy(mutated))
            ++pattern_failures;
        auto longer = ref;
        longer.push_back(0x00);
        if (is_minimal_proxy(longer) || is_minimal_proxy(bytes(ref.begin(), ref.end() - 1)))
            ++pattern_failures;
    }

    std::size_t idempotence_failures = 0, collapse_failures = 0;
    for (int round = 0; round < 100; ++round)
    {
        std::vector<DatasetRecord> records;
        std::vector<bytes> bodies;
        for (int b = 0; b < 4; ++b)
            bodies.push_back(testgen::random_bytes(e, 64));
        const auto n = testgen::pick(e, 1, 24);
        for (std::size_t i = 0; i < n; ++i)
        {
            auto code = bodies[testgen::pick(e, 0, bodies.size() - 1)];
            if (code.empty())
                code.push_back(0x00);
            if (testgen::pick(e, 0, 1))
            {
                const auto t = metadata_trailer(e);
                code.insert(code.end(), t.begin(), t.end());
            }
            if (testgen::pick(e, 0, 4) == 0)
            {
                Address impl{};
                impl[19] = static_cast<std::uint8_t>(testgen::pick(e, 0, 2));
                code = minimal_proxy_code(impl);
            }
            records.push_back(record("0x" + std::to_string(round) + "_" + std::to_string(i), code));
        }
        const auto once = dedup(records);
        const auto twice = dedup(once.kept);
        if (twice.kept != once.kept || !twice.dropped.empty())
            ++idempotence_failures;

        // Same body with different trailers: exactly one survivor per body.
        std::vector<DatasetRecord> variants;
        const auto body = bodies[0].empty() ? bytes{0x00} : bodies[0];
        for (int v = 0; v < 5; ++v)
        {
            auto code = body;
            const auto t = metadata_trailer(e);
            code.insert(code.end(), t.begin(), t.end());
            variants.push_back(record("0xv" + std::to_string(v), code));
        }
        if (dedup(variants).kept.size() != 1)
            ++collapse_failures;
    }
    return {pattern_failures == 0 && idempotence_failures == 0 && collapse_failures == 0,
        "proxy pattern failures " + std::to_string(pattern_failures) + ", idempotence failures " +
            std::to_string(idempotence_failures) + ", trailer collapse failures " + std::to_string(collapse_failures)};
}

struct RobustnessRun
{
    std::string json;
    RobustnessReport report;
};

RobustnessRun robustness_run()
{
    const auto records = synth_corpus();
    const auto fr = featurize(records, 1);
    const auto train_set = graphs_of_split(fr.samples, "train");
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.seed = kSeed;
    const auto gnn = train(ModelKind::Gcn, train_set, cfg).model;
    const auto base = train(ModelKind::Histogram, train_set, cfg).model;
    RobustnessRun run;
    run.report = robustness_report(gnn, base, of_split(records, Split::Test), robustness_configs(), 1);
    run.json = dump_stable(to_json(run.report));
    return run;
}

Outcome robustness(const RobustnessRun& run)
{
    const auto& r = run.report;
    bool ok = r.obfuscated.size() == robustness_configs().size() && r.clean.n > 0 && r.baseline_clean.n > 0;
    std::string detail = "clean GCN " + fmt(r.clean.accuracy) + " / histogram " + fmt(r.baseline_clean.accuracy);
    for (const auto& o : r.obfuscated)
    {
        ok = ok && o.gnn.n == r.clean.n && o.baseline.n == r.clean.n && o.spot_check.checked > 0 &&
             o.spot_check.equivalent + o.spot_check.unsupported == o.spot_check.checked;
        detail += "; " + o.config.name + ": drop " + fmt(o.gnn_accuracy_drop) + " / " +
                  fmt(o.baseline_accuracy_drop) + ", spot-check " + std::to_string(o.spot_check.equivalent) + "/" +
                  std::to_string(o.spot_check.checked) + " equivalent";
    }
    return {ok, detail};
}

int report(int number, const char* name, const std::function<Outcome()>& fn)
{
    Outcome o;
    try
    {
        o = fn();
    }
    catch (const std::exception& e)
    {
        o = {false, std::string{"exception: "} + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", number, name, o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}
}  // namespace

int main()
{
    int failures = 0;
    failures += report(1, "disassembler round-trip", disasm_round_trip);
    failures += report(2, "cfg oracle corpus", cfg_oracle_corpus);
    failures += report(3, "compiler-idiom jump resolution", idiom_resolution);
    failures += report(4, "gnn layers vs dense oracles", dense_oracle);
    failures += report(5, "gradient checks", gradient_checks);
    failures += report(6, "permutation invariance", permutation_invariance);

    std::vector<DetectionRun> detections;
    failures += report(7, "synthetic detection accuracy", [&] {
        detections.push_back(detection_run());
        return detection(detections.back());
    });
    failures += report(8, "obfuscation preserves semantics", obfuscation_preservation);
    failures += report(9, "junk insertion shifts histograms", obfuscation_drift);
    failures += report(10, "deduplication", dedup_checks);

    std::vector<RobustnessRun> robustness_runs;
    failures += report(11, "robustness report", [&] {
        robustness_runs.push_back(robustness_run());
        return robustness(robustness_runs.back());
    });
    failures += report(12, "determinism", [&]() -> Outcome {
        if (detections.empty() || robustness_runs.empty())
            return {false, "earlier runs did not complete"};
        const auto d = detection_run();
        const auto r = robustness_run();
        const bool same_model = d.model_json == detections[0].model_json;
        const bool same_metrics = d.metrics_json == detections[0].metrics_json;
        const bool same_report = r.json == robustness_runs[0].json;
        return {same_model && same_metrics && same_report,
            std::string{"model "} + (same_model ? "identical" : "differs") + ", metrics " +
                (same_metrics ? "identical" : "differs") + ", robustness report " +
                (same_report ? "identical" : "differs")};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
