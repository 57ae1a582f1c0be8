// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "scamdetect/pipeline.hpp"

#include "scamdetect/cfg.hpp"
#include "scamdetect/interp.hpp"
#include "scamdetect/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace scamdetect
{
namespace
{
using nlohmann::json;

/// Runs fn(i) for i in [0, n) on a small worker pool. fn must only write to
/// slot i of whatever it fills, so results do not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

double ratio(std::size_t num, std::size_t den)
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<GraphSample> featurize_all(const std::vector<DatasetRecord>& records,
    const std::vector<bytes>& codes, unsigned threads)
{
    std::vector<std::optional<GraphSample>> slots(records.size());
    std::vector<std::exception_ptr> failures(records.size());
    parallel_for(records.size(), threads, [&](std::size_t i) {
        try
        {
            auto s = graph_sample(build_cfg(codes[i]), records[i].label, records[i].address);
            if (records[i].split)
                s.split = std::string{split_name(*records[i].split)};
            slots[i] = std::move(s);
        }
        catch (...)
        {
            failures[i] = std::current_exception();
        }
    });
    std::vector<GraphSample> out;
    out.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        if (failures[i])
            std::rethrow_exception(failures[i]);
        out.push_back(std::move(*slots[i]));
    }
    return out;
}

std::vector<std::size_t> spot_check_indices(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i)
        idx[i] = i;
    auto rng = Rng::derive(seed, 0x5b07c4ec);
    rng.shuffle(idx);
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(kSpotCheckFraction * static_cast<double>(n))), 1, n);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}
}  // namespace

Metrics metrics_from_confusion(const Confusion& c)
{
    Metrics m;
    m.confusion = c;
    m.n = c.tp + c.fp + c.tn + c.fn;
    if (m.n == 0)
        throw Error{ErrorCode::EmptySet, "cannot compute metrics on an empty set"};
    m.accuracy = ratio(c.tp + c.tn, m.n);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    const double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
    return m;
}

Metrics evaluate(const ModelParams& params, std::span<const GraphSample> samples)
{
    if (samples.empty())
        throw Error{ErrorCode::EmptySet, "evaluate needs at least one sample"};
    Confusion c;
    for (const auto& s : samples)
    {
        const bool predicted = forward(params, s) >= 0.5;
        const bool actual = s.label == Label::Phishing;
        if (predicted && actual)
            ++c.tp;
        else if (predicted)
            ++c.fp;
        else if (actual)
            ++c.fn;
        else
            ++c.tn;
    }
    return metrics_from_confusion(c);
}

nlohmann::json to_json(const Metrics& m)
{
    return json{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall},
        {"f1", m.f1}, {"n", m.n},
        {"confusion",
            {{"tp", m.confusion.tp}, {"fp", m.confusion.fp}, {"tn", m.confusion.tn},
                {"fn", m.confusion.fn}}}};
}

GraphSample featurize_record(const DatasetRecord& record)
{
    auto s = graph_sample(build_cfg(record.code()), record.label, record.address);
    if (record.split)
        s.split = std::string{split_name(*record.split)};
    return s;
}

FeaturizeResult featurize(const std::vector<DatasetRecord>& records, unsigned threads)
{
    std::vector<std::optional<GraphSample>> slots(records.size());
    std::vector<std::optional<RecordError>> errs(records.size());
    parallel_for(records.size(), threads, [&](std::size_t i) {
        try
        {
            slots[i] = featurize_record(records[i]);
        }
        catch (const Error& e)
        {
            errs[i] = RecordError{i, records[i].address, e.code(), e.what()};
        }
        catch (const std::exception& e)
        {
            errs[i] = RecordError{i, records[i].address, ErrorCode::InvalidArgument, e.what()};
        }
    });
    FeaturizeResult out;
    for (std::size_t i = 0; i < records.size(); ++i)
    {
        if (slots[i])
            out.samples.push_back(std::move(*slots[i]));
        else
            out.errors.push_back(std::move(*errs[i]));
    }
    return out;
}

nlohmann::json to_json(const GraphSample& s)
{
    json edges = json::array();
    for (const auto& [a, b] : s.edges)
        edges.push_back(json::array({a, b}));
    json x = json::array();
    for (const auto& row : s.features)
        x.push_back(row);
    json j{{"id", s.id}, {"label", static_cast<int>(s.label)}, {"n", s.num_nodes},
        {"edges", std::move(edges)}, {"x", std::move(x)}, {"hist", s.histogram}};
    if (s.split)
        j["split"] = *s.split;
    return j;
}

GraphSample graph_from_json(const nlohmann::json& j)
{
    auto bad = [](const std::string& what) {
        return Error{ErrorCode::MalformedLine, "graph sample: " + what};
    };
    if (!j.is_object())
        throw bad("not an object");
    for (const auto& [key, _] : j.items())
        if (key != "id" && key != "label" && key != "n" && key != "edges" && key != "x" &&
            key != "hist" && key != "split")
            throw bad("unknown field '" + key + "'");
    try
    {
        GraphSample s;
        s.id = j.at("id").get<std::string>();
        const int label = j.at("label").get<int>();
        if (label != 0 && label != 1)
            throw bad("label must be 0 or 1");
        s.label = static_cast<Label>(label);
        s.num_nodes = j.at("n").get<std::size_t>();
        for (const auto& e : j.at("edges"))
        {
            if (!e.is_array() || e.size() != 2)
                throw bad("edge must be a [from, to] pair");
            const auto a = e[0].get<std::size_t>();
            const auto b = e[1].get<std::size_t>();
            if (a >= s.num_nodes || b >= s.num_nodes)
                throw bad("edge endpoint out of range");
            s.edges.emplace_back(a, b);
        }
        const auto& x = j.at("x");
        if (!x.is_array() || x.size() != s.num_nodes)
            throw bad("x must have n rows");
        for (const auto& row : x)
        {
            if (!row.is_array() || row.size() != kNodeFeatureDim)
                throw bad("x rows must have " + std::to_string(kNodeFeatureDim) + " entries");
            s.features.push_back(row.get<FeatureRow>());
        }
        if (const auto h = j.find("hist"); h != j.end())
        {
            if (!h->is_array() || h->size() != kHistogramDim)
                throw bad("hist must have " + std::to_string(kHistogramDim) + " entries");
            s.histogram = h->get<OpcodeHistogram>();
        }
        if (const auto sp = j.find("split"); sp != j.end())
            s.split = sp->get<std::string>();
        return s;
    }
    catch (const json::exception& e)
    {
        throw bad(e.what());
    }
}

std::vector<GraphSample> parse_graphs(std::string_view text)
{
    std::vector<GraphSample> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        const auto line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        try
        {
            out.push_back(graph_from_json(json::parse(line)));
        }
        catch (const std::exception& e)
        {
            throw Error{ErrorCode::MalformedLine,
                "line " + std::to_string(line_no) + ": " + e.what()};
        }
    }
    return out;
}

std::string dump_graphs(std::span<const GraphSample> samples)
{
    std::string out;
    for (const auto& s : samples)
    {
        out += to_json(s).dump();
        out += '\n';
    }
    return out;
}

std::vector<GraphSample> load_graphs(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorCode::IoFailure, "cannot open " + path.string()};
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graphs(ss.str());
}

void save_graphs(std::span<const GraphSample> samples, const std::filesystem::path& path)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    if (!out)
        throw Error{ErrorCode::IoFailure, "cannot write " + path.string()};
    out << dump_graphs(samples);
    if (!out)
        throw Error{ErrorCode::IoFailure, "write failed for " + path.string()};
}

std::vector<NamedObfConfig> obf_configs_from_json(const nlohmann::json& j)
{
    if (!j.is_array())
        throw Error{ErrorCode::InvalidArgument, "configs must be a JSON array"};
    std::vector<NamedObfConfig> out;
    for (const auto& item : j)
    {
        try
        {
            NamedObfConfig c;
            c.name = item.at("name").get<std::string>();
            const auto& passes = item.at("passes");
            if (passes.is_string())
                c.config.passes = parse_passes(passes.get<std::string>());
            else
                for (const auto& p : passes)
                {
                    const auto one = parse_passes(p.get<std::string>());
                    c.config.passes.insert(c.config.passes.end(), one.begin(), one.end());
                }
            c.config.seed = item.value("seed", std::uint64_t{0});
            c.config.intensity = item.value("intensity", 0.5);
            out.push_back(std::move(c));
        }
        catch (const json::exception& e)
        {
            throw Error{ErrorCode::InvalidArgument, std::string{"bad config entry: "} + e.what()};
        }
    }
    return out;
}

nlohmann::json to_json(const NamedObfConfig& c)
{
    json passes = json::array();
    for (const auto p : c.config.passes)
        passes.push_back(std::string{obf_pass_name(p)});
    return json{{"name", c.name}, {"passes", std::move(passes)}, {"seed", c.config.seed},
        {"intensity", c.config.intensity}};
}

RobustnessReport robustness_report(const ModelParams& params, const ModelParams& baseline,
    const std::vector<DatasetRecord>& test_records, const std::vector<NamedObfConfig>& configs,
    unsigned threads)
{
    if (test_records.empty())
        throw Error{ErrorCode::EmptySet, "robustness report needs at least one test record"};

    std::vector<bytes> clean(test_records.size());
    std::vector<char> violates(test_records.size(), 0);
    parallel_for(test_records.size(), threads, [&](std::size_t i) {
        try
        {
            clean[i] = test_records[i].code();
            violates[i] = clean[i].empty() || build_cfg(clean[i]).num_unresolved() != 0;
        }
        catch (const Error&)
        {
            violates[i] = 1;
        }
    });
    std::string offenders;
    for (std::size_t i = 0; i < test_records.size(); ++i)
        if (violates[i])
            offenders += (offenders.empty() ? "" : ", ") + test_records[i].address;
    if (!offenders.empty())
        throw Error{ErrorCode::PreconditionViolated,
            "test records with unresolved jumps or no code: " + offenders};

    RobustnessReport report;
    report.model_kind = std::string{model_kind_name(params.kind)};
    report.baseline_kind = std::string{model_kind_name(baseline.kind)};
    const auto clean_samples = featurize_all(test_records, clean, threads);
    report.clean = evaluate(params, clean_samples);
    report.baseline_clean = evaluate(baseline, clean_samples);

    for (const auto& cfg : configs)
    {
        std::vector<bytes> obf(test_records.size());
        parallel_for(test_records.size(), threads,
            [&](std::size_t i) { obf[i] = obfuscate(clean[i], cfg.config); });

        ObfuscatedMetrics om;
        om.config = cfg;
        const auto picks = spot_check_indices(test_records.size(), cfg.config.seed);
        std::vector<EquivalenceReport> eq(picks.size());
        std::vector<std::exception_ptr> eq_fail(picks.size());
        parallel_for(picks.size(), threads, [&](std::size_t k) {
            const auto i = picks[k];
            try
            {
                eq[k] = check_equivalence(clean[i], obf[i], kSpotCheckVectors,
                    Rng::derive(cfg.config.seed, i).next());
            }
            catch (...)
            {
                eq_fail[k] = std::current_exception();
            }
        });
        for (std::size_t k = 0; k < picks.size(); ++k)
        {
            if (eq_fail[k])
                std::rethrow_exception(eq_fail[k]);
            ++om.spot_check.checked;
            if (eq[k].verdict == Verdict::Equivalent)
                ++om.spot_check.equivalent;
            else if (eq[k].verdict == Verdict::Unsupported)
                ++om.spot_check.unsupported;
            else
                throw Error{ErrorCode::EquivalenceFailure,
                    "config '" + cfg.name + "' changed the behaviour of " +
                        test_records[picks[k]].address};
        }

        const auto samples = featurize_all(test_records, obf, threads);
        om.gnn = evaluate(params, samples);
        om.baseline = evaluate(baseline, samples);
        om.gnn_accuracy_drop = report.clean.accuracy - om.gnn.accuracy;
        om.baseline_accuracy_drop = report.baseline_clean.accuracy - om.baseline.accuracy;
        report.obfuscated.push_back(std::move(om));
    }
    return report;
}

nlohmann::json to_json(const RobustnessReport& r)
{
    json obf = json::array();
    for (const auto& o : r.obfuscated)
        obf.push_back(json{{"config", to_json(o.config)}, {"gnn", to_json(o.gnn)},
            {"baseline", to_json(o.baseline)},
            {"deltas",
                {{"gnn_accuracy_drop", o.gnn_accuracy_drop},
                    {"baseline_accuracy_drop", o.baseline_accuracy_drop}}},
            {"spot_check",
                {{"checked", o.spot_check.checked}, {"equivalent", o.spot_check.equivalent},
                    {"unsupported", o.spot_check.unsupported},
                    {"vectors", kSpotCheckVectors}}}});
    return json{{"model_kind", r.model_kind}, {"baseline_kind", r.baseline_kind},
        {"clean", to_json(r.clean)}, {"baseline_clean", to_json(r.baseline_clean)},
        {"obfuscated", std::move(obf)}};
}

std::string dump_stable(const nlohmann::json& j)
{
    // nlohmann::json objects are std::map backed, so keys come out sorted.
    return j.dump(2) + "\n";
}

}  // namespace scamdetect
