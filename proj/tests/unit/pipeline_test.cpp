// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/generators.hpp"

#include "scamdetect/error.hpp"
#include "scamdetect/pipeline.hpp"

#include <gtest/gtest.h>

using namespace scamdetect;

namespace
{
void expect_identities(const Metrics& m)
{
    const auto& c = m.confusion;
    EXPECT_EQ(c.tp + c.fp + c.tn + c.fn, m.n);
    EXPECT_EQ(m.accuracy, static_cast<double>(c.tp + c.tn) / static_cast<double>(m.n));
    if (m.precision + m.recall == 0.0)
    {
        EXPECT_EQ(m.f1, 0.0);
    }
    else
        EXPECT_DOUBLE_EQ(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall));
}

std::vector<DatasetRecord> test_split(std::size_t n_each, std::uint64_t seed)
{
    const auto all = split(synth_generate(n_each, n_each, seed), {}, seed);
    std::vector<DatasetRecord> out;
    for (const auto& r : all)
        if (r.split == Split::Test)
            out.push_back(r);
    return out;
}
}  // namespace

TEST(metrics, examples)
{
    const auto m = metrics_from_confusion({3, 1, 5, 1});
    EXPECT_DOUBLE_EQ(m.accuracy, 0.8);
    EXPECT_DOUBLE_EQ(m.precision, 0.75);
    EXPECT_DOUBLE_EQ(m.recall, 0.75);
    EXPECT_DOUBLE_EQ(m.f1, 0.75);
    EXPECT_EQ(m.n, 10u);
    expect_identities(m);

    const auto perfect = metrics_from_confusion({4, 0, 6, 0});
    EXPECT_EQ(perfect.accuracy, 1.0);
    EXPECT_EQ(perfect.f1, 1.0);

    const auto benign = metrics_from_confusion({0, 0, 7, 0});
    EXPECT_EQ(benign.accuracy, 1.0);
    EXPECT_EQ(benign.precision, 0.0);
    EXPECT_EQ(benign.recall, 0.0);
    EXPECT_EQ(benign.f1, 0.0);

    EXPECT_THROW(metrics_from_confusion({}), Error);
}

TEST(evaluate, counts_and_empty_set)
{
    testgen::Engine e{1};
    std::vector<GraphSample> samples;
    for (int i = 0; i < 12; ++i)
        samples.push_back(testgen::random_sample(e, 6));
    auto p = init_params(ModelKind::Gcn, 1);
    for (auto& l : p.layers)
        if (l.name == "head.b")
            l.value(0, 0) = 50.0;
    const auto m = evaluate(p, samples);
    expect_identities(m);
    EXPECT_EQ(m.confusion.tn + m.confusion.fn, 0u);
    EXPECT_THROW(evaluate(p, std::vector<GraphSample>{}), Error);
}

TEST(featurize, per_record_errors_do_not_abort)
{
    auto records = synth_generate(3, 3, 5);
    records.insert(records.begin() + 2, DatasetRecord{"empty", "", Label::Benign, RecordSource::File, {}});
    const auto r = featurize(records, 3);
    ASSERT_EQ(r.samples.size(), 6u);
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].index, 2u);
    EXPECT_EQ(r.errors[0].id, "empty");
    EXPECT_EQ(r.errors[0].code, ErrorCode::EmptyStream);
    EXPECT_EQ(r.samples[2].id, records[3].address);

    const auto single = featurize(records, 1);
    EXPECT_EQ(dump_graphs(single.samples), dump_graphs(r.samples));
}

TEST(graph_json, round_trip_and_validation)
{
    auto records = split(synth_generate(4, 4, 2), {}, 2);
    const auto samples = featurize(records).samples;
    const auto text = dump_graphs(samples);
    const auto back = parse_graphs(text);
    ASSERT_EQ(back.size(), samples.size());
    for (std::size_t i = 0; i < back.size(); ++i)
    {
        EXPECT_EQ(back[i].features, samples[i].features);
        EXPECT_EQ(back[i].histogram, samples[i].histogram);
        EXPECT_EQ(back[i].edges, samples[i].edges);
        EXPECT_EQ(back[i].split, samples[i].split);
    }
    EXPECT_EQ(dump_graphs(back), text);

    const auto j = to_json(samples[0]);
    for (const char* key : {"id", "label", "n", "edges", "x"})
        EXPECT_TRUE(j.contains(key)) << key;

    EXPECT_THROW(parse_graphs(R"({"id":"a","label":2,"n":1,"edges":[],"x":[[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]]})"), Error);
    EXPECT_THROW(parse_graphs(R"({"id":"a","label":0,"n":1,"edges":[[0,1]],"x":[[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]]})"), Error);
    EXPECT_THROW(parse_graphs(R"({"id":"a","label":0,"n":2,"edges":[],"x":[[0]]})"), Error);
    const auto minimal =
        parse_graphs(R"({"id":"a","label":1,"n":1,"edges":[],"x":[[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]]})");
    ASSERT_EQ(minimal.size(), 1u);
    EXPECT_EQ(minimal[0].label, Label::Phishing);
}

TEST(obf_configs, parse)
{
    const auto c = obf_configs_from_json(nlohmann::json::parse(
        R"([{"name":"a","passes":["junk","reorder"],"seed":3,"intensity":0.25},{"name":"b","passes":"substitute"}])"));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].config.passes, (std::vector<ObfPass>{ObfPass::Junk, ObfPass::Reorder}));
    EXPECT_EQ(c[0].config.seed, 3u);
    EXPECT_EQ(c[0].config.intensity, 0.25);
    EXPECT_EQ(c[1].config.intensity, 0.5);
    EXPECT_THROW(obf_configs_from_json(nlohmann::json::parse(R"({"name":"a"})")), Error);
    EXPECT_THROW(obf_configs_from_json(nlohmann::json::parse(R"([{"passes":"junk"}])")), Error);
}

TEST(robustness_report, clean_only_and_identity)
{
    const auto records = test_split(20, 4);
    const auto gnn = init_params(ModelKind::Gcn, 1);
    const auto base = init_params(ModelKind::Histogram, 1);

    const auto clean = robustness_report(gnn, base, records, {});
    EXPECT_TRUE(clean.obfuscated.empty());
    EXPECT_EQ(clean.clean.n, records.size());
    expect_identities(clean.clean);
    expect_identities(clean.baseline_clean);

    const auto ident = robustness_report(gnn, base, records, {{"identity", {{}, 1, 0.5}}});
    ASSERT_EQ(ident.obfuscated.size(), 1u);
    EXPECT_EQ(ident.obfuscated[0].gnn, ident.clean);
    EXPECT_EQ(ident.obfuscated[0].baseline, ident.baseline_clean);
    EXPECT_EQ(ident.obfuscated[0].gnn_accuracy_drop, 0.0);
    EXPECT_GE(ident.obfuscated[0].spot_check.checked, 1u);
}

TEST(robustness_report, passes_and_determinism)
{
    const auto records = test_split(30, 6);
    const auto gnn = init_params(ModelKind::Sage, 2);
    const auto base = init_params(ModelKind::Histogram, 2);
    const std::vector<NamedObfConfig> configs{{"junk", {{ObfPass::Junk}, 1, 0.5}},
        {"reorder", {{ObfPass::Reorder}, 2, 0.5}}, {"substitute", {{ObfPass::Substitute}, 3, 0.5}},
        {"all", {{ObfPass::Junk, ObfPass::Reorder, ObfPass::Substitute}, 4, 0.5}}};
    const auto r = robustness_report(gnn, base, records, configs, 4);
    ASSERT_EQ(r.obfuscated.size(), 4u);
    for (const auto& o : r.obfuscated)
    {
        expect_identities(o.gnn);
        expect_identities(o.baseline);
        EXPECT_EQ(o.gnn.n, records.size());
        EXPECT_EQ(o.spot_check.checked, (records.size() + 9) / 10);
        EXPECT_EQ(o.spot_check.checked, o.spot_check.equivalent + o.spot_check.unsupported);
        EXPECT_EQ(o.gnn_accuracy_drop, r.clean.accuracy - o.gnn.accuracy);
    }
    const auto again = robustness_report(gnn, base, records, configs, 1);
    EXPECT_EQ(dump_stable(to_json(again)), dump_stable(to_json(r)));
}

TEST(robustness_report, precondition)
{
    auto records = test_split(5, 7);
    records.push_back(DatasetRecord{"0xbad", "0x60003556", Label::Benign, RecordSource::File, {}});
    records.push_back(DatasetRecord{"0xempty", "", Label::Benign, RecordSource::File, {}});
    try
    {
        robustness_report(init_params(ModelKind::Gcn, 1), init_params(ModelKind::Histogram, 1), records, {});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
        EXPECT_NE(std::string{e.what()}.find("0xbad"), std::string::npos);
        EXPECT_NE(std::string{e.what()}.find("0xempty"), std::string::npos);
    }
    EXPECT_THROW(robustness_report(init_params(ModelKind::Gcn, 1), init_params(ModelKind::Histogram, 1), {}, {}),
        Error);
}

TEST(dump_stable, sorted_keys)
{
    const auto text = dump_stable(nlohmann::json{{"b", 1}, {"a", 2}});
    EXPECT_LT(text.find("\"a\""), text.find("\"b\""));
    EXPECT_EQ(text.back(), '\n');
}
