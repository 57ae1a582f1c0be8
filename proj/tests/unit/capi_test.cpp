// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include <scamdetect/scamdetect.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <string>

namespace
{
std::string take(char* s)
{
    std::string out = s == nullptr ? "" : s;
    sd_string_free(s);
    return out;
}

std::string tmp(const char* name)
{
    return (std::filesystem::temp_directory_path() / (std::string{"scamdetect_capi_"} + name)).string();
}
}  // namespace

TEST(capi, disasm_and_cfg)
{
    char* out = nullptr;
    ASSERT_EQ(sd_disasm_hex("0x6001", &out), SD_OK);
    EXPECT_EQ(take(out), "0\tPUSH1\t01\n");
    EXPECT_STREQ(sd_last_error(), "");

    ASSERT_EQ(sd_cfg_hex("600456005b00", SD_CFG_JSON, &out), SD_OK);
    const auto j = nlohmann::json::parse(take(out));
    EXPECT_EQ(j["edges"][0]["to"], 2);
    ASSERT_EQ(sd_cfg_hex("00", SD_CFG_DOT, &out), SD_OK);
    EXPECT_NE(take(out).find("digraph"), std::string::npos);
}

TEST(capi, error_codes_and_messages)
{
    char* out = nullptr;
    EXPECT_EQ(sd_disasm_hex("600", &out), SD_ODD_LENGTH);
    EXPECT_EQ(out, nullptr);
    EXPECT_NE(std::string{sd_last_error()}.find("odd"), std::string::npos) << sd_last_error();
    EXPECT_EQ(sd_disasm_hex("zz", &out), SD_NON_HEX_CHARACTER);
    EXPECT_EQ(sd_disasm_hex(nullptr, &out), SD_INVALID_ARGUMENT);
    EXPECT_EQ(sd_cfg_hex("", SD_CFG_DOT, &out), SD_EMPTY_STREAM);
    EXPECT_EQ(sd_cfg_hex("00", static_cast<sd_cfg_format>(7), &out), SD_INVALID_ARGUMENT);
    EXPECT_EQ(sd_obfuscate_hex("60003556", "reorder", 1, 0.5, &out), SD_UNRESOLVABLE_JUMPS);
    EXPECT_STREQ(sd_status_name(SD_UNRESOLVABLE_JUMPS), "UnresolvableJumps");
    EXPECT_STREQ(sd_status_name(SD_OK), "Ok");
    EXPECT_STREQ(sd_status_name(static_cast<sd_status>(99)), "Unknown");
    sd_corpus* c = nullptr;
    EXPECT_EQ(sd_corpus_load("/nonexistent/x.jsonl", &c), SD_IO_FAILURE);
    EXPECT_EQ(c, nullptr);
}

TEST(capi, obfuscate_and_equivalence)
{
    char* obf = nullptr;
    ASSERT_EQ(sd_obfuscate_hex("600160020160005260206000f3", "junk,substitute", 3, 1.0, &obf), SD_OK);
    const auto hex = take(obf);
    char* report = nullptr;
    ASSERT_EQ(sd_check_equivalence("600160020160005260206000f3", hex.c_str(), 32, 1, &report), SD_OK);
    const auto j = nlohmann::json::parse(take(report));
    EXPECT_EQ(j["verdict"], "equivalent");
    EXPECT_EQ(j["vectors"], 32);
    EXPECT_EQ(sd_check_equivalence("01", "01", 4, 1, &report), SD_STACK_UNDERFLOW);
}

TEST(capi, full_pipeline)
{
    sd_corpus* corpus = nullptr;
    ASSERT_EQ(sd_corpus_synth(20, 20, 5, &corpus), SD_OK);
    EXPECT_EQ(sd_corpus_size(corpus), 40u);
    EXPECT_EQ(sd_corpus_has_splits(corpus), 0);
    ASSERT_EQ(sd_corpus_split(corpus, 0.8, 0.1, 0.1, 5), SD_OK);
    EXPECT_EQ(sd_corpus_has_splits(corpus), 1);

    const auto path = tmp("corpus.jsonl");
    ASSERT_EQ(sd_corpus_save(corpus, path.c_str()), SD_OK);
    sd_corpus* loaded = nullptr;
    ASSERT_EQ(sd_corpus_load(path.c_str(), &loaded), SD_OK);
    EXPECT_EQ(sd_corpus_size(loaded), 40u);

    sd_corpus* kept = nullptr;
    char* dedup_report = nullptr;
    ASSERT_EQ(sd_corpus_dedup(loaded, &kept, &dedup_report), SD_OK);
    EXPECT_EQ(sd_corpus_size(kept), 40u);
    EXPECT_FALSE(take(dedup_report).empty());

    sd_graphs* graphs = nullptr;
    char* errors = nullptr;
    ASSERT_EQ(sd_featurize(loaded, &graphs, &errors), SD_OK);
    EXPECT_EQ(nlohmann::json::parse(take(errors)).size(), 0u);
    EXPECT_EQ(sd_graphs_size(graphs), 40u);
    const auto gpath = tmp("graphs.jsonl");
    ASSERT_EQ(sd_graphs_save(graphs, gpath.c_str()), SD_OK);
    sd_graphs* gl = nullptr;
    ASSERT_EQ(sd_graphs_load(gpath.c_str(), &gl), SD_OK);
    EXPECT_EQ(sd_graphs_has_splits(gl), 1);

    sd_graphs* train = nullptr;
    ASSERT_EQ(sd_graphs_select_split(gl, "train", &train), SD_OK);
    EXPECT_EQ(sd_graphs_size(train), 32u);
    sd_graphs* bogus = nullptr;
    EXPECT_EQ(sd_graphs_select_split(gl, "dev", &bogus), SD_INVALID_ARGUMENT);

    sd_model* model = nullptr;
    ASSERT_EQ(sd_train("gcn", train, 30, 1, &model), SD_OK);
    EXPECT_EQ(sd_train("lstm", train, 30, 1, &model), SD_INVALID_ARGUMENT);
    const auto mpath = tmp("model.json");
    ASSERT_EQ(sd_model_save(model, mpath.c_str()), SD_OK);
    sd_model* reloaded = nullptr;
    ASSERT_EQ(sd_model_load(mpath.c_str(), &reloaded), SD_OK);
    double p1 = 0, p2 = 0;
    ASSERT_EQ(sd_model_predict(model, gl, 0, &p1), SD_OK);
    ASSERT_EQ(sd_model_predict(reloaded, gl, 0, &p2), SD_OK);
    EXPECT_EQ(p1, p2);
    EXPECT_EQ(sd_model_predict(model, gl, 1000, &p1), SD_INVALID_ARGUMENT);

    char* metrics = nullptr;
    ASSERT_EQ(sd_evaluate(reloaded, gl, &metrics), SD_OK);
    EXPECT_EQ(nlohmann::json::parse(take(metrics))["n"], 40);

    sd_model* base = nullptr;
    ASSERT_EQ(sd_train("histogram", train, 30, 1, &base), SD_OK);
    sd_corpus* test = nullptr;
    ASSERT_EQ(sd_corpus_select_split(loaded, "test", &test), SD_OK);
    char* rob = nullptr;
    ASSERT_EQ(sd_robustness(model, base, test, R"([{"name":"junk","passes":"junk","seed":1,"intensity":0.5}])", &rob),
        SD_OK);
    const auto r = nlohmann::json::parse(take(rob));
    EXPECT_EQ(r["obfuscated"].size(), 1u);
    EXPECT_EQ(sd_robustness(model, base, test, "not json", &rob), SD_INVALID_ARGUMENT);

    sd_corpus_free(corpus);
    sd_corpus_free(loaded);
    sd_corpus_free(kept);
    sd_corpus_free(test);
    sd_graphs_free(graphs);
    sd_graphs_free(gl);
    sd_graphs_free(train);
    sd_model_free(model);
    sd_model_free(reloaded);
    sd_model_free(base);
    sd_corpus_free(nullptr);
    for (const auto& p : {path, gpath, mpath})
        std::filesystem::remove(p);
}
