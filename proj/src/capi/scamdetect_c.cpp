// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include <scamdetect/scamdetect.h>

#include "scamdetect/cfg.hpp"
#include "scamdetect/data.hpp"
#include "scamdetect/disasm.hpp"
#include "scamdetect/fetch.hpp"
#include "scamdetect/interp.hpp"
#include "scamdetect/model.hpp"
#include "scamdetect/obfuscate.hpp"
#include "scamdetect/pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

using namespace scamdetect;

struct sd_corpus
{
    std::vector<DatasetRecord> records;
};

struct sd_graphs
{
    std::vector<GraphSample> samples;
};

struct sd_model
{
    ModelParams params;
};

namespace
{
thread_local std::string g_last_error;

sd_status fail(sd_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

/// Runs fn and converts any exception into a status plus sd_last_error.
template <typename Fn>
sd_status guarded(Fn&& fn) noexcept
{
    try
    {
        g_last_error.clear();
        fn();
        return SD_OK;
    }
    catch (const Error& e)
    {
        return fail(static_cast<sd_status>(e.code()), e.what());
    }
    catch (const nlohmann::json::exception& e)
    {
        return fail(SD_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc&)
    {
        return fail(SD_INTERNAL_ERROR, "out of memory");
    }
    catch (const std::exception& e)
    {
        return fail(SD_INTERNAL_ERROR, e.what());
    }
    catch (...)
    {
        return fail(SD_INTERNAL_ERROR, "unknown error");
    }
}

char* dup_string(const std::string& s)
{
    auto* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p == nullptr)
        throw std::bad_alloc{};
    std::memcpy(p, s.data(), s.size() + 1);
    return p;
}

void require(const void* p, const char* what)
{
    if (p == nullptr)
        throw Error{ErrorCode::InvalidArgument, std::string{what} + " must not be NULL"};
}

std::string read_text(const char* path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error{ErrorCode::IoFailure, std::string{"cannot open "} + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Split parse_split(const char* name)
{
    require(name, "split");
    const std::string_view s{name};
    for (const auto v : {Split::Train, Split::Val, Split::Test})
        if (split_name(v) == s)
            return v;
    throw Error{ErrorCode::InvalidArgument, "unknown split '" + std::string{s} + "'"};
}

Label parse_label(const char* name)
{
    require(name, "label");
    const std::string_view s{name};
    if (s == label_name(Label::Benign))
        return Label::Benign;
    if (s == label_name(Label::Phishing))
        return Label::Phishing;
    throw Error{ErrorCode::InvalidArgument, "unknown label '" + std::string{s} + "'"};
}

nlohmann::json errors_to_json(const std::vector<RecordError>& errors)
{
    auto arr = nlohmann::json::array();
    for (const auto& e : errors)
        arr.push_back({{"index", e.index}, {"id", e.id},
            {"code", std::string{error_code_name(e.code)}}, {"message", e.message}});
    return arr;
}
}  // namespace

extern "C" {

const char* sd_last_error(void)
{
    return g_last_error.c_str();
}

const char* sd_status_name(sd_status status)
{
    switch (status)
    {
    case SD_OK:
        return "Ok";
    case SD_INTERNAL_ERROR:
        return "InternalError";
    default:
        break;
    }
    const auto code = static_cast<int>(status);
    if (code < 1 || code > static_cast<int>(ErrorCode::EquivalenceFailure))
        return "Unknown";
    return error_code_name(static_cast<ErrorCode>(code)).data();
}

void sd_string_free(char* s)
{
    std::free(s);
}

sd_status sd_disasm_hex(const char* hex, char** out_listing)
{
    return guarded([&] {
        require(hex, "hex");
        require(out_listing, "out_listing");
        *out_listing = dup_string(format_listing(disassemble(parse_hex(hex).code)));
    });
}

sd_status sd_cfg_hex(const char* hex, sd_cfg_format format, char** out_text)
{
    return guarded([&] {
        require(hex, "hex");
        require(out_text, "out_text");
        if (format != SD_CFG_DOT && format != SD_CFG_JSON)
            throw Error{ErrorCode::InvalidArgument, "unknown cfg format"};
        const auto cfg = build_cfg(parse_hex(hex).code);
        *out_text = dup_string(
            export_cfg(cfg, format == SD_CFG_DOT ? CfgFormat::Dot : CfgFormat::Json));
    });
}

sd_status sd_obfuscate_hex(
    const char* hex, const char* passes, uint64_t seed, double intensity, char** out_hex)
{
    return guarded([&] {
        require(hex, "hex");
        require(passes, "passes");
        require(out_hex, "out_hex");
        const ObfConfig config{parse_passes(passes), seed, intensity};
        *out_hex = dup_string(to_hex(obfuscate(parse_hex(hex).code, config), true));
    });
}

sd_status sd_check_equivalence(
    const char* hex_a, const char* hex_b, size_t vectors, uint64_t seed, char** out_json)
{
    return guarded([&] {
        require(hex_a, "hex_a");
        require(hex_b, "hex_b");
        require(out_json, "out_json");
        const auto r =
            check_equivalence(parse_hex(hex_a).code, parse_hex(hex_b).code, vectors, seed);
        nlohmann::json j{{"verdict", std::string{verdict_name(r.verdict)}},
            {"vectors", r.vectors}, {"unsupported_op", nullptr}};
        if (r.unsupported_op)
            j["unsupported_op"] = *r.unsupported_op;
        *out_json = dup_string(dump_stable(j));
    });
}

sd_status sd_corpus_load(const char* path, sd_corpus** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sd_corpus{load_jsonl(path)};
    });
}

sd_status sd_corpus_save(const sd_corpus* corpus, const char* path)
{
    return guarded([&] {
        require(corpus, "corpus");
        require(path, "path");
        save_jsonl(corpus->records, path);
    });
}

sd_status sd_corpus_synth(size_t n_benign, size_t n_phishing, uint64_t seed, sd_corpus** out)
{
    return guarded([&] {
        require(out, "out");
        *out = new sd_corpus{synth_generate(n_benign, n_phishing, seed)};
    });
}

sd_status sd_corpus_dedup(const sd_corpus* corpus, sd_corpus** out, char** out_report_json)
{
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        auto r = dedup(corpus->records);
        std::string report;
        if (out_report_json != nullptr)
            report = dump_stable(to_json(r));
        *out = new sd_corpus{std::move(r.kept)};
        if (out_report_json != nullptr)
            *out_report_json = dup_string(report);
    });
}

sd_status sd_corpus_split(sd_corpus* corpus, double train, double val, double test, uint64_t seed)
{
    return guarded([&] {
        require(corpus, "corpus");
        corpus->records = split(corpus->records, SplitRatios{train, val, test}, seed);
    });
}

sd_status sd_corpus_select_split(const sd_corpus* corpus, const char* split, sd_corpus** out)
{
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        const auto want = parse_split(split);
        auto sel = std::make_unique<sd_corpus>();
        for (const auto& r : corpus->records)
            if (r.split == want)
                sel->records.push_back(r);
        *out = sel.release();
    });
}

int sd_corpus_has_splits(const sd_corpus* corpus)
{
    if (corpus == nullptr)
        return 0;
    for (const auto& r : corpus->records)
        if (r.split)
            return 1;
    return 0;
}

size_t sd_corpus_size(const sd_corpus* corpus)
{
    return corpus == nullptr ? 0 : corpus->records.size();
}

void sd_corpus_free(sd_corpus* corpus)
{
    delete corpus;
}

sd_status sd_fetch_code(const char* address, const char* endpoint, const char* api_key,
    char** out_hex)
{
    return guarded([&] {
        require(address, "address");
        require(endpoint, "endpoint");
        require(out_hex, "out_hex");
        FetchConfig config;
        config.endpoint = endpoint;
        config.api_key = api_key == nullptr ? "" : api_key;
        *out_hex = dup_string(to_hex(fetch_code(address, config).code, true));
    });
}

sd_status sd_fetch_corpus(const char* addresses, const char* endpoint, const char* api_key,
    const char* label, double rate_limit, sd_corpus** out, char** out_errors_json)
{
    return guarded([&] {
        require(addresses, "addresses");
        require(endpoint, "endpoint");
        require(out, "out");
        const Label lbl = parse_label(label);
        FetchConfig config;
        config.endpoint = endpoint;
        config.api_key = api_key == nullptr ? "" : api_key;
        config.rate_limit = rate_limit;

        std::vector<std::string> list;
        std::istringstream in{addresses};
        for (std::string line; std::getline(in, line);)
        {
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#')
                continue;
            const auto e = line.find_last_not_of(" \t\r");
            list.push_back(line.substr(b, e - b + 1));
        }

        // The limiter, not the worker count, bounds the request rate.
        RateLimiter limiter;
        std::vector<std::optional<DatasetRecord>> got(list.size());
        std::vector<std::optional<RecordError>> errs(list.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < list.size(); i = next++)
            {
                try
                {
                    const auto code = fetch_code(list[i], config, limiter);
                    got[i] = DatasetRecord{
                        list[i], to_hex(code.code, true), lbl, RecordSource::Etherscan, {}};
                }
                catch (const Error& e)
                {
                    errs[i] = RecordError{i, list[i], e.code(), e.what()};
                }
            }
        };
        std::vector<std::thread> pool;
        const auto n_threads = std::min<std::size_t>(4, list.size());
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();

        auto corpus = std::make_unique<sd_corpus>();
        std::vector<RecordError> failures;
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            if (got[i])
                corpus->records.push_back(std::move(*got[i]));
            else
                failures.push_back(std::move(*errs[i]));
        }
        if (out_errors_json != nullptr)
            *out_errors_json = dup_string(dump_stable(errors_to_json(failures)));
        *out = corpus.release();
    });
}

sd_status sd_featurize(const sd_corpus* corpus, sd_graphs** out, char** out_errors_json)
{
    return guarded([&] {
        require(corpus, "corpus");
        require(out, "out");
        auto r = featurize(corpus->records);
        std::string errors;
        if (out_errors_json != nullptr)
            errors = dump_stable(errors_to_json(r.errors));
        *out = new sd_graphs{std::move(r.samples)};
        if (out_errors_json != nullptr)
            *out_errors_json = dup_string(errors);
    });
}

sd_status sd_graphs_load(const char* path, sd_graphs** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sd_graphs{load_graphs(path)};
    });
}

sd_status sd_graphs_save(const sd_graphs* graphs, const char* path)
{
    return guarded([&] {
        require(graphs, "graphs");
        require(path, "path");
        save_graphs(graphs->samples, path);
    });
}

sd_status sd_graphs_select_split(const sd_graphs* graphs, const char* split, sd_graphs** out)
{
    return guarded([&] {
        require(graphs, "graphs");
        require(out, "out");
        const std::string want{split_name(parse_split(split))};
        auto sel = std::make_unique<sd_graphs>();
        for (const auto& s : graphs->samples)
            if (s.split == want)
                sel->samples.push_back(s);
        *out = sel.release();
    });
}

int sd_graphs_has_splits(const sd_graphs* graphs)
{
    if (graphs == nullptr)
        return 0;
    for (const auto& s : graphs->samples)
        if (s.split)
            return 1;
    return 0;
}

size_t sd_graphs_size(const sd_graphs* graphs)
{
    return graphs == nullptr ? 0 : graphs->samples.size();
}

void sd_graphs_free(sd_graphs* graphs)
{
    delete graphs;
}

sd_status sd_train(
    const char* kind, const sd_graphs* graphs, size_t epochs, uint64_t seed, sd_model** out)
{
    return guarded([&] {
        require(kind, "kind");
        require(graphs, "graphs");
        require(out, "out");
        TrainConfig config;
        config.epochs = epochs;
        config.seed = seed;
        auto report = train(parse_model_kind(kind), graphs->samples, config);
        *out = new sd_model{std::move(report.model)};
    });
}

sd_status sd_model_load(const char* path, sd_model** out)
{
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        const auto text = read_text(path);
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::exception& e)
        {
            throw Error{ErrorCode::InvalidArgument,
                std::string{path} + " is not valid JSON: " + e.what()};
        }
        *out = new sd_model{model_from_json(j)};
    });
}

sd_status sd_model_save(const sd_model* model, const char* path)
{
    return guarded([&] {
        require(model, "model");
        require(path, "path");
        std::ofstream f{path, std::ios::binary | std::ios::trunc};
        if (!f)
            throw Error{ErrorCode::IoFailure, std::string{"cannot write "} + path};
        f << dump_stable(to_json(model->params));
        if (!f)
            throw Error{ErrorCode::IoFailure, std::string{"write failed for "} + path};
    });
}

sd_status sd_model_predict(
    const sd_model* model, const sd_graphs* graphs, size_t index, double* out_probability)
{
    return guarded([&] {
        require(model, "model");
        require(graphs, "graphs");
        require(out_probability, "out_probability");
        if (index >= graphs->samples.size())
            throw Error{ErrorCode::InvalidArgument, "sample index out of range"};
        *out_probability = forward(model->params, graphs->samples[index]);
    });
}

void sd_model_free(sd_model* model)
{
    delete model;
}

sd_status sd_evaluate(const sd_model* model, const sd_graphs* graphs, char** out_json)
{
    return guarded([&] {
        require(model, "model");
        require(graphs, "graphs");
        require(out_json, "out_json");
        *out_json = dup_string(dump_stable(to_json(evaluate(model->params, graphs->samples))));
    });
}

sd_status sd_robustness(const sd_model* model, const sd_model* baseline,
    const sd_corpus* test_records, const char* configs_json, char** out_json)
{
    return guarded([&] {
        require(model, "model");
        require(baseline, "baseline");
        require(test_records, "test_records");
        require(configs_json, "configs_json");
        require(out_json, "out_json");
        const auto configs = obf_configs_from_json(nlohmann::json::parse(configs_json));
        const auto report =
            robustness_report(model->params, baseline->params, test_records->records, configs);
        *out_json = dup_string(dump_stable(to_json(report)));
    });
}

}  // extern "C"
