// scamdetect: static detection of malicious smart contracts
// Copyright 2026 The scamdetect Authors.
// SPDX-License-Identifier: Apache-2.0

#include <scamdetect/scamdetect.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace
{
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Thrown to unwind out of a subcommand with a specific exit code.
struct Exit
{
    int code;
};

struct CString
{
    char* p = nullptr;
    ~CString() { sd_string_free(p); }
    [[nodiscard]] std::string str() const { return p == nullptr ? std::string{} : p; }
};

template <typename T, void (*Free)(T*)>
struct Handle
{
    T* p = nullptr;
    ~Handle() { Free(p); }
};

using Corpus = Handle<sd_corpus, sd_corpus_free>;
using Graphs = Handle<sd_graphs, sd_graphs_free>;
using Model = Handle<sd_model, sd_model_free>;

void check(sd_status s)
{
    if (s == SD_OK)
        return;
    std::cerr << "error: " << sd_status_name(s) << ": " << sd_last_error() << "\n";
    throw Exit{s == SD_INVALID_ARGUMENT ? kExitUsage : kExitData};
}

std::string read_file(const std::string& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
    {
        std::cerr << "error: cannot open " << path << "\n";
        throw Exit{kExitData};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    out << text;
    if (!out)
    {
        std::cerr << "error: cannot write " << path << "\n";
        throw Exit{kExitData};
    }
}

void report_record_errors(const std::string& errors_json, const char* what)
{
    if (errors_json.empty() || errors_json.rfind("[]", 0) == 0)
        return;
    std::cerr << "warning: some records failed during " << what << ":\n" << errors_json;
}

/// Selects `split` when the set carries split assignments, else keeps everything.
void narrow_graphs(Graphs& g, const char* split)
{
    if (!sd_graphs_has_splits(g.p))
        return;
    Graphs sel;
    check(sd_graphs_select_split(g.p, split, &sel.p));
    std::swap(g.p, sel.p);
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Static detection of malicious smart contracts from EVM bytecode"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string in_path, out_path, format = "dot";
    auto* disasm = app.add_subcommand("disasm", "Disassemble hex bytecode");
    disasm->add_option("hexfile", in_path, "File with hex bytecode")->required();

    auto* cfg = app.add_subcommand("cfg", "Recover the control-flow graph");
    cfg->add_option("hexfile", in_path, "File with hex bytecode")->required();
    cfg->add_option("--format", format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));

    auto* featurize = app.add_subcommand("featurize", "Turn a corpus into graph samples");
    featurize->add_option("corpus", in_path, "Corpus JSONL")->required();
    featurize->add_option("-o,--output", out_path, "Graph JSONL output")->required();

    std::string dedup_out, report_path;
    auto* dedup = app.add_subcommand("dedup", "Drop minimal proxies and duplicate code");
    dedup->add_option("input", in_path, "Corpus JSONL")->required();
    dedup->add_option("output", dedup_out, "Deduplicated corpus JSONL")->required();
    dedup->add_option("--report", report_path, "Write the drop report here");

    std::size_t n_benign = 0, n_phishing = 0;
    std::uint64_t seed = 0;
    bool do_split = false;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labelled corpus");
    synth->add_option("--benign", n_benign)->required();
    synth->add_option("--phishing", n_phishing)->required();
    synth->add_option("--seed", seed);
    synth->add_flag("--split", do_split, "Assign 80/10/10 train/val/test splits");
    synth->add_option("-o,--output,output", out_path, "Corpus JSONL output")->required();

    double ratio_train = 0.8, ratio_val = 0.1, ratio_test = 0.1;
    auto* split = app.add_subcommand("split", "Assign stratified train/val/test splits");
    split->add_option("input", in_path)->required();
    split->add_option("output", dedup_out)->required();
    split->add_option("--seed", seed);
    split->add_option("--train", ratio_train);
    split->add_option("--val", ratio_val);
    split->add_option("--test", ratio_test);

    std::string addresses, endpoint, api_key, label = "benign";
    double rate = 5.0;
    auto* fetch = app.add_subcommand("fetch", "Download deployed bytecode");
    fetch->add_option("--addresses", addresses, "File with one address per line")->required();
    fetch->add_option("--endpoint", endpoint, "Etherscan-compatible API URL")->required();
    fetch->add_option("--api-key", api_key, "Defaults to $SCAMDETECT_API_KEY");
    fetch->add_option("--label", label, "Label for fetched records")
        ->check(CLI::IsMember({"benign", "phishing"}));
    fetch->add_option("--rate", rate, "Requests per second");
    fetch->add_option("-o,--output", out_path, "Corpus JSONL output (default stdout)");

    std::string passes;
    double intensity = 0.5;
    auto* obf = app.add_subcommand("obfuscate", "Apply semantics-preserving rewrites");
    obf->add_option("--passes", passes, "Comma-separated: junk,reorder,substitute")->required();
    obf->add_option("--seed", seed);
    obf->add_option("--intensity", intensity);
    obf->add_option("input", in_path, "Hex input")->required();
    obf->add_option("output", out_path, "Hex output")->required();

    std::string kind, corpus_path;
    std::size_t epochs = 200;
    auto* trn = app.add_subcommand("train", "Train a detector on graph samples");
    trn->add_option("--kind", kind)
        ->required()
        ->check(CLI::IsMember({"gcn", "sage", "gin", "gat", "tag", "histogram"}));
    trn->add_option("--corpus", corpus_path, "Graph JSONL")->required();
    trn->add_option("--epochs", epochs);
    trn->add_option("--seed", seed);
    trn->add_option("-o,--output", out_path, "Model JSON output")->required();

    std::string model_path, baseline_path, configs_path;
    auto* evl = app.add_subcommand("eval", "Evaluate a detector");
    evl->add_option("--model", model_path)->required();
    evl->add_option("--corpus", corpus_path, "Graph JSONL")->required();
    evl->add_option("-o,--output", out_path, "Metrics JSON output (default stdout)");

    auto* rob = app.add_subcommand("robustness", "Measure accuracy under obfuscation");
    rob->add_option("--model", model_path)->required();
    rob->add_option("--baseline", baseline_path)->required();
    rob->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    rob->add_option("--configs", configs_path, "Obfuscation configs JSON")->required();
    rob->add_option("-o,--output", out_path, "Report JSON output (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (*disasm || *cfg)
        {
            const auto hex = read_file(in_path);
            CString text;
            if (*disasm)
                check(sd_disasm_hex(hex.c_str(), &text.p));
            else
                check(sd_cfg_hex(hex.c_str(), format == "dot" ? SD_CFG_DOT : SD_CFG_JSON, &text.p));
            std::cout << text.str();
        }
        else if (*featurize)
        {
            Corpus c;
            check(sd_corpus_load(in_path.c_str(), &c.p));
            Graphs g;
            CString errors;
            check(sd_featurize(c.p, &g.p, &errors.p));
            check(sd_graphs_save(g.p, out_path.c_str()));
            report_record_errors(errors.str(), "featurization");
        }
        else if (*dedup)
        {
            Corpus c, kept;
            check(sd_corpus_load(in_path.c_str(), &c.p));
            CString report;
            check(sd_corpus_dedup(c.p, &kept.p, &report.p));
            check(sd_corpus_save(kept.p, dedup_out.c_str()));
            write_output(report_path, report.str());
        }
        else if (*synth)
        {
            Corpus c;
            check(sd_corpus_synth(n_benign, n_phishing, seed, &c.p));
            if (do_split)
                check(sd_corpus_split(c.p, 0.8, 0.1, 0.1, seed));
            check(sd_corpus_save(c.p, out_path.c_str()));
        }
        else if (*split)
        {
            Corpus c;
            check(sd_corpus_load(in_path.c_str(), &c.p));
            check(sd_corpus_split(c.p, ratio_train, ratio_val, ratio_test, seed));
            check(sd_corpus_save(c.p, dedup_out.c_str()));
        }
        else if (*fetch)
        {
            if (api_key.empty())
                if (const char* env = std::getenv("SCAMDETECT_API_KEY"))
                    api_key = env;
            const auto list = read_file(addresses);
            Corpus c;
            CString errors;
            check(sd_fetch_corpus(list.c_str(), endpoint.c_str(), api_key.c_str(),
                label.c_str(), rate, &c.p, &errors.p));
            if (out_path.empty() || out_path == "-")
            {
                // Corpus save goes through a file; stdout gets it via /dev/stdout.
                check(sd_corpus_save(c.p, "/dev/stdout"));
            }
            else
                check(sd_corpus_save(c.p, out_path.c_str()));
            report_record_errors(errors.str(), "fetch");
        }
        else if (*obf)
        {
            const auto hex = read_file(in_path);
            CString result;
            check(sd_obfuscate_hex(hex.c_str(), passes.c_str(), seed, intensity, &result.p));
            write_output(out_path, result.str() + "\n");
        }
        else if (*trn)
        {
            Graphs g;
            check(sd_graphs_load(corpus_path.c_str(), &g.p));
            narrow_graphs(g, "train");
            Model m;
            check(sd_train(kind.c_str(), g.p, epochs, seed, &m.p));
            check(sd_model_save(m.p, out_path.c_str()));
        }
        else if (*evl)
        {
            Model m;
            check(sd_model_load(model_path.c_str(), &m.p));
            Graphs g;
            check(sd_graphs_load(corpus_path.c_str(), &g.p));
            narrow_graphs(g, "test");
            CString metrics;
            check(sd_evaluate(m.p, g.p, &metrics.p));
            write_output(out_path, metrics.str());
        }
        else if (*rob)
        {
            Model m, b;
            check(sd_model_load(model_path.c_str(), &m.p));
            check(sd_model_load(baseline_path.c_str(), &b.p));
            Corpus c;
            check(sd_corpus_load(corpus_path.c_str(), &c.p));
            if (sd_corpus_has_splits(c.p))
            {
                Corpus sel;
                check(sd_corpus_select_split(c.p, "test", &sel.p));
                std::swap(c.p, sel.p);
            }
            const auto configs = read_file(configs_path);
            CString report;
            check(sd_robustness(m.p, b.p, c.p, configs.c_str(), &report.p));
            write_output(out_path, report.str());
        }
    }
    catch (const Exit& e)
    {
        return e.code;
    }
    return kExitOk;
}
