#include "sdoc/cli.hpp"
#include "sdoc/anchor.hpp"
#include "sdoc/bench.hpp"
#include "sdoc/error.hpp"
#include "sdoc/json_codec.hpp"
#include "sdoc/registrar.hpp"
#include "sdoc/signing.hpp"
#include "sdoc/xml_codec.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace sdoc {

namespace {

std::string read_input(const std::string& name, std::istream& in)
{
    if (name == "-")
        return std::string(std::istreambuf_iterator<char>(in), {});
    std::ifstream f(name, std::ios::binary);
    if (!f)
        throw Error(Errc::invalid_argument, "cannot read '" + name + "'");
    return std::string(std::istreambuf_iterator<char>(f), {});
}

void write_output(const std::string& name, const std::string& data, std::ostream& out)
{
    if (name.empty() || name == "-") {
        out << data;
        return;
    }
    std::ofstream f(name, std::ios::binary | std::ios::trunc);
    if (!f || !(f << data))
        throw Error(Errc::invalid_argument, "cannot write '" + name + "'");
}

std::string contract_or_env(const std::string& flag)
{
    if (!flag.empty())
        return flag;
    const char* env = std::getenv("ANCHOR_CONTRACT");
    return env ? env : "";
}

std::vector<std::size_t> default_grid() { return {1, 2, 3, 4, 8, 16, 32, 64}; }

} // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Selectively disclosable signed documents: issue, redact, register and verify."};
    app.name("sdoc");
    app.require_subcommand(1);

    // keygen
    std::string key_stem;
    auto* keygen_cmd = app.add_subcommand("keygen", "Create an ECDSA P-256 key pair (<stem>.key, <stem>.pub)");
    keygen_cmd->add_option("stem", key_stem, "Output path without extension")->required();

    // issue
    std::string issue_input = "-", issue_key, issue_output;
    std::vector<std::string> nested_specs;
    auto* issue_cmd = app.add_subcommand("issue", "Salt and sign plain content JSON");
    issue_cmd->add_option("input", issue_input, "Plain JSON document, '-' for stdin");
    issue_cmd->add_option("-k,--key", issue_key, "Issuer private key file")->required();
    issue_cmd->add_option("--sign-nested", nested_specs, "PATH=KEYFILE: also sign the nested object at PATH");
    issue_cmd->add_option("-o,--output", issue_output, "Output file (default stdout)");
    bool issue_xml = false;
    issue_cmd->add_flag("--xml", issue_xml, "Emit the XML form instead of JSON");

    // redact
    std::string redact_input = "-", redact_output;
    std::vector<std::string> hide_paths;
    auto* redact_cmd = app.add_subcommand("redact", "Replace members by their digests");
    redact_cmd->add_option("input", redact_input, "Signed document, '-' for stdin");
    redact_cmd->add_option("--hide", hide_paths, "Dotted member path to hide (repeatable)")->required();
    redact_cmd->add_option("-o,--output", redact_output, "Output file (default stdout)");

    // register
    std::vector<std::string> register_inputs;
    std::string register_anchor, register_contract, register_network, register_outdir;
    auto* register_cmd = app.add_subcommand("register", "Anchor a batch and embed a proof in every document");
    register_cmd->add_option("documents", register_inputs, "Signed documents, rewritten in place")->required();
    register_cmd->add_option("--anchor", register_anchor, "Journal path or JSON-RPC URL")->required();
    register_cmd->add_option("--contract", register_contract, "Anchor contract address (or ANCHOR_CONTRACT)");
    register_cmd->add_option("--network", register_network, "Network name recorded in proofs");
    register_cmd->add_option("--out-dir", register_outdir, "Write results here instead of in place");

    // verify
    std::string verify_input = "-", verify_anchor, verify_contract, verify_network, verify_format = "both";
    auto* verify_cmd = app.add_subcommand("verify", "Check signatures and the proof of existence");
    verify_cmd->add_option("input", verify_input, "Document, '-' for stdin");
    verify_cmd->add_option("--anchor", verify_anchor, "Journal path or JSON-RPC URL")->required();
    verify_cmd->add_option("--contract", verify_contract, "Anchor contract address (or ANCHOR_CONTRACT)");
    verify_cmd->add_option("--network", verify_network, "Network name expected in proofs");
    verify_cmd->add_option("--format", verify_format, "json, text or both")
        ->check(CLI::IsMember({"json", "text", "both"}));

    // bench
    std::vector<std::size_t> bench_n, bench_d;
    bool bench_csv = false;
    auto* bench_cmd = app.add_subcommand("bench", "Count digest operations for both schemes");
    bench_cmd->add_option("-n", bench_n, "Item counts (default 1 2 3 4 8 16 32 64)");
    bench_cmd->add_option("-d", bench_d, "Disclosed counts; values above n are skipped (default 1 and n)");
    bench_cmd->add_flag("--csv", bench_csv, "CSV instead of a text table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*keygen_cmd) {
            const KeyPair key = keygen();
            write_key_files(key, key_stem);
            err << "wrote " << key_stem << ".key and " << key_stem << ".pub\n";
            return exit_ok;
        }

        if (*issue_cmd) {
            std::map<std::string, KeyPair> nested;
            for (const auto& spec : nested_specs) {
                const auto eq = spec.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
                    throw Error(Errc::invalid_argument, "--sign-nested expects PATH=KEYFILE, got '" + spec + "'");
                nested.emplace(spec.substr(0, eq), read_private_key(spec.substr(eq + 1)));
            }
            std::string doc = issue_document(read_input(issue_input, in), read_private_key(issue_key), nested);
            if (issue_xml)
                doc = to_xml(json_to_tree(doc).root, true);
            write_output(issue_output, doc, out);
            return exit_ok;
        }

        if (*redact_cmd) {
            write_output(redact_output, redact(read_input(redact_input, in), hide_paths), out);
            return exit_ok;
        }

        if (*register_cmd) {
            std::vector<std::string> docs;
            docs.reserve(register_inputs.size());
            for (const auto& name : register_inputs)
                docs.push_back(read_input(name, in));
            auto anchor = open_anchor(register_anchor, contract_or_env(register_contract), register_network);
            const auto proven = register_batch(docs, *anchor);
            for (std::size_t i = 0; i < proven.size(); ++i) {
                std::filesystem::path target = register_inputs[i];
                if (!register_outdir.empty())
                    target = std::filesystem::path(register_outdir) / target.filename();
                if (register_inputs[i] == "-")
                    write_output("-", proven[i], out);
                else
                    write_output(target.string(), proven[i], out);
            }
            err << "registered " << proven.size() << " document(s) with " << anchor->describe().contract << " at "
                << register_anchor << '\n';
            return exit_ok;
        }

        if (*verify_cmd) {
            const std::string doc = read_input(verify_input, in);
            auto anchor = open_anchor(verify_anchor, contract_or_env(verify_contract), verify_network);
            const VerificationReport report = verify_document(doc, *anchor);
            if (verify_format != "text")
                out << report.to_json();
            if (verify_format != "json")
                (verify_format == "both" ? err : out) << report.to_text();
            return report.accepted ? exit_ok : exit_rejected;
        }

        if (*bench_cmd) {
            if (bench_n.empty())
                bench_n = default_grid();
            std::vector<CostComparison> rows;
            for (std::size_t n : bench_n) {
                std::vector<std::size_t> ds = bench_d;
                if (ds.empty()) {
                    ds = {1};
                    if (n > 1)
                        ds.push_back(n);
                }
                for (std::size_t d : ds)
                    if (d >= 1 && d <= n && n >= 1)
                        rows.push_back(weighted_costs(n, d));
            }
            out << (bench_csv ? format_csv(rows) : format_table(rows));
            return exit_ok;
        }
    } catch (const Error& e) {
        err << "sdoc: " << errc_name(e.code()) << ": " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "sdoc: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}

} // namespace sdoc
