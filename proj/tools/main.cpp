#include <iostream>

#include <CLI11.hpp>

#include "convmce/cli.hpp"
#include "convmce/errors.hpp"

namespace cli = convmce::cli;

namespace {

void add_param_flags(CLI::App* app, cli::ParamOptions& p, std::string& density) {
    app->add_option("--q", p.field.q, "Field order (default polynomial)");
    app->add_option("--p", p.field.p, "Field characteristic");
    app->add_option("--m", p.field.m, "Extension degree");
    app->add_option("--reduction", p.field.reduction, "Reduction polynomial coefficients, constant term first")
        ->delimiter(',');
    app->add_option("-n,--n", p.n, "Block length")->capture_default_str();
    app->add_option("-k,--k", p.k, "Block dimension")->capture_default_str();
    app->add_option("--mu", p.mu, "Radius of the transformation T")->capture_default_str();
    app->add_option("--nu", p.nu, "Top degree of S(D)")->capture_default_str();
    app->add_option("--density", density, "Fill rate of Pi above the diagonal (a/b or decimal)")->capture_default_str();
    app->add_flag_function(
        "--identity-code", [&p](std::int64_t) { p.family = convmce::CodeFamily::IdentityTest; },
        "Use the trivial [I|0] inner code (testing only)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Convolutional McEliece: key generation, streaming encryption and attack analysis"};
    app.require_subcommand(1);

    cli::KeygenOptions kg;
    std::string kg_density = "1/2";
    auto* keygen = app.add_subcommand("keygen", "Generate <prefix>.pk and <prefix>.sk");
    add_param_flags(keygen, kg.params, kg_density);
    keygen->add_option("--seed", kg.seed, "RNG seed (falls back to CMCE_SEED)");
    keygen->add_option("-o,--out", kg.out_prefix, "Output prefix")->capture_default_str();
    keygen->add_flag("--force", kg.force, "Overwrite existing files");

    cli::EncryptOptions enc;
    std::string enc_load = "1";
    auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file");
    encrypt->add_option("--pk", enc.public_key, "Public key file")->required();
    encrypt->add_option("-i,--in", enc.input, "Plaintext file")->required();
    encrypt->add_option("-o,--out", enc.output, "Ciphertext file")->required();
    encrypt->add_option("--error-seed", enc.error_seed, "Seed for the error pattern (falls back to CMCE_SEED)");
    encrypt->add_option("--error-load", enc_load, "Error load in [0, 1] (a/b or decimal)")->capture_default_str();
    encrypt->add_flag("--force", enc.force, "Overwrite the output");

    cli::DecryptOptions dec;
    auto* decrypt = app.add_subcommand("decrypt", "Decrypt a ciphertext file");
    decrypt->add_option("--sk", dec.secret_key, "Secret key file")->required();
    decrypt->add_option("-i,--in", dec.input, "Ciphertext file")->required();
    decrypt->add_option("-o,--out", dec.output, "Plaintext file")->required();
    decrypt->add_flag("--force", dec.force, "Overwrite the output");

    cli::AnalyzeOptions an;
    std::string an_density = "1/2";
    std::string model = "prange";
    std::string format = "text";
    auto* analyze = app.add_subcommand("analyze", "Key-space and attack-cost report");
    analyze->add_option("--pk", an.public_key, "Public key file (otherwise parameters below)");
    add_param_flags(analyze, an.params, an_density);
    analyze->add_option("--seed", an.seed, "Seed for the key generated from parameters");
    analyze->add_option("--stern-p", an.stern.p, "Stern weight p (even)")->capture_default_str();
    analyze->add_option("--stern-m", an.stern.m, "Stern window m")->capture_default_str();
    analyze->add_option("--ell", an.ell, "Message degree for the sliding matrix")->capture_default_str();
    analyze->add_option("--s", an.truncations, "Truncation index (repeatable)");
    analyze->add_option("--model", model, "ISD model for truncated recovery")
        ->check(CLI::IsMember({"prange", "stern"}))
        ->capture_default_str();
    analyze->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "kv"}))->capture_default_str();

    cli::InspectOptions ins;
    auto* inspect = app.add_subcommand("inspect", "Dump a key or ciphertext header");
    inspect->add_option("file", ins.path, "Key or ciphertext file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kUsage;
    }

    try {
        if (*keygen) {
            kg.params.density = cli::parse_fraction(kg_density);
            return cli::cmd_keygen(kg, std::cout, std::cerr);
        }
        if (*encrypt) {
            enc.error_load = cli::parse_fraction(enc_load);
            return cli::cmd_encrypt(enc, std::cout, std::cerr);
        }
        if (*decrypt) return cli::cmd_decrypt(dec, std::cout, std::cerr);
        if (*analyze) {
            an.params.density = cli::parse_fraction(an_density);
            an.model = model == "stern" ? convmce::IsdModel::Stern : convmce::IsdModel::Prange;
            an.format = format == "kv" ? cli::ReportFormat::KeyValue : cli::ReportFormat::Text;
            return cli::cmd_analyze(an, std::cout, std::cerr);
        }
        if (*inspect) return cli::cmd_inspect(ins, std::cout, std::cerr);
    } catch (const convmce::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsage;
    }
    return cli::kUsage;
}
