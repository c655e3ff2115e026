#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "convmce/analysis.hpp"
#include "convmce/keygen.hpp"

namespace convmce::cli {

// Command implementations behind the `convmce` tool. Each returns a process
// exit code and reports diagnostics on `err`.

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kFormat = 3,
    kDecodeFailure = 4,
};

/// Field selection: either q (default polynomial) or p, m and an explicit
/// reduction polynomial (constant term first).
struct FieldSpec {
    std::optional<std::uint32_t> q;
    std::optional<std::uint32_t> p;
    std::optional<std::uint32_t> m;
    std::vector<std::uint32_t> reduction;

    FieldPtr build() const;
};

struct ParamOptions {
    FieldSpec field;
    std::size_t n = 32;
    std::size_t k = 16;
    int mu = 2;
    int nu = 6;
    CodeFamily family = CodeFamily::ReedSolomon;
    Fraction density;

    SchemeParams build() const;
};

/// "a/b" or a decimal in [0, 1] such as "0.25". Throws UsageError.
Fraction parse_fraction(const std::string& text);

/// Explicit seed, else CMCE_SEED, else a nondeterministic seed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> seed, bool* from_entropy = nullptr);

struct KeygenOptions {
    ParamOptions params;
    std::optional<std::uint64_t> seed;
    std::string out_prefix = "key";
    bool force = false;
};
int cmd_keygen(const KeygenOptions& opt, std::ostream& out, std::ostream& err);

struct EncryptOptions {
    std::string public_key;
    std::string input;
    std::string output;
    std::optional<std::uint64_t> error_seed;
    Fraction error_load{1, 1};
    bool force = false;
};
int cmd_encrypt(const EncryptOptions& opt, std::ostream& out, std::ostream& err);

struct DecryptOptions {
    std::string secret_key;
    std::string input;
    std::string output;
    bool force = false;
};
int cmd_decrypt(const DecryptOptions& opt, std::ostream& out, std::ostream& err);

enum class ReportFormat { Text, KeyValue };

struct AnalyzeOptions {
    std::optional<std::string> public_key;  // otherwise a key is generated from params and seed
    ParamOptions params;
    std::optional<std::uint64_t> seed;
    SternParams stern;
    std::uint64_t ell = 0;
    std::vector<std::size_t> truncations;  // values of s
    IsdModel model = IsdModel::Prange;
    ReportFormat format = ReportFormat::Text;
};
int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err);

/// Builds the report as ordered key/value pairs (the `kv` format schema).
std::vector<std::pair<std::string, std::string>> analyze_report(const PublicKey& pk, const SchemeParams& params,
                                                                const AnalyzeOptions& opt);

struct InspectOptions {
    std::string path;
};
int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace convmce::cli
