#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmheight/bounds.hpp"

namespace cmheight::cli {

using fields::AbelianField;

enum class Command { Enumerate, Height, AverageCheck, BoundsCheck, ZeroScan, ChowlaSelberg, Corpus };
enum class Format { Json, Csv };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::Corpus;
    long modulus_max = 60;
    int precision_bits = 128;
    std::string scan_step_fraction = "1e-4";
    std::string c_param = "1/4";
    Format output_format = Format::Json;
    std::string output_path;  // file, or directory for corpus; empty = stdout

    // single-field commands
    long modulus = 0;
    std::vector<long> subgroup;
    std::uint64_t cm_type = 0;
    long d = 0;

    unsigned threads = 0;          // 0 = hardware concurrency
    long max_listed_orbits = 256;  // per-orbit height lines per field in the corpus
};

enum ExitCode { kPass = 0, kInequalityFailure = 1, kConsistencyFailure = 2, kConfigError = 3 };

int default_precision();
Command parse_command(const std::string& s);
std::string command_name(Command c);
// Accepts "p/q" or a decimal.
Real parse_real(const std::string& s, mpfr_prec_t prec);
void validate(const RunConfig& cfg);

// CM subfields of Q(mu_n), 3 <= n <= modulus_max, by conductor then subgroup.
std::vector<AbelianField> enumerate_fields(long modulus_max);

struct Output {
    std::string jsonl;
    std::string csv;
    long failures = 0;           // false or inconclusive
    long hypothesis_failed = 0;
    long consistency_errors = 0;
    long checks = 0;
    int exit_code() const;
};

Output run_command(const RunConfig& cfg);
Output run_corpus(const RunConfig& cfg);

// Mean of the heights of all CM types through the per-type profile pipeline.
Real average_height(const AbelianField& E, const arith::PrecisionContext& ctx);

// Writes the output files; returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace cmheight::cli
