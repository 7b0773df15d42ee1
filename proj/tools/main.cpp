#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"

using namespace cmheight::cli;

namespace {

std::vector<long> parse_list(const std::string& s) {
    std::vector<long> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) {
        if (tok.find_first_not_of(" ") == std::string::npos) continue;
        out.push_back(std::stol(tok));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Faltings heights of abelian CM types and the inequalities around them"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.precision_bits = default_precision();
    std::string format = "json";
    std::string subgroup;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--precision-bits", cfg.precision_bits, "working precision in bits (env CMHEIGHT_PRECISION_BITS)");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", cfg.output_path, "output file (directory for corpus)");
        sub->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
    };
    auto single = [&](CLI::App* sub) {
        sub->add_option("--modulus", cfg.modulus, "modulus n of Q(mu_n)")->required();
        sub->add_option("--subgroup", subgroup, "comma separated generators of H");
    };
    auto scan = [&](CLI::App* sub) {
        sub->add_option("--scan-step-fraction", cfg.scan_step_fraction, "grid step as a fraction of the interval");
        sub->add_option("--c", cfg.c_param, "region constant c in (0, 1/4]");
    };

    auto* en = app.add_subcommand("enumerate", "list the CM fields of conductor up to a bound");
    en->add_option("--modulus-max", cfg.modulus_max)->required();
    common(en);

    auto* he = app.add_subcommand("height", "Colmez profile and Faltings height of one CM type");
    single(he);
    he->add_option("--cm-type", cfg.cm_type, "CM type bitmask");
    common(he);

    auto* av = app.add_subcommand("average-check", "mean height over all CM types against the closed form");
    single(av);
    common(av);

    auto* bc = app.add_subcommand("bounds-check", "all inequalities for one field");
    single(bc);
    scan(bc);
    common(bc);

    auto* zs = app.add_subcommand("zero-scan", "real zero scan of the odd L-function product");
    single(zs);
    scan(zs);
    common(zs);

    auto* cs = app.add_subcommand("chowla-selberg", "imaginary quadratic height against the closed form");
    cs->add_option("-d,--d", cfg.d, "|disc| of the imaginary quadratic field")->required();
    common(cs);

    auto* co = app.add_subcommand("corpus", "every check over every CM field up to a conductor bound");
    co->add_option("--modulus-max", cfg.modulus_max);
    co->add_option("--max-listed-orbits", cfg.max_listed_orbits, "per-orbit height lines per field");
    scan(co);
    common(co);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    for (auto* sub : app.get_subcommands()) cfg.command = parse_command(sub->get_name());
    cfg.output_format = format == "csv" ? Format::Csv : Format::Json;
    try {
        cfg.subgroup = parse_list(subgroup);
    } catch (const std::exception&) {
        std::cerr << "config error: bad --subgroup list\n";
        return kConfigError;
    }
    return run(cfg, std::cout, std::cerr);
}
