#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace cmheight::cli {

namespace {

using json = nlohmann::ordered_json;
using arith::PrecisionContext;
using bounds::InequalityReport;
using bounds::Verdict;

struct Printer {
    int digits;
    explicit Printer(const PrecisionContext& ctx)
        : digits(static_cast<int>(std::ceil(ctx.bits() * 0.30102999566398120))) {}
    std::string operator()(const Real& x) const { return x.to_string(digits); }
};

json field_json(const AbelianField& E) {
    return json{{"modulus", E.modulus()}, {"subgroup_generators", E.subgroup_generators()}};
}

json field_json(const bounds::FieldDescriptor& d) {
    return json{{"modulus", d.modulus}, {"subgroup_generators", d.subgroup_generators}};
}

std::string field_label(const AbelianField& E) {
    std::string s = std::to_string(E.modulus()) + ":[";
    const auto& g = E.subgroup_generators();
    for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " " : "") + std::to_string(g[i]);
    return s + "]";
}

json inputs_json(const bounds::Inputs& in) {
    json o = json::object();
    for (const auto& [k, v] : in) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, bounds::FieldDescriptor>)
                    o[k] = field_json(x);
                else
                    o[k] = x;
            },
            v);
    }
    return o;
}

json report_json(const InequalityReport& r, const Printer& pr) {
    json o;
    o["record"] = "inequality";
    o["name"] = r.name;
    o["lhs"] = pr(r.lhs);
    o["rhs"] = pr(r.rhs);
    switch (r.holds) {
        case Verdict::Holds: o["holds"] = true; break;
        case Verdict::Fails: o["holds"] = false; break;
        default: o["holds"] = bounds::verdict_name(r.holds);
    }
    o["margin"] = pr(r.margin);
    o["strict"] = r.strict;
    o["exact"] = r.exact;
    o["inputs"] = inputs_json(r.inputs);
    return o;
}

json scan_json(const lfun::ZeroScanReport& s, const AbelianField& K, const std::string& c, const Printer& pr) {
    json o;
    o["record"] = "zero_scan";
    o["field"] = field_json(K);
    o["c"] = c;
    o["region"] = json::array({pr(s.region_left), pr(s.region_right)});
    o["step"] = pr(s.step);
    o["grid_points"] = s.grid_points;
    o["min_abs"] = pr(s.min_abs);
    o["sign_changes"] = s.sign_changes;
    o["delta"] = s.delta_flag;
    o["beta"] = s.beta_estimate ? json(pr(*s.beta_estimate)) : json(nullptr);
    o["evidence_only"] = s.evidence_only;
    return o;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + csv_escape(cells[i]);
    return s + "\n";
}

struct Tally {
    long failures = 0, hypothesis_failed = 0, consistency = 0, checks = 0;
    void add(const InequalityReport& r) {
        ++checks;
        if (r.holds == Verdict::Fails || r.holds == Verdict::Inconclusive) ++failures;
        if (r.holds == Verdict::HypothesisFailed) ++hypothesis_failed;
    }
    void merge(const Tally& o) {
        failures += o.failures;
        hypothesis_failed += o.hypothesis_failed;
        consistency += o.consistency;
        checks += o.checks;
    }
};

// Work items run on a small pool; results come back in submission order.
template <class R>
std::vector<R> parallel_map(std::size_t n, unsigned threads, const std::function<R(std::size_t)>& f) {
    std::vector<R> out(n);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::mutex mu;
    std::size_t next = 0;
    auto worker = [&]() {
        while (true) {
            std::size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= n) return;
                i = next++;
            }
            out[i] = f(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

unsigned thread_count(const RunConfig& cfg) {
    if (cfg.threads) return cfg.threads;
    unsigned h = std::thread::hardware_concurrency();
    return h ? h : 1;
}

AbelianField single_field(const RunConfig& cfg, bool require_cm) {
    if (cfg.modulus < 1) throw ConfigError("--modulus is required");
    try {
        return fields::make_field(cfg.modulus, cfg.subgroup, require_cm);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

using FieldKey = std::pair<long, std::vector<long>>;
FieldKey key_of(const AbelianField& K) { return {K.modulus(), K.subgroup()}; }

struct ScanPair {
    lfun::ZeroScanReport quarter;  // c = 1/4
    lfun::ZeroScanReport chosen;   // c = c_param
};

struct ClassStats {
    std::uint64_t types = 0;
    Real max_h, min_h;
    std::uint64_t max_mask = 0, min_mask = 0;
};

struct FieldResult {
    std::vector<std::string> lines;
    std::vector<std::string> rows;
    Tally tally;
};

class CorpusRunner {
public:
    CorpusRunner(const RunConfig& cfg)
        : cfg_(cfg), ctx_(cfg.precision_bits), pr_(ctx_), p_(ctx_.work_prec()),
          c_(parse_real(cfg.c_param, p_)), quarter_(mpq_class(1, 4), p_), step_(parse_real(cfg.scan_step_fraction, p_)) {}

    const PrecisionContext& ctx() const { return ctx_; }

    // With a target, only that field is checked; the enumeration is
    // restricted to fields whose conductor divides its conductor.
    Output run(const AbelianField* target = nullptr) {
        fields_ = enumerate_fields(target ? target->modulus() : cfg_.modulus_max);
        if (target) {
            const long n = target->modulus();
            std::erase_if(fields_, [&](const AbelianField& K) { return n % K.modulus() != 0; });
        }
        for (std::size_t i = 0; i < fields_.size(); ++i) index_[key_of(fields_[i])] = i;
        const unsigned threads = thread_count(cfg_);
        same_c_ = c_ == quarter_;
        scans_ = parallel_map<ScanPair>(fields_.size(), threads, [&](std::size_t i) {
            ScanPair s;
            s.quarter = bounds::scan_field(fields_[i], quarter_, step_, ctx_);
            s.chosen = same_c_ ? s.quarter : bounds::scan_field(fields_[i], c_, step_, ctx_);
            return s;
        });
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < fields_.size(); ++i)
            if (!target || fields_[i] == *target) todo.push_back(i);
        auto results = parallel_map<FieldResult>(todo.size(), threads, [&](std::size_t k) { return field(todo[k]); });
        // pairs of corpus fields
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < fields_.size() && !target; ++i)
            for (std::size_t j = i; j < fields_.size(); ++j)
                if (std::lcm(fields_[i].modulus(), fields_[j].modulus()) <= cfg_.modulus_max) pairs.emplace_back(i, j);
        auto pair_results = parallel_map<FieldResult>(pairs.size(), threads, [&](std::size_t k) {
            FieldResult r;
            for (const auto& rep : bounds::check_disc_compositum(fields_[pairs[k].first], fields_[pairs[k].second], ctx_))
                emit(r, rep);
            return r;
        });

        Output out;
        Tally total;
        json head;
        head["record"] = "config";
        head["command"] = target ? "bounds-check" : "corpus";
        head["modulus_max"] = cfg_.modulus_max;
        head["precision_bits"] = cfg_.precision_bits;
        head["scan_step_fraction"] = cfg_.scan_step_fraction;
        head["c_param"] = cfg_.c_param;
        head["fields"] = fields_.size();
        out.jsonl += head.dump() + "\n";
        out.csv = csv_row({"field", "degree", "g", "log_disc", "cm_type", "orbit_size", "height", "average_residual",
                           "scan_delta", "min_margin_check", "min_margin"});
        for (auto& r : results) {
            for (auto& l : r.lines) out.jsonl += l;
            for (auto& l : r.rows) out.csv += l;
            total.merge(r.tally);
        }
        for (auto& r : pair_results) {
            for (auto& l : r.lines) out.jsonl += l;
            total.merge(r.tally);
        }
        json tail;
        tail["record"] = "summary";
        tail["checks"] = total.checks;
        tail["failures"] = total.failures;
        tail["hypothesis_failed"] = total.hypothesis_failed;
        tail["consistency_errors"] = total.consistency;
        out.jsonl += tail.dump() + "\n";
        out.failures = total.failures;
        out.hypothesis_failed = total.hypothesis_failed;
        out.consistency_errors = total.consistency;
        out.checks = total.checks;
        return out;
    }

private:
    void emit(FieldResult& r, const InequalityReport& rep) {
        r.lines.push_back(report_json(rep, pr_).dump() + "\n");
        r.tally.add(rep);
    }

    const ScanPair& scan_of(const AbelianField& K) const {
        auto it = index_.find(key_of(K));
        if (it == index_.end()) throw ConsistencyError("reflex field missing from the corpus: " + K.to_string());
        return scans_[it->second];
    }

    FieldResult field(std::size_t i) {
        FieldResult r;
        try {
            field_body(i, r);
        } catch (const ConsistencyError& e) {
            error(r, i, e.what());
        } catch (const PrecisionError& e) {
            error(r, i, e.what());
        } catch (const DomainError& e) {
            error(r, i, e.what());
        }
        return r;
    }

    void error(FieldResult& r, std::size_t i, const std::string& what) {
        json o;
        o["record"] = "error";
        o["field"] = field_json(fields_[i]);
        o["message"] = what;
        r.lines.push_back(o.dump() + "\n");
        ++r.tally.consistency;
    }

    void field_body(std::size_t i, FieldResult& r) {
        const AbelianField& E = fields_[i];
        auto Ep = std::make_shared<const AbelianField>(E);
        const long g = E.g();
        colmez::ProfileEngine engine(Ep, ctx_);
        colmez::TypeSpace space(E);
        colmez::HeightKernel kernel(space, engine);
        const Real log_disc = fields::discriminant_log_value(E, p_);

        // heights per translation orbit
        struct Listed {
            std::uint64_t mask;
            long size;
            Real h;
        };
        std::vector<Listed> listed;
        bool overflow = false;
        std::vector<std::pair<std::uint64_t, ClassStats>> classes;
        Real sum(p_);
        std::uint64_t orbits = 0;
        space.for_each_orbit([&](std::uint64_t P, long size) {
            ++orbits;
            Real h = kernel.height(P);
            Real t = h * size;
            sum += t;
            std::uint64_t key = space.stabilizer_key(P);
            auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& c) { return c.first == key; });
            if (it == classes.end()) {
                ClassStats s;
                s.max_h = h;
                s.min_h = h;
                s.max_mask = s.min_mask = space.mask_of_pattern(P);
                classes.emplace_back(key, std::move(s));
                it = classes.end() - 1;
            } else {
                if (h > it->second.max_h) {
                    it->second.max_h = h;
                    it->second.max_mask = space.mask_of_pattern(P);
                }
                if (h < it->second.min_h) {
                    it->second.min_h = h;
                    it->second.min_mask = space.mask_of_pattern(P);
                }
            }
            it->second.types += static_cast<std::uint64_t>(size);
            if (!overflow) {
                if (static_cast<long>(listed.size()) >= cfg_.max_listed_orbits) {
                    overflow = true;
                    listed.clear();
                } else {
                    listed.push_back({space.mask_of_pattern(P), size, h});
                }
            }
        });
        std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::sort(listed.begin(), listed.end(), [](const Listed& a, const Listed& b) { return a.mask < b.mask; });

        Real mean = sum / pow2(g, p_);
        Real rhs = engine.averaged_rhs();
        Real residual = abs(mean - rhs);
        const ScanPair& own = scans_[i];

        json fj;
        fj["record"] = "field";
        fj["field"] = field_json(E);
        fj["degree"] = E.degree();
        fj["g"] = g;
        fj["log_disc"] = pr_(log_disc);
        fj["disc"] = fields::discriminant_exact(E).get_str();
        fj["cm_types"] = std::to_string(1ULL << g);
        fj["orbits"] = orbits;
        fj["contains_imag_quadratic"] = fields::contains_imag_quadratic(E);
        r.lines.push_back(fj.dump() + "\n");

        for (const auto& l : listed) {
            json o;
            o["record"] = "height";
            o["field"] = field_json(E);
            o["cm_type"] = l.mask;
            o["orbit_size"] = l.size;
            o["height"] = pr_(l.h);
            r.lines.push_back(o.dump() + "\n");
        }

        json avg;
        avg["record"] = "average";
        avg["field"] = field_json(E);
        avg["mean_height"] = pr_(mean);
        avg["averaged_rhs"] = pr_(rhs);
        avg["residual"] = pr_(residual);
        r.lines.push_back(avg.dump() + "\n");
        if (residual > ctx_.eps()) throw ConsistencyError("averaged identity residual above eps");

        r.lines.push_back(scan_json(own.chosen, E, cfg_.c_param, pr_).dump() + "\n");
        if (!same_c_) r.lines.push_back(scan_json(own.quarter, E, "1/4", pr_).dump() + "\n");

        std::vector<InequalityReport> reps;
        Real lowest(p_);
        std::uint64_t lowest_mask = 0;
        bool first = true;
        for (const auto& [key, cs] : classes) {
            AbelianField R = AbelianField::from_subgroup(E.modulus(), space.residues_of_key(key));
            const ScanPair& rs = scan_of(R);
            bounds::Inputs in{{"field", bounds::describe(E)},
                              {"reflex", bounds::describe(R)},
                              {"types", static_cast<long>(cs.types)},
                              {"cm_type", static_cast<long>(cs.max_mask)}};
            reps.push_back(bounds::check_eq13(cs.max_h, g, R, c_, rs.chosen, ctx_, in));

            const auto& X = R.character_group();
            for (std::size_t a = 0; a < X.size(); ++a) {
                if (X[a].is_trivial() || !dirichlet::is_odd(X[a])) continue;
                std::size_t b = std::find(X.begin(), X.end(), X[a].conj()) - X.begin();
                if (b < a) continue;
                auto [lo, hi] = bounds::check_eq6(R, X[a], rs.quarter, ctx_);
                lo.inputs.insert(lo.inputs.begin(), {"field", bounds::describe(E)});
                hi.inputs.insert(hi.inputs.begin(), {"field", bounds::describe(E)});
                reps.push_back(std::move(lo));
                reps.push_back(std::move(hi));
            }

            Real ratio = bounds::root_discriminant_ratio(cs.max_h, R, p_);
            json m;
            m["record"] = "metric";
            m["name"] = "root_disc_ratio";
            m["field"] = field_json(E);
            m["reflex"] = field_json(R);
            m["cm_type"] = cs.max_mask;
            m["value"] = pr_(ratio);
            r.lines.push_back(m.dump() + "\n");

            if (first || cs.min_h < lowest) {
                lowest = cs.min_h;
                lowest_mask = cs.min_mask;
                first = false;
            }
            if (!(R == E)) {
                for (auto& x : bounds::check_disc_compositum(E, R, ctx_)) reps.push_back(std::move(x));
            }
        }
        reps.push_back(bounds::bost_report(lowest, g, ctx_,
                                           {{"field", bounds::describe(E)}, {"cm_type", static_cast<long>(lowest_mask)}}));

        for (auto& s : bounds::check_nearby_reflex_all(E, ctx_)) reps.push_back(std::move(s.report));
        reps.push_back(bounds::check_mu_roots_of_unity(E, ctx_));
        reps.push_back(bounds::check_cyclotomic_disc_bound(E, ctx_));
        for (auto& x : bounds::check_disc_compositum(E, fields::max_real_subfield(E), ctx_)) reps.push_back(std::move(x));
        for (auto& x : bounds::check_disc_cyclotomic_compositum(E, ctx_)) reps.push_back(std::move(x));

        const InequalityReport* tight = nullptr;
        for (const auto& rep : reps) {
            emit(r, rep);
            if (rep.holds == Verdict::HypothesisFailed) continue;
            if (!tight || rep.margin < tight->margin) tight = &rep;
        }

        std::vector<std::string> base{field_label(E), std::to_string(E.degree()), std::to_string(g), pr_(log_disc)};
        auto row = [&](const std::string& mask, const std::string& size, const std::string& h) {
            std::vector<std::string> cells = base;
            cells.insert(cells.end(), {mask, size, h, pr_(residual), own.chosen.delta_flag ? "true" : "false",
                                       tight ? tight->name : "", tight ? pr_(tight->margin) : ""});
            r.rows.push_back(csv_row(cells));
        };
        if (!overflow) {
            for (const auto& l : listed) row(std::to_string(l.mask), std::to_string(l.size), pr_(l.h));
        } else {
            for (const auto& [key, cs] : classes) {
                row(std::to_string(cs.min_mask), "class:" + std::to_string(cs.types), pr_(cs.min_h));
                row(std::to_string(cs.max_mask), "class:" + std::to_string(cs.types), pr_(cs.max_h));
            }
        }
    }

    RunConfig cfg_;
    PrecisionContext ctx_;
    Printer pr_;
    mpfr_prec_t p_;
    Real c_, quarter_, step_;
    bool same_c_ = true;
    std::vector<AbelianField> fields_;
    std::map<FieldKey, std::size_t> index_;
    std::vector<ScanPair> scans_;
};

Output single(const std::string& line, const std::string& csv, const Tally& t = {}) {
    Output o;
    o.jsonl = line;
    o.csv = csv;
    o.failures = t.failures;
    o.hypothesis_failed = t.hypothesis_failed;
    o.consistency_errors = t.consistency;
    o.checks = t.checks;
    return o;
}

}  // namespace

int Output::exit_code() const {
    if (consistency_errors) return kConsistencyFailure;
    if (failures || hypothesis_failed) return kInequalityFailure;
    return kPass;
}

int default_precision() {
    if (const char* v = std::getenv("CMHEIGHT_PRECISION_BITS")) {
        char* end = nullptr;
        long b = std::strtol(v, &end, 10);
        if (end && *end == '\0' && b > 0) return static_cast<int>(b);
    }
    return 128;
}

Command parse_command(const std::string& s) {
    static const std::map<std::string, Command> m{{"enumerate", Command::Enumerate},
                                                  {"height", Command::Height},
                                                  {"average-check", Command::AverageCheck},
                                                  {"bounds-check", Command::BoundsCheck},
                                                  {"zero-scan", Command::ZeroScan},
                                                  {"chowla-selberg", Command::ChowlaSelberg},
                                                  {"corpus", Command::Corpus}};
    auto it = m.find(s);
    if (it == m.end()) throw ConfigError("unknown command " + s);
    return it->second;
}

std::string command_name(Command c) {
    switch (c) {
        case Command::Enumerate: return "enumerate";
        case Command::Height: return "height";
        case Command::AverageCheck: return "average-check";
        case Command::BoundsCheck: return "bounds-check";
        case Command::ZeroScan: return "zero-scan";
        case Command::ChowlaSelberg: return "chowla-selberg";
        case Command::Corpus: return "corpus";
    }
    return "corpus";
}

Real parse_real(const std::string& s, mpfr_prec_t prec) {
    try {
        if (s.find('/') != std::string::npos) {
            mpq_class q(s);
            if (q.get_den() == 0) throw ConfigError("zero denominator in " + s);
            q.canonicalize();
            return Real(q, prec);
        }
        Real r = Real::parse(s, prec);
        if (!r.is_finite()) throw ConfigError("not a number: " + s);
        return r;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: " + s);
    } catch (const DomainError&) {
        throw ConfigError("not a number: " + s);
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.precision_bits < arith::PrecisionContext::kMinBits) throw ConfigError("precision_bits must be at least 64");
    if (cfg.command == Command::Enumerate || cfg.command == Command::Corpus) {
        if (cfg.modulus_max < 3) throw ConfigError("modulus_max must be at least 3");
    }
    const mpfr_prec_t p = cfg.precision_bits + 32;
    Real c = parse_real(cfg.c_param, p);
    if (!(c > 0) || c > Real(mpq_class(1, 4), p)) throw ConfigError("c_param must lie in (0, 1/4]");
    Real s = parse_real(cfg.scan_step_fraction, p);
    if (!(s > 0) || s > 1) throw ConfigError("scan_step_fraction must lie in (0, 1]");
    if (cfg.max_listed_orbits < 0) throw ConfigError("max_listed_orbits must be non-negative");
}

std::vector<AbelianField> enumerate_fields(long modulus_max) {
    std::vector<AbelianField> out;
    for (long n = 3; n <= modulus_max; ++n)
        for (auto& K : fields::fields_of_conductor(n))
            if (K.is_cm()) out.push_back(std::move(K));
    return out;
}

Real average_height(const AbelianField& E, const PrecisionContext& ctx) {
    auto Ep = std::make_shared<const AbelianField>(E);
    colmez::ProfileEngine engine(Ep, ctx);
    const std::uint64_t count = fields::cm_type_count(E);
    Real sum(ctx.work_prec());
    for (std::uint64_t m = 0; m < count; ++m) sum += engine.profile(m).height;
    return sum / Real(mpz_class(std::to_string(count)), ctx.work_prec());
}

Output run_corpus(const RunConfig& cfg) {
    validate(cfg);
    CorpusRunner runner(cfg);
    return runner.run();
}

Output run_command(const RunConfig& cfg) {
    validate(cfg);
    PrecisionContext ctx(cfg.precision_bits);
    Printer pr(ctx);
    const mpfr_prec_t p = ctx.work_prec();
    switch (cfg.command) {
        case Command::Corpus: return run_corpus(cfg);
        case Command::Enumerate: {
            Output o;
            o.csv = csv_row({"modulus", "subgroup_generators", "degree", "g", "disc"});
            for (const auto& E : enumerate_fields(cfg.modulus_max)) {
                json j = field_json(E);
                j["degree"] = E.degree();
                j["g"] = E.g();
                j["disc"] = fields::discriminant_exact(E).get_str();
                o.jsonl += j.dump() + "\n";
                json gens = E.subgroup_generators();
                o.csv += csv_row({std::to_string(E.modulus()), gens.dump(), std::to_string(E.degree()),
                                  std::to_string(E.g()), fields::discriminant_exact(E).get_str()});
            }
            return o;
        }
        case Command::Height: {
            auto Ep = std::make_shared<const AbelianField>(single_field(cfg, true));
            if (cfg.cm_type >= fields::cm_type_count(*Ep)) throw ConfigError("cm_type out of range");
            colmez::ColmezProfile prof = colmez::compute_profile(fields::CMType(Ep, cfg.cm_type), ctx);
            json j;
            j["record"] = "profile";
            j["field"] = field_json(*Ep);
            j["cm_type"] = cfg.cm_type;
            json a0 = json::object();
            for (const auto& [k, v] : prof.a0) a0[std::to_string(k)] = v.get_str();
            j["a0"] = a0;
            j["stabilizer"] = prof.stabilizer;
            json ms = json::array();
            for (const auto& m : prof.multiplicities)
                ms.push_back({{"chi", m.chi.to_string()}, {"m", pr(m.value.re)}});
            j["m"] = ms;
            j["m_trivial"] = prof.trivial_multiplicity.get_str();
            j["mu"] = pr(prof.mu);
            j["z"] = pr(prof.z);
            j["height"] = pr(prof.height);
            return single(j.dump() + "\n",
                          csv_row({"field", "cm_type", "mu", "z", "height"}) +
                              csv_row({field_label(*Ep), std::to_string(cfg.cm_type), pr(prof.mu), pr(prof.z),
                                       pr(prof.height)}));
        }
        case Command::AverageCheck: {
            AbelianField E = single_field(cfg, true);
            Real mean = average_height(E, ctx);
            Real rhs = colmez::averaged_rhs(E, ctx);
            Real res = abs(mean - rhs);
            json j;
            j["record"] = "average";
            j["field"] = field_json(E);
            j["mean_height"] = pr(mean);
            j["averaged_rhs"] = pr(rhs);
            j["residual"] = pr(res);
            Tally t;
            if (res > ctx.eps()) t.consistency = 1;
            return single(j.dump() + "\n",
                          csv_row({"field", "mean_height", "averaged_rhs", "residual"}) +
                              csv_row({field_label(E), pr(mean), pr(rhs), pr(res)}),
                          t);
        }
        case Command::ZeroScan: {
            AbelianField E = single_field(cfg, true);
            Real c = parse_real(cfg.c_param, p), step = parse_real(cfg.scan_step_fraction, p);
            auto s = bounds::scan_field(E, c, step, ctx);
            return single(scan_json(s, E, cfg.c_param, pr).dump() + "\n",
                          csv_row({"field", "region_left", "step", "min_abs", "sign_changes", "delta"}) +
                              csv_row({field_label(E), pr(s.region_left), pr(s.step), pr(s.min_abs),
                                       std::to_string(s.sign_changes), s.delta_flag ? "true" : "false"}));
        }
        case Command::ChowlaSelberg: {
            if (!colmez::is_fundamental_discriminant_magnitude(cfg.d))
                throw ConfigError("-d must be a fundamental discriminant");
            Real oracle = colmez::chowla_selberg_oracle(cfg.d, ctx);
            // Q(sqrt(-d)) as the kernel of the quadratic character of conductor d.
            std::vector<long> H;
            for (long a : dirichlet::unit_group(cfg.d)->elements())
                if (mpz_si_kronecker(-cfg.d, mpz_class(a).get_mpz_t()) == 1) H.push_back(a);
            auto Ep = std::make_shared<const AbelianField>(AbelianField::from_subgroup(cfg.d, H));
            Real h = colmez::faltings_height(fields::CMType(Ep, 0), ctx);
            Real diff = abs(h - oracle);
            json j;
            j["record"] = "chowla_selberg";
            j["d"] = cfg.d;
            j["field"] = field_json(*Ep);
            j["oracle"] = pr(oracle);
            j["height"] = pr(h);
            j["difference"] = pr(diff);
            Tally t;
            if (diff > ctx.eps()) t.consistency = 1;
            return single(j.dump() + "\n",
                          csv_row({"d", "oracle", "height", "difference"}) +
                              csv_row({std::to_string(cfg.d), pr(oracle), pr(h), pr(diff)}),
                          t);
        }
        case Command::BoundsCheck: {
            AbelianField E = single_field(cfg, true);
            CorpusRunner runner(cfg);
            return runner.run(&E);
        }
    }
    throw ConfigError("unknown command");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Output o;
    try {
        o = run_command(cfg);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConsistencyError& e) {
        err << "consistency failure: " << e.what() << "\n";
        return kConsistencyFailure;
    } catch (const PrecisionError& e) {
        err << "precision failure: " << e.what() << "\n";
        return kConsistencyFailure;
    }
    namespace fs = std::filesystem;
    if (cfg.command == Command::Corpus) {
        if (cfg.output_path.empty()) {
            out << (cfg.output_format == Format::Json ? o.jsonl : o.csv);
        } else {
            std::error_code ec;
            fs::create_directories(cfg.output_path, ec);
            std::ofstream j(fs::path(cfg.output_path) / "report.jsonl", std::ios::binary);
            std::ofstream c(fs::path(cfg.output_path) / "summary.csv", std::ios::binary);
            if (!j || !c) {
                err << "config error: cannot write to " << cfg.output_path << "\n";
                return kConfigError;
            }
            j << o.jsonl;
            c << o.csv;
        }
    } else {
        const std::string& body = cfg.output_format == Format::Json ? o.jsonl : o.csv;
        if (cfg.output_path.empty()) {
            out << body;
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f) {
                err << "config error: cannot write to " << cfg.output_path << "\n";
                return kConfigError;
            }
            f << body;
        }
    }
    err << "checks " << o.checks << ", failures " << o.failures << ", hypothesis-failed " << o.hypothesis_failed
        << ", consistency errors " << o.consistency_errors << "\n";
    return o.exit_code();
}

}  // namespace cmheight::cli
