// robin-forge: generate colossally abundant numbers in factored form, verify
// Robin's inequality with certified interval arithmetic, and emit diagnostic
// series for the related abundancy-ratio and double-log laws.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robin/ca_engine.hpp"
#include "robin/checkpoint.hpp"
#include "robin/interval.hpp"
#include "robin/metrics.hpp"
#include "robin/oracle.hpp"

namespace {

using nlohmann::ordered_json;
using robin::ca::CaGenerator;
using robin::ca::CAStep;
using robin::ca::FactoredCA;
using robin::num::HPInterval;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolates = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitOracleMismatch = 4;

struct RunConfig {
    std::uint64_t steps = 10000;
    long precision_bits = 128;
    long precision_cap_bits = 4096;
    double band_b = 0.25;
    double band_c = 1.0;
    std::uint64_t exact_mode_bound = 1000000000ULL;
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t checkpoint_every = 1000;
    std::string checkpoint_path;
    std::string resume_path;
    std::uint64_t oracle_bound = 1000000;
};

class RowWriter {
public:
    RowWriter(const std::string& path, bool jsonl, std::vector<std::string> columns)
        : jsonl_(jsonl), columns_(std::move(columns)) {
        if (path == "-") {
            os_ = &std::cout;
        } else {
            file_.open(path, std::ios::trunc);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
            os_ = &file_;
        }
        if (!jsonl_) {
            *os_ << "# robin-forge v1 schema\n";
            for (std::size_t i = 0; i < columns_.size(); ++i) {
                *os_ << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
            }
        }
    }

    void row(const ordered_json& fields) {
        if (jsonl_) {
            *os_ << fields.dump() << "\n";
            return;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            auto it = fields.find(columns_[i]);
            if (it != fields.end()) {
                if (it->is_string()) {
                    *os_ << it->get<std::string>();
                } else {
                    *os_ << it->dump();
                }
            }
            *os_ << (i + 1 < columns_.size() ? "," : "\n");
        }
    }

    void comment(const std::string& text) {
        if (jsonl_) {
            ordered_json j;
            j["comment"] = text;
            *os_ << j.dump() << "\n";
        } else {
            *os_ << "# " << text << "\n";
        }
    }

    bool good() const { return os_->good(); }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
    bool jsonl_;
    std::vector<std::string> columns_;
};

void put_interval(ordered_json& j, const std::string& name, const HPInterval& x) {
    auto printed = robin::num::print_truncated(x);
    j[name] = printed.value;
    j[name + "_err"] = printed.error_bound;
}

void put_empty(ordered_json& j, const std::string& name) {
    j[name] = "";
    j[name + "_err"] = "";
}

std::string join_quotient(const CAStep& step, bool priors) {
    std::string s;
    for (std::size_t i = 0; i < step.quotient.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(priors ? step.quotient[i].prior_exponent : step.quotient[i].p);
    }
    return s;
}

const char* verdict_name(robin::metrics::RobinKind k) {
    switch (k) {
        case robin::metrics::RobinKind::Satisfies: return "satisfies";
        case robin::metrics::RobinKind::Violates: return "violates";
        case robin::metrics::RobinKind::Boundary: return "boundary";
        case robin::metrics::RobinKind::Undecided: return "undecided";
    }
    return "?";
}

const char* band_name(robin::metrics::BandClass b) {
    switch (b) {
        case robin::metrics::BandClass::Below: return "below";
        case robin::metrics::BandClass::InBand: return "in";
        case robin::metrics::BandClass::Above: return "above";
        case robin::metrics::BandClass::Undecided: return "undecided";
    }
    return "?";
}

CaGenerator make_generator(const RunConfig& cfg, std::uint64_t& start_step) {
    CaGenerator::Options opts;
    opts.precision = cfg.precision_bits;
    opts.precision_cap = cfg.precision_cap_bits;
    opts.exact_bound = mpz_class(static_cast<unsigned long>(cfg.exact_mode_bound));
    start_step = 0;
    if (!cfg.resume_path.empty()) {
        auto cp = robin::checkpoint::load(cfg.resume_path);
        robin::checkpoint::restore_exact_value(cp.state, opts.exact_bound);
        start_step = cp.state.step_index;
        return CaGenerator::resume(std::move(cp.state), opts, &cp.queue);
    }
    return CaGenerator(opts);
}

void maybe_checkpoint(const RunConfig& cfg, const CaGenerator& gen, std::uint64_t step) {
    if (!cfg.checkpoint_path.empty() && cfg.checkpoint_every > 0 &&
        step % cfg.checkpoint_every == 0) {
        robin::checkpoint::save(cfg.checkpoint_path, gen);
    }
}

int cmd_generate(const RunConfig& cfg) {
    std::uint64_t start_step = 0;
    CaGenerator gen = make_generator(cfg, start_step);
    RowWriter writer(cfg.out, cfg.format == "jsonl",
                     {"step_index", "quotient_kind", "quotient_primes", "prior_exponents",
                      "log10_n", "log10_n_err", "loglog_n", "loglog_n_err", "epsilon",
                      "epsilon_err", "tie"});
    HPInterval log10 = robin::num::ln10(cfg.precision_bits);

    for (std::uint64_t i = start_step; i < cfg.steps; ++i) {
        CAStep step = gen.next();
        const FactoredCA& st = gen.state();
        ordered_json j;
        j["step_index"] = step.step_index;
        j["quotient_kind"] = step.kind == CAStep::Kind::Prime ? "prime" : "semiprime";
        j["quotient_primes"] = join_quotient(step, false);
        j["prior_exponents"] = join_quotient(step, true);
        put_interval(j, "log10_n", st.log_n / log10);
        if (st.log_n.is_positive()) {
            put_interval(j, "loglog_n", st.log_n.log());
        } else {
            put_empty(j, "loglog_n");
        }
        put_interval(j, "epsilon", step.epsilon);
        j["tie"] = step.tie ? 1 : 0;
        writer.row(j);
        maybe_checkpoint(cfg, gen, step.step_index);
    }
    return writer.good() ? kExitOk : kExitUsage;
}

int cmd_verify(const RunConfig& cfg) {
    std::uint64_t start_step = 0;
    CaGenerator gen = make_generator(cfg, start_step);
    RowWriter writer(cfg.out, cfg.format == "jsonl",
                     {"step_index", "quotient_kind", "quotient_primes", "log10_n",
                      "log10_n_err", "g", "g_err", "verdict", "margin", "margin_err", "band_b",
                      "band_c", "normalized_excess", "normalized_excess_err", "band_class",
                      "lemma1_ratio", "lemma1_ratio_err", "lemma2_value", "lemma2_value_err",
                      "aek7_ratio", "aek7_ratio_err", "tie"});
    HPInterval log10 = robin::num::ln10(cfg.precision_bits);
    robin::metrics::Options mopts{static_cast<mpfr_prec_t>(cfg.precision_bits),
                                  static_cast<mpfr_prec_t>(cfg.precision_cap_bits)};

    std::uint64_t n_satisfies = 0, n_boundary = 0, n_undecided = 0, n_violates = 0;
    std::optional<HPInterval> max_excess;
    std::optional<HPInterval> sup_growth;  // sup of (G(n)/G(m) - 1) log n
    std::optional<HPInterval> prev_log_n;
    std::optional<HPInterval> prev_g;

    for (std::uint64_t i = start_step; i < cfg.steps; ++i) {
        CAStep step = gen.next();
        const FactoredCA& st = gen.state();
        ordered_json j;
        j["step_index"] = step.step_index;
        j["quotient_kind"] = step.kind == CAStep::Kind::Prime ? "prime" : "semiprime";
        j["quotient_primes"] = join_quotient(step, false);
        put_interval(j, "log10_n", st.log_n / log10);

        auto verdict = robin::metrics::robin_check(st, mopts);
        switch (verdict.kind) {
            case robin::metrics::RobinKind::Satisfies: ++n_satisfies; break;
            case robin::metrics::RobinKind::Boundary: ++n_boundary; break;
            case robin::metrics::RobinKind::Undecided: ++n_undecided; break;
            case robin::metrics::RobinKind::Violates: ++n_violates; break;
        }
        if (verdict.g) {
            put_interval(j, "g", *verdict.g);
            put_interval(j, "margin", *verdict.margin);
        } else {
            put_empty(j, "g");
            put_empty(j, "margin");
        }
        j["verdict"] = verdict_name(verdict.kind);
        j["band_b"] = cfg.band_b;
        j["band_c"] = cfg.band_c;

        if (verdict.kind != robin::metrics::RobinKind::Boundary) {
            auto report = robin::metrics::band_margin(st, cfg.band_b, cfg.band_c, mopts);
            put_interval(j, "normalized_excess", *report.normalized_excess);
            j["band_class"] = band_name(report.band);
            if (!max_excess ||
                mpfr_greater_p(report.normalized_excess->hi(), max_excess->hi())) {
                max_excess = *report.normalized_excess;
            }
        } else {
            put_empty(j, "normalized_excess");
            j["band_class"] = "";
        }

        if (prev_log_n && robin::num::compare(*prev_log_n, HPInterval::from_int(1)) ==
                              robin::num::Verdict::Greater) {
            HPInterval lemma1 = prev_log_n->log() / st.log_n.log();
            put_interval(j, "lemma1_ratio", lemma1);
        } else {
            put_empty(j, "lemma1_ratio");
        }
        put_interval(j, "lemma2_value",
                     robin::metrics::lemma2_value(st, cfg.band_b, cfg.precision_bits));
        put_interval(j, "aek7_ratio", robin::metrics::aek7_ratio(st, cfg.precision_bits));
        j["tie"] = step.tie ? 1 : 0;
        writer.row(j);

        if (prev_g && verdict.g) {
            HPInterval scaled =
                (*verdict.g / *prev_g - HPInterval::from_int(1)) * st.log_n;
            if (!sup_growth || mpfr_greater_p(scaled.hi(), sup_growth->hi())) {
                sup_growth = scaled;
            }
        }
        prev_log_n = st.log_n;
        prev_g = verdict.g;
        maybe_checkpoint(cfg, gen, step.step_index);
    }

    writer.comment("summary satisfies=" + std::to_string(n_satisfies) +
                   " boundary=" + std::to_string(n_boundary) +
                   " undecided=" + std::to_string(n_undecided) +
                   " violates=" + std::to_string(n_violates));
    writer.comment("summary max_normalized_excess=" +
                   (max_excess ? robin::num::print_truncated(*max_excess).value : "n/a"));
    writer.comment("summary sup_growth_constant=" +
                   (sup_growth ? robin::num::print_truncated(*sup_growth).value : "n/a"));

    if (!writer.good()) return kExitUsage;
    if (n_violates > 0) return kExitViolates;
    if (n_undecided > 0) return kExitUndecided;
    return kExitOk;
}

std::vector<std::uint64_t> log_spaced_checkpoints(std::uint64_t steps) {
    std::vector<std::uint64_t> out;
    std::uint64_t next = 1;
    while (next < steps) {
        out.push_back(next);
        std::uint64_t grown = next + std::max<std::uint64_t>(1, next / 10);
        next = grown;
    }
    out.push_back(steps);
    return out;
}

int cmd_diagnostics(const RunConfig& cfg, const std::string& which) {
    std::uint64_t start_step = 0;
    CaGenerator gen = make_generator(cfg, start_step);
    robin::metrics::Options mopts{static_cast<mpfr_prec_t>(cfg.precision_bits),
                                  static_cast<mpfr_prec_t>(cfg.precision_cap_bits)};
    HPInterval log10 = robin::num::ln10(cfg.precision_bits);

    std::vector<std::string> columns;
    if (which == "lemma1") {
        columns = {"step_index", "log10_n", "log10_n_err", "ratio", "ratio_err",
                   "abs_dev", "abs_dev_err", "envelope", "envelope_err"};
    } else if (which == "lemma2") {
        columns = {"step_index", "log10_n", "log10_n_err", "value", "value_err", "running_max"};
    } else if (which == "lemma3") {
        columns = {"step_index", "p_max", "a_p", "inv_p_sigma", "inv_p_sigma_err", "inv_p",
                   "inv_p_err", "sigma_p_a", "sigma_lower_bound"};
    } else if (which == "aek7") {
        columns = {"step_index", "p_max", "log10_n", "log10_n_err", "ratio", "ratio_err"};
    } else if (which == "growth") {
        columns = {"step_index", "abundancy_ratio", "abundancy_ratio_err", "loglog_ratio",
                   "loglog_ratio_err", "product", "product_err", "scaled_excess",
                   "scaled_excess_err"};
    } else {
        std::cerr << "unknown diagnostics series: " << which << "\n";
        return kExitUsage;
    }
    RowWriter writer(cfg.out, cfg.format == "jsonl", columns);

    auto checkpoints = log_spaced_checkpoints(cfg.steps);
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] <= start_step) ++next_cp;
    double running_max = 0.0;
    bool have_running_max = false;

    std::optional<HPInterval> prev_log_n;
    for (std::uint64_t i = start_step; i < cfg.steps; ++i) {
        bool emit_next = next_cp < checkpoints.size() && checkpoints[next_cp] == i + 1;
        if (emit_next) prev_log_n = gen.state().log_n;
        CAStep step = gen.next();
        const FactoredCA& st = gen.state();
        maybe_checkpoint(cfg, gen, step.step_index);
        if (!emit_next) continue;
        ++next_cp;

        ordered_json j;
        j["step_index"] = step.step_index;
        if (which == "lemma1") {
            put_interval(j, "log10_n", st.log_n / log10);
            if (prev_log_n && robin::num::compare(*prev_log_n, HPInterval::from_int(1)) ==
                                  robin::num::Verdict::Greater) {
                HPInterval ratio = prev_log_n->log() / st.log_n.log();
                HPInterval dev = ratio - HPInterval::from_int(1);
                HPInterval ln_q = st.log_n - *prev_log_n;
                HPInterval envelope = ln_q / (st.log_n * st.log_n.log());
                put_interval(j, "ratio", ratio);
                put_interval(j, "abs_dev", dev);
                put_interval(j, "envelope", envelope);
            } else {
                put_empty(j, "ratio");
                put_empty(j, "abs_dev");
                put_empty(j, "envelope");
            }
        } else if (which == "lemma2") {
            put_interval(j, "log10_n", st.log_n / log10);
            HPInterval v = robin::metrics::lemma2_value(st, cfg.band_b, mopts.precision);
            put_interval(j, "value", v);
            double hi = mpfr_get_d(v.hi(), MPFR_RNDU);
            if (!have_running_max || hi > running_max) {
                running_max = hi;
                have_running_max = true;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.15g", running_max);
            j["running_max"] = buf;
        } else if (which == "lemma3") {
            auto [inv_ps, inv_p] = robin::metrics::lemma3_pair(st, mopts.precision);
            std::uint64_t p = st.p_max();
            std::uint64_t a = st.exponent_of(p);
            j["p_max"] = p;
            j["a_p"] = a;
            put_interval(j, "inv_p_sigma", inv_ps);
            put_interval(j, "inv_p", inv_p);
            mpz_class pz(p), sig;
            mpz_pow_ui(sig.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(a + 1));
            sig = (sig - 1) / (pz - 1);
            j["sigma_p_a"] = sig.get_str();
            j["sigma_lower_bound"] = mpz_class(pz + 1).get_str();
        } else if (which == "aek7") {
            j["p_max"] = st.p_max();
            put_interval(j, "log10_n", st.log_n / log10);
            put_interval(j, "ratio", robin::metrics::aek7_ratio(st, mopts.precision));
        } else if (which == "growth") {
            HPInterval ab = HPInterval::from_mpq(
                robin::metrics::abundancy_ratio_exact(step).exact_ratio, mopts.precision);
            if (prev_log_n && robin::num::compare(*prev_log_n, HPInterval::from_int(1)) ==
                                  robin::num::Verdict::Greater) {
                HPInterval loglog = prev_log_n->log() / st.log_n.log();
                HPInterval product = ab * loglog;
                put_interval(j, "abundancy_ratio", ab);
                put_interval(j, "loglog_ratio", loglog);
                put_interval(j, "product", product);
                put_interval(j, "scaled_excess",
                             (product - HPInterval::from_int(1)) * st.log_n);
            } else {
                put_interval(j, "abundancy_ratio", ab);
                put_empty(j, "loglog_ratio");
                put_empty(j, "product");
                put_empty(j, "scaled_excess");
            }
        }
        writer.row(j);
    }
    return writer.good() ? kExitOk : kExitUsage;
}

int cmd_oracle(const RunConfig& cfg) {
    if (cfg.oracle_bound > 100000000ULL) {
        std::cerr << "oracle bound must be <= 1e8\n";
        return kExitUsage;
    }
    auto ca_list = robin::oracle::ca_bruteforce(cfg.oracle_bound);
    robin::oracle::SigmaTable table(cfg.oracle_bound);
    auto sa_list = robin::oracle::superabundant_bruteforce(table, cfg.oracle_bound);

    RowWriter writer(cfg.out, cfg.format == "jsonl", {"list", "index", "value"});
    for (std::size_t i = 0; i < ca_list.size(); ++i) {
        ordered_json j;
        j["list"] = "ca";
        j["index"] = i;
        j["value"] = ca_list[i];
        writer.row(j);
    }
    for (std::size_t i = 0; i < sa_list.size(); ++i) {
        ordered_json j;
        j["list"] = "sa";
        j["index"] = i;
        j["value"] = sa_list[i];
        writer.row(j);
    }

    // Engine prefix must match the oracle CA list exactly.
    CaGenerator::Options opts;
    opts.precision = cfg.precision_bits;
    opts.precision_cap = cfg.precision_cap_bits;
    opts.exact_bound = mpz_class(static_cast<unsigned long>(cfg.oracle_bound));
    CaGenerator gen(opts);
    std::vector<std::uint64_t> engine;
    while (true) {
        gen.next();
        if (!gen.state().exact_value) break;
        engine.push_back(gen.state().exact_value->get_ui());
    }
    for (std::size_t i = 0; i < std::max(engine.size(), ca_list.size()); ++i) {
        if (i >= engine.size() || i >= ca_list.size() || engine[i] != ca_list[i]) {
            std::cerr << "oracle mismatch at index " << i << ": engine="
                      << (i < engine.size() ? std::to_string(engine[i]) : "<none>")
                      << " oracle="
                      << (i < ca_list.size() ? std::to_string(ca_list[i]) : "<none>") << "\n";
            return kExitOracleMismatch;
        }
    }
    writer.comment("engine prefix matches oracle (" + std::to_string(engine.size()) +
                   " values)");
    return writer.good() ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robin-forge: colossally abundant numbers and Robin's inequality"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("ROBIN_FORGE_PRECISION")) {
        cfg.precision_bits = std::atol(env);
    }

    std::string which = "lemma1";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--steps", cfg.steps, "number of CA steps")->check(CLI::PositiveNumber);
        sub->add_option("--precision-bits", cfg.precision_bits, "working precision in bits")
            ->check(CLI::Range(static_cast<long>(16), static_cast<long>(1 << 20)));
        sub->add_option("--precision-cap", cfg.precision_cap_bits,
                        "escalation cap in bits");
        sub->add_option("--b", cfg.band_b, "band exponent b in (0, 1/2)");
        sub->add_option("--c", cfg.band_c, "band constant c > 0");
        sub->add_option("--exact-bound", cfg.exact_mode_bound,
                        "keep n exact while <= this bound");
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"csv", "jsonl"}));
        sub->add_option("--out", cfg.out, "output path, - for stdout");
        sub->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint file to write");
        sub->add_option("--checkpoint-every", cfg.checkpoint_every, "checkpoint interval");
        sub->add_option("--resume", cfg.resume_path, "checkpoint file to resume from");
    };

    CLI::App* gen = app.add_subcommand("generate", "stream CA steps");
    add_common(gen);
    CLI::App* ver = app.add_subcommand("verify", "Robin verification and band margins");
    add_common(ver);
    CLI::App* diag = app.add_subcommand("diagnostics", "lemma/theorem diagnostic series");
    add_common(diag);
    diag->add_option("--which", which, "series to emit")
        ->check(CLI::IsMember({"lemma1", "lemma2", "lemma3", "aek7", "growth"}));
    CLI::App* orc = app.add_subcommand("oracle", "brute-force cross-check");
    add_common(orc);
    orc->add_option("--bound", cfg.oracle_bound, "oracle scan bound");

    CLI11_PARSE(app, argc, argv);

    if (!(cfg.band_b > 0.0 && cfg.band_b < 0.5) || cfg.band_c <= 0.0 ||
        cfg.precision_bits > cfg.precision_cap_bits || cfg.steps < 1) {
        std::cerr << "invalid configuration: require 0 < b < 1/2, c > 0, "
                     "precision <= cap, steps >= 1\n";
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (diag->parsed()) return cmd_diagnostics(cfg, which);
        if (orc->parsed()) return cmd_oracle(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
