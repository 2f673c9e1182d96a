// Acceptance gate: one pass/fail line per criterion, all checked in one
// binary so the suite's exit status certifies the whole contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "robin/ca_engine.hpp"
#include "robin/metrics.hpp"
#include "robin/oracle.hpp"

using robin::ca::CaGenerator;
using robin::ca::CAStep;
using robin::ca::FactoredCA;
using robin::num::compare;
using robin::num::HPInterval;
using robin::num::Verdict;
namespace metrics = robin::metrics;

namespace {

void report(int criterion, bool ok, const std::string& what) {
    std::printf("criterion %2d: %s  (%s)\n", criterion, ok ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
}

// Results of the single shared 10^5-step survey, gathered once.
struct Survey {
    static constexpr std::uint64_t kSteps = 100000;

    bool quotient_law_ok = true;        // criterion 2
    bool robin_all_satisfy = true;      // criterion 4
    std::uint64_t undecided = 0;        // criterion 4
    bool decomposition_ok = true;       // criterion 5
    bool lemma1_envelope_ok = true;     // criterion 6
    double lemma1_final_dev = 1.0;      // criterion 6, at step 10^4
    bool lemma2_ok = true;              // criterion 7
    bool lemma3_ok = true;              // criterion 7
    bool aek7_range_ok = true;          // criterion 8
    double aek7_final_decade_mean = 0;  // criterion 8
    bool excess_negative_ok = true;     // criterion 9
    bool band_agreement_ok = true;      // criterion 9
};

const Survey& survey() {
    static Survey s = [] {
        Survey out;
        CaGenerator gen;
        metrics::Options mopts;
        HPInterval one = HPInterval::from_int(1);

        std::optional<HPInterval> prev_log_n;
        std::optional<HPInterval> prev_g;
        double lemma2_running_max = 0.0;
        std::vector<double> lemma2_at_checkpoints;
        std::uint64_t next_checkpoint = 1;
        double aek7_sum = 0.0;
        std::uint64_t aek7_count = 0;

        for (std::uint64_t i = 0; i < Survey::kSteps; ++i) {
            CAStep step = gen.next();
            const FactoredCA& st = gen.state();

            // Criterion 2: quotient is one prime or two distinct primes.
            if (!robin::ca::verify_step(step)) out.quotient_law_ok = false;
            if (step.tie &&
                (step.quotient.size() != 2 || step.quotient[0].p == step.quotient[1].p)) {
                out.quotient_law_ok = false;
            }

            // Criterion 4: certified Robin verdicts.
            auto verdict = metrics::robin_check(st, mopts);
            if (verdict.kind == metrics::RobinKind::Undecided) ++out.undecided;
            bool past_boundary = verdict.kind != metrics::RobinKind::Boundary;
            if (past_boundary && verdict.kind != metrics::RobinKind::Satisfies) {
                out.robin_all_satisfy = false;
            }

            double log_n = st.log_n.mid_double();

            // Criterion 6: lemma 1 ratio against its envelope. The deviation
            // exceeds the first-order term ln Q/(log n log log n) by a factor
            // 1 + x/2 + O(x^2), x = ln Q/log n, so two checks are made: the
            // rigorous second-order bound always holds (with 1% slack for the
            // midpoint evaluation), and the first-order overshoot stays below
            // the frozen empirical constant 1.03 (measured sup: 1.0235 at the
            // first step past log n = 100).
            if (prev_log_n && compare(*prev_log_n, one) == Verdict::Greater) {
                HPInterval ratio = prev_log_n->log() / st.log_n.log();
                double dev = std::abs(1.0 - ratio.mid_double());
                HPInterval ln_q = st.log_n - *prev_log_n;
                double envelope = (ln_q / (st.log_n * st.log_n.log())).mid_double();
                HPInterval x = ln_q / st.log_n;
                double rigorous =
                    ((x + x * x / (HPInterval::from_int(2) * (one - x))) / st.log_n.log())
                        .mid_double();
                if (log_n > 100.0 &&
                    (dev > rigorous * 1.01 || dev > envelope * 1.03)) {
                    out.lemma1_envelope_ok = false;
                }
                if (step.step_index == 10000) out.lemma1_final_dev = dev;

                // Criterion 5: decomposition product intersects G(n)/G(m).
                if (prev_g && verdict.g) {
                    HPInterval ab = HPInterval::from_mpq(
                        metrics::abundancy_ratio_exact(step).exact_ratio);
                    HPInterval product = ab * ratio;
                    HPInterval direct = *verdict.g / *prev_g;
                    if (!product.intersects(direct)) out.decomposition_ok = false;
                }
            }

            // Criterion 7: lemma 2 running max at log-spaced checkpoints,
            // lemma 3 exact component identity.
            double l2 = metrics::lemma2_value(st, 0.25).mid_double();
            if (l2 > lemma2_running_max) lemma2_running_max = l2;
            if (step.step_index == next_checkpoint) {
                lemma2_at_checkpoints.push_back(lemma2_running_max);
                next_checkpoint += std::max<std::uint64_t>(1, next_checkpoint / 10);

                std::uint64_t p = st.p_max();
                std::uint64_t a = st.exponent_of(p);
                mpz_class pz(p), sig;
                mpz_pow_ui(sig.get_mpz_t(), pz.get_mpz_t(),
                           static_cast<unsigned long>(a + 1));
                sig = (sig - 1) / (pz - 1);
                // (1/(p sigma)) / (1/p) = 1/sigma(p^a) <= 1/(1+p), exactly.
                auto [inv_ps, inv_p] = metrics::lemma3_pair(st);
                if (!(inv_ps * HPInterval::from_ui(p)).contains(mpq_class(1) / mpq_class(sig)) ||
                    sig < pz + 1) {
                    out.lemma3_ok = false;
                }
                if (compare(inv_ps, inv_p) != Verdict::Less) out.lemma3_ok = false;
            }

            // Criterion 8: p_max / log n.
            double aek7 = static_cast<double>(st.p_max()) / log_n;
            if (log_n > 50.0 && (aek7 <= 0.5 || aek7 >= 1.5)) out.aek7_range_ok = false;
            if (step.step_index > Survey::kSteps - Survey::kSteps / 10) {
                aek7_sum += aek7;
                ++aek7_count;
            }

            // Criterion 9: normalized excess and band classification.
            if (past_boundary && verdict.g) {
                HPInterval eg = robin::num::exp_gamma();
                HPInterval quarter = HPInterval::from_double(0.25);
                HPInterval excess = (*verdict.g / eg - one) * st.log_n.pow(quarter);
                if (!excess.is_negative()) out.excess_negative_ok = false;

                metrics::BandClass got = metrics::classify_band(*verdict.g, st.log_n, 0.25, 1.0);
                metrics::BandClass want;
                Verdict lower = compare(*verdict.g, eg);
                if (lower == Verdict::Less) {
                    want = metrics::BandClass::Below;
                } else if (lower == Verdict::Overlap) {
                    want = metrics::BandClass::Undecided;
                } else {
                    HPInterval top = eg * (one + one / st.log_n.pow(quarter));
                    Verdict upper = compare(*verdict.g, top);
                    want = upper == Verdict::Less    ? metrics::BandClass::InBand
                           : upper == Verdict::Greater ? metrics::BandClass::Above
                                                       : metrics::BandClass::Undecided;
                }
                if (got != want) out.band_agreement_ok = false;
            }

            prev_log_n = st.log_n;
            prev_g = verdict.g;
        }

        for (std::size_t i = 2; i < lemma2_at_checkpoints.size(); ++i) {
            if (lemma2_at_checkpoints[i] > lemma2_at_checkpoints[i - 1] + 1e-15) {
                out.lemma2_ok = false;
            }
        }
        out.aek7_final_decade_mean = aek7_sum / static_cast<double>(aek7_count);
        return out;
    }();
    return s;
}

std::string cli_binary() {
    const char* env = std::getenv("ROBIN_FORGE_BIN");
    return env != nullptr ? env : "./robin-forge";
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& out_path) {
    std::string cmd = cli_binary() + " " + args + " > " + out_path + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("criterion 1: oracle equivalence up to 10^7") {
    auto t0 = std::chrono::steady_clock::now();
    auto oracle = robin::oracle::ca_bruteforce(10000000);

    CaGenerator::Options opts;
    opts.exact_bound = 10000000;
    CaGenerator gen(opts);
    std::vector<std::uint64_t> engine;
    while (true) {
        gen.next();
        if (!gen.state().exact_value) break;
        engine.push_back(gen.state().exact_value->get_ui());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ok = engine == oracle && engine.size() == 12 && engine.back() == 4324320 &&
              secs < 60.0;
    report(1, ok,
           std::to_string(engine.size()) + " CA numbers <= 10^7, brute force agrees, " +
               std::to_string(secs) + " s");
    CHECK(engine == oracle);
    CHECK(engine.size() == 12);
    CHECK(engine.back() == 4324320);
    CHECK(secs < 60.0);
}

TEST_CASE("criterion 2: quotient law over 10^5 steps") {
    bool ok = survey().quotient_law_ok;
    report(2, ok, "every step quotient is a prime or two distinct primes");
    CHECK(ok);
}

TEST_CASE("criterion 3: abundancy ratio laws, exact then interval") {
    CaGenerator gen;
    FactoredCA prev = gen.state();
    bool all_ok = true;
    bool fixture_31_30 = false;
    bool fixture_12_11 = false;
    for (int i = 0; i < 2000; ++i) {
        CAStep step = gen.next();
        if (!metrics::verify_lemma45(step, prev, gen.state())) all_ok = false;
        auto rc = metrics::abundancy_ratio_exact(step);
        if (prev.exact_value && *prev.exact_value == 2520 &&
            rc.exact_ratio == mpq_class(31, 30)) {
            fixture_31_30 = true;
        }
        if (prev.exact_value && *prev.exact_value == 5040 &&
            rc.exact_ratio == mpq_class(12, 11)) {
            fixture_12_11 = true;
        }
        prev = gen.state();
    }
    bool ok = all_ok && fixture_31_30 && fixture_12_11;
    report(3, ok, "rational equality in exact mode, interval containment beyond");
    CHECK(all_ok);
    CHECK(fixture_31_30);
    CHECK(fixture_12_11);
}

TEST_CASE("criterion 4: certified Robin verdicts and G(5040)") {
    CaGenerator gen;
    for (int i = 0; i < 8; ++i) gen.next();
    REQUIRE(gen.state().exact_value->get_ui() == 5040);
    HPInterval g = metrics::g_value(gen.state(), 256);

    // Independent identity: G(5040) * ln(log 5040) = 19344/5040 = 403/105.
    bool identity_ok =
        (g * robin::ca::recompute_logs(gen.state(), 256).first.log()).contains(
            mpq_class(403, 105));
    bool width_ok = g.width_upper() < 1e-20;
    // True value 1.79097336653488113...; the coarser published rounding
    // 1.79097 / "1.790977" agrees to 5 decimals.
    bool value_ok = std::abs(g.mid_double() - 1.7909733665348811) < 1e-14 &&
                    std::abs(g.mid_double() - 1.790977) < 1e-5;
    bool greater_ok = compare(g, robin::num::exp_gamma(256)) == Verdict::Greater;
    bool run_ok = survey().robin_all_satisfy && survey().undecided == 0;

    bool ok = identity_ok && width_ok && value_ok && greater_ok && run_ok;
    report(4, ok, "all n > 5040 certified Satisfies, 0 undecided; G(5040) pinned to 1e-20");
    CHECK(identity_ok);
    CHECK(width_ok);
    CHECK(value_ok);
    CHECK(greater_ok);
    CHECK(run_ok);
}

TEST_CASE("criterion 5: growth decomposition identity") {
    CaGenerator gen;
    for (int i = 0; i < 8; ++i) gen.next();
    FactoredCA m = gen.state();
    CAStep step = gen.next();
    auto d = metrics::growth_decomposition(m, gen.state(), step);
    // Exact product 12/11 * lnln(5040)/lnln(55440) = 0.97781829010430839...
    bool fixture_ok = std::abs(d.product.mid_double() - 0.9778182901043084) < 1e-14 &&
                      std::abs(d.product.mid_double() - 0.977817) < 2e-6;
    bool ok = fixture_ok && survey().decomposition_ok;
    report(5, ok, "product intersects G(n)/G(m) on all steps; 5040->55440 = 0.977818");
    CHECK(fixture_ok);
    CHECK(survey().decomposition_ok);
}

TEST_CASE("criterion 6: lemma 1 envelope and terminal decay") {
    bool envelope_ok = survey().lemma1_envelope_ok;
    double final_dev = survey().lemma1_final_dev;
    bool final_ok = final_dev < 1e-5;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", final_dev);
    report(6, envelope_ok && final_ok,
           std::string("|ratio-1| within certified envelope; at step 10^4 dev = ") + buf);
    CHECK(envelope_ok);
    CHECK(final_ok);
}

TEST_CASE("criterion 7: lemma 2 decay and lemma 3 identity") {
    bool ok = survey().lemma2_ok && survey().lemma3_ok;
    report(7, ok, "running max stabilizes after first checkpoint; 1/sigma(p^a) <= 1/(1+p)");
    CHECK(survey().lemma2_ok);
    CHECK(survey().lemma3_ok);
}

TEST_CASE("criterion 8: p_max tracks log n") {
    double mean = survey().aek7_final_decade_mean;
    bool range_ok = survey().aek7_range_ok;
    bool mean_ok = mean > 0.9 && mean < 1.1;
    report(8, range_ok && mean_ok,
           "ratio in (0.5, 1.5) for log n > 50; final-decade mean = " + std::to_string(mean));
    CHECK(range_ok);
    CHECK(mean_ok);
}

TEST_CASE("criterion 9: band reporting") {
    // Synthetic in-band fixture: G strictly between e^gamma and the band top.
    HPInterval log_n = HPInterval::from_int(100);
    bool synth_ok =
        metrics::classify_band(HPInterval::from_double(1.9), log_n, 0.25, 1.0) ==
            metrics::BandClass::InBand &&
        metrics::classify_band(HPInterval::from_double(1.5), log_n, 0.25, 1.0) ==
            metrics::BandClass::Below &&
        metrics::classify_band(HPInterval::from_double(2.5), log_n, 0.25, 1.0) ==
            metrics::BandClass::Above;
    bool ok = survey().excess_negative_ok && survey().band_agreement_ok && synth_ok;
    report(9, ok, "normalized excess negative throughout; classification agrees");
    CHECK(survey().excess_negative_ok);
    CHECK(survey().band_agreement_ok);
    CHECK(synth_ok);
}

TEST_CASE("criterion 10: determinism and resume via the CLI") {
    std::string base = "/tmp/robin_forge_acceptance_" + std::to_string(getpid());
    bool rc_ok = run_cli("generate --steps 10000", base + "_a") == 0 &&
                 run_cli("generate --steps 10000", base + "_b") == 0;
    bool identical = slurp(base + "_a") == slurp(base + "_b");

    bool resume_rc_ok =
        run_cli("generate --steps 5000 --checkpoint " + base + "_cp --checkpoint-every 5000",
                base + "_head") == 0 &&
        run_cli("generate --steps 10000 --resume " + base + "_cp", base + "_tail") == 0;
    // Rows 5001..10000 of the uninterrupted run vs the resumed run.
    std::istringstream full(slurp(base + "_a"));
    std::vector<std::string> full_rows, tail_rows;
    std::string line;
    while (std::getline(full, line)) full_rows.push_back(line);
    std::istringstream tail(slurp(base + "_tail"));
    while (std::getline(tail, line)) tail_rows.push_back(line);
    bool tail_ok = full_rows.size() == 10002 && tail_rows.size() == 5002;
    if (tail_ok) {
        for (std::size_t i = 0; i < 5000; ++i) {
            if (tail_rows[i + 2] != full_rows[i + 5002]) tail_ok = false;
        }
    }

    bool ok = rc_ok && identical && resume_rc_ok && tail_ok;
    report(10, ok, "byte-identical reruns; checkpoint resume reproduces the tail");
    CHECK(rc_ok);
    CHECK(identical);
    CHECK(resume_rc_ok);
    CHECK(tail_ok);
}
