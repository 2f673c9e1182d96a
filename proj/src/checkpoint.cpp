#include "robin/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace robin::checkpoint {

namespace {

std::string mpfr_hex(mpfr_srcptr x) {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", x);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

void parse_mpfr(mpfr_ptr x, const std::string& s) {
    if (mpfr_set_str(x, s.c_str(), 0, MPFR_RNDN) != 0) {
        throw std::runtime_error("malformed MPFR literal in checkpoint: " + s);
    }
}

std::string expect_key(std::istream& in, const std::string& key) {
    std::string k, v;
    if (!(in >> k) || k != key || !(in >> v)) {
        throw std::runtime_error("checkpoint parse error at key '" + key + "'");
    }
    return v;
}

}  // namespace

void save(const std::string& path, const ca::CaGenerator& gen) {
    const ca::FactoredCA& st = gen.state();
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint file for writing: " + path);

    out << "# robin-forge v1 checkpoint\n";
    out << "step_index " << st.step_index << "\n";
    out << "precision " << gen.options().precision << "\n";
    out << "prime_count " << st.primes.size() << "\n";
    out << "run_count " << st.runs.size() << "\n";
    for (const auto& run : st.runs) out << "run " << run.exponent << " " << run.count << "\n";
    out << "log_n_lo " << mpfr_hex(st.log_n.lo()) << "\n";
    out << "log_n_hi " << mpfr_hex(st.log_n.hi()) << "\n";
    out << "log_n_prec " << st.log_n.precision() << "\n";
    out << "log_ab_lo " << mpfr_hex(st.log_abundancy.lo()) << "\n";
    out << "log_ab_hi " << mpfr_hex(st.log_abundancy.hi()) << "\n";
    out << "log_ab_prec " << st.log_abundancy.precision() << "\n";
    auto queue = gen.queue_snapshot();
    out << "queue_count " << queue.size() << "\n";
    for (const auto& [p, a] : queue) out << "queue " << p << " " << a << "\n";
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
    std::string header;
    std::getline(in, header);
    if (header != "# robin-forge v1 checkpoint") {
        throw std::runtime_error("unrecognized checkpoint header: " + header);
    }

    Checkpoint cp;
    cp.state.step_index = std::stoull(expect_key(in, "step_index"));
    cp.precision = static_cast<mpfr_prec_t>(std::stol(expect_key(in, "precision")));
    std::size_t prime_count = std::stoull(expect_key(in, "prime_count"));
    std::size_t run_count = std::stoull(expect_key(in, "run_count"));
    for (std::size_t i = 0; i < run_count; ++i) {
        std::uint64_t exp = std::stoull(expect_key(in, "run"));
        std::uint64_t cnt;
        if (!(in >> cnt)) throw std::runtime_error("checkpoint parse error in run entry");
        cp.state.runs.push_back({exp, cnt});
    }

    // The support is always the initial segment of the primes.
    primes::PrimeStream stream;
    for (std::size_t i = 0; i < prime_count; ++i) cp.state.primes.push_back(stream.next_prime());

    std::string lo_s = expect_key(in, "log_n_lo");
    std::string hi_s = expect_key(in, "log_n_hi");
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::stol(expect_key(in, "log_n_prec")));
    {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        parse_mpfr(lo, lo_s);
        parse_mpfr(hi, hi_s);
        cp.state.log_n = num::HPInterval::from_endpoints(lo, hi, prec);
        mpfr_clear(lo);
        mpfr_clear(hi);
    }
    lo_s = expect_key(in, "log_ab_lo");
    hi_s = expect_key(in, "log_ab_hi");
    prec = static_cast<mpfr_prec_t>(std::stol(expect_key(in, "log_ab_prec")));
    {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec);
        mpfr_init2(hi, prec);
        parse_mpfr(lo, lo_s);
        parse_mpfr(hi, hi_s);
        cp.state.log_abundancy = num::HPInterval::from_endpoints(lo, hi, prec);
        mpfr_clear(lo);
        mpfr_clear(hi);
    }

    std::size_t queue_count = std::stoull(expect_key(in, "queue_count"));
    for (std::size_t i = 0; i < queue_count; ++i) {
        std::uint64_t p = std::stoull(expect_key(in, "queue"));
        std::uint64_t a;
        if (!(in >> a)) throw std::runtime_error("checkpoint parse error in queue entry");
        cp.queue.emplace_back(p, a);
    }
    if (!cp.state.invariants_hold()) throw std::runtime_error("checkpoint state invariants violated");
    return cp;
}

void restore_exact_value(ca::FactoredCA& state, const mpz_class& bound) {
    mpz_class value = 1;
    std::size_t idx = 0;
    for (const auto& run : state.runs) {
        for (std::uint64_t i = 0; i < run.count; ++i, ++idx) {
            mpz_class pw;
            mpz_class p(state.primes[idx]);
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(run.exponent));
            value *= pw;
            if (value > bound) {
                state.exact_value.reset();
                return;
            }
        }
    }
    state.exact_value = value;
}

}  // namespace robin::checkpoint
