// Command-line front end: code inspection, Monte Carlo sweeps, enumerator
// tables and the self-verification suites.
//
// Exit codes: 0 success, 1 usage error, 2 runtime/data error, 3 self-check
// failure.

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dirdec/alist.hpp"
#include "dirdec/code.hpp"
#include "dirdec/decoder.hpp"
#include "dirdec/directional.hpp"
#include "dirdec/enumerator.hpp"
#include "dirdec/selfcheck.hpp"
#include "dirdec/sim.hpp"

namespace {

using namespace dirdec;

struct Options {
    std::size_t toric_L = 0;
    std::string alist_path;
    std::string coords_path;
    std::string field = "orientation:x";
    double p0 = 0.01;
    double beta_chan = 0.0;
    double beta_dec = 0.0;
    std::size_t iters = 30;
    double ms_scale = 0.8;
    std::size_t osd_order = 2;
    std::string rank_rule = "llr-then-directional";
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::size_t workers = 0;
    std::string out;
    std::vector<double> p0_list;
    std::vector<double> beta_list;
    std::string syndrome_bits;
    double tail_t = 0.0;
    std::size_t distance_cap = 20;
};

CssCode load_code(const Options& opt) {
    if (opt.toric_L > 0 && !opt.alist_path.empty())
        throw std::runtime_error("give either --toric or --alist, not both");
    if (opt.toric_L > 0) return toric(opt.toric_L);
    if (opt.alist_path.empty()) throw std::runtime_error("no code given; use --toric L or --alist PATH");

    // --alist HX.alist,HZ.alist loads a CSS pair; a single path loads a
    // one-sided code with the matrix on the Z side.
    const auto comma = opt.alist_path.find(',');
    BinaryMatrix h_x, h_z;
    std::string stem;
    if (comma == std::string::npos) {
        h_z = load_alist(opt.alist_path);
        h_x = BinaryMatrix(0, h_z.cols());
        stem = opt.alist_path;
    } else {
        h_x = load_alist(opt.alist_path.substr(0, comma));
        h_z = load_alist(opt.alist_path.substr(comma + 1));
        stem = opt.alist_path.substr(0, comma);
    }
    const auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    const auto dot = stem.rfind(".alist");
    if (dot != std::string::npos) stem = stem.substr(0, dot);

    std::optional<std::vector<std::pair<int, int>>> coords;
    if (!opt.coords_path.empty()) coords = load_coords(opt.coords_path, h_z.cols());
    return new_css(std::move(h_x), std::move(h_z), std::move(coords), stem);
}

QubitWeights build_field(const CssCode& code, const std::string& spec) {
    if (spec == "orientation:x") return orientation_field(code, Axis::X);
    if (spec == "orientation:y") return orientation_field(code, Axis::Y);
    if (spec.rfind("strip:", 0) == 0) {
        const std::string rest = spec.substr(6);
        const auto colon = rest.rfind(':');
        if (colon == std::string::npos)
            throw std::runtime_error("field: strip spec needs strip:COLS:W0");
        std::set<int> cols;
        std::istringstream cs(rest.substr(0, colon));
        std::string tok;
        while (std::getline(cs, tok, ','))
            if (!tok.empty()) cols.insert(std::stoi(tok));
        const double w0 = std::stod(rest.substr(colon + 1));
        return strip_field(code, cols, w0);
    }
    if (spec.rfind("radial:", 0) == 0) {
        const std::string rest = spec.substr(7);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("field: radial spec needs radial:CX,CY");
        return radial_field(code, {std::stod(rest.substr(0, comma)),
                                   std::stod(rest.substr(comma + 1))});
    }
    if (spec.rfind("file:", 0) == 0) return load_weights(spec.substr(5), code.n);
    throw std::runtime_error("field: unknown spec '" + spec + "'");
}

RankRule parse_rank_rule(const std::string& s) {
    if (s == "llr-cost") return RankRule::LlrCost;
    if (s == "llr-then-directional") return RankRule::LlrThenDirectional;
    throw std::runtime_error("rank-rule must be llr-cost or llr-then-directional");
}

DecoderConfig make_config(const Options& opt, QubitWeights w) {
    DecoderConfig cfg;
    cfg.bp_iters = opt.iters;
    cfg.ms_scale = opt.ms_scale;
    cfg.osd_order = opt.osd_order;
    cfg.rank_rule = parse_rank_rule(opt.rank_rule);
    cfg.w = std::move(w);
    return cfg;
}

void add_code_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--toric", opt.toric_L, "builtin toric code with lattice size L");
    cmd->add_option("--alist", opt.alist_path,
                    "alist path; HX.alist,HZ.alist for a CSS pair, one path for a single-sided code");
    cmd->add_option("--coords", opt.coords_path, "coordinate sidecar: one 'x y' pair per line");
}

void add_field_flag(CLI::App* cmd, Options& opt) {
    cmd->add_option("--field", opt.field,
                    "weight field: orientation:x|orientation:y|strip:COLS:W0|radial:CX,CY|file:PATH")
        ->capture_default_str();
}

void add_decoder_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--iters", opt.iters, "BP iterations")->capture_default_str();
    cmd->add_option("--ms-scale", opt.ms_scale, "min-sum normalization factor")->capture_default_str();
    cmd->add_option("--osd-order", opt.osd_order, "OSD flip-pattern order")->capture_default_str();
    cmd->add_option("--rank-rule", opt.rank_rule, "candidate ranking: llr-cost|llr-then-directional")
        ->capture_default_str();
}

void add_sim_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--p0", opt.p0, "target average physical error rate")->capture_default_str();
    cmd->add_option("--beta-chan", opt.beta_chan, "channel tilt strength")->capture_default_str();
    cmd->add_option("--beta-dec", opt.beta_dec, "decoder prior tilt strength")->capture_default_str();
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials per grid point")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "master seed")->capture_default_str();
    cmd->add_option("--workers", opt.workers, "worker threads (0 = hardware)")->capture_default_str();
    cmd->add_option("--out", opt.out, "output CSV path (default: stdout)");
}

// trial counter on stderr while a sweep runs
class ProgressReporter {
  public:
    ProgressReporter(std::atomic<std::uint64_t>& counter, std::uint64_t total)
        : counter_(counter), total_(total), enabled_(isatty(2)) {
        if (enabled_) thread_ = std::thread([this] { loop(); });
    }
    ~ProgressReporter() {
        done_.store(true);
        if (thread_.joinable()) thread_.join();
        if (enabled_) std::fprintf(stderr, "\r%llu/%llu trials\n",
                                   static_cast<unsigned long long>(counter_.load()),
                                   static_cast<unsigned long long>(total_));
    }

  private:
    void loop() {
        while (!done_.load()) {
            std::fprintf(stderr, "\r%llu/%llu trials",
                         static_cast<unsigned long long>(counter_.load()),
                         static_cast<unsigned long long>(total_));
            std::fflush(stderr);
            std::this_thread::sleep_for(std::chrono::milliseconds(500));
        }
    }
    std::atomic<std::uint64_t>& counter_;
    std::uint64_t total_;
    bool enabled_;
    std::atomic<bool> done_{false};
    std::thread thread_;
};

int emit_sweep(const Options& opt, const std::vector<SweepPoint>& grid) {
    const CssCode code = load_code(opt);
    const QubitWeights w = build_field(code, opt.field);
    const DecoderConfig cfg = make_config(opt, w);

    for (const SweepPoint& pt : grid) {
        for (double beta : {pt.beta_chan, pt.beta_dec}) {
            const PriorModel probe = tilt_priors(w, pt.p0 > 0.0 ? pt.p0 : kPriorFloor, beta);
            if (probe.clamped_count > 0)
                std::fprintf(stderr,
                             "note: p0=%g beta=%g clamps %zu site probabilities into [%g, %g]; "
                             "the average rate is no longer exactly p0\n",
                             pt.p0, beta, probe.clamped_count, kPriorFloor, kPriorCeil);
        }
    }

    std::atomic<std::uint64_t> counter{0};
    ProgressReporter progress(counter, opt.trials * grid.size());
    if (!opt.out.empty()) {
        sweep(code, grid, cfg, opt.trials, opt.seed, opt.out, opt.workers, &counter);
        return 0;
    }
    std::cout << kSweepCsvHeader << '\n';
    for (const SweepPoint& pt : grid) {
        const ChannelModel channel = make_channel(cfg.w, pt.p0, pt.beta_chan);
        const SimResult res =
            monte_carlo(code, channel, pt.beta_dec, cfg, opt.trials, opt.seed, opt.workers, &counter);
        std::cout << sweep_csv_row(code, pt, res) << '\n';
    }
    return 0;
}

int cmd_code_info(const Options& opt) {
    const CssCode code = load_code(opt);
    std::cout << "name: " << code.name << '\n';
    std::cout << "n: " << code.n << '\n' << "k: " << code.k << '\n';
    std::cout << "rank(H_X): " << rank(code.h_x) << '\n';
    std::cout << "rank(H_Z): " << rank(code.h_z) << '\n';
    std::cout << "commutation: ok\n";  // construction validates H_X H_Z^T = 0
    std::cout << "rate: " << code.rate() << '\n';
    if (code.n <= opt.distance_cap) {
        const CodeDistances dist = distances(code, opt.distance_cap);
        std::cout << "d: " << dist.d << '\n';
        std::cout << "d_x: " << dist.d_x << '\n' << "d_z: " << dist.d_z << '\n';
        std::cout << "d_s: " << dist.d_s << '\n';
    } else {
        std::cout << "d: skipped (n > " << opt.distance_cap << ")\n";
    }
    return 0;
}

int cmd_sim(const Options& opt) {
    return emit_sweep(opt, {{opt.p0, opt.beta_chan, opt.beta_dec}});
}

int cmd_sweep_p(const Options& opt) {
    if (opt.p0_list.empty()) throw std::runtime_error("sweep-p: --p0-list is required");
    std::vector<SweepPoint> grid;
    for (double p : opt.p0_list) grid.push_back({p, opt.beta_chan, opt.beta_dec});
    return emit_sweep(opt, grid);
}

int cmd_sweep_beta(const Options& opt) {
    if (opt.beta_list.empty()) throw std::runtime_error("sweep-beta: --beta-list is required");
    std::vector<SweepPoint> grid;
    for (double b : opt.beta_list) grid.push_back({opt.p0, opt.beta_chan, b});
    return emit_sweep(opt, grid);
}

int cmd_enumerate(const Options& opt) {
    const CssCode code = load_code(opt);
    const QubitWeights w = build_field(code, opt.field);

    BitVector s(code.h_z.rows());
    if (!opt.syndrome_bits.empty()) {
        if (opt.syndrome_bits.size() != code.h_z.rows())
            throw std::runtime_error("enumerate: --syndrome needs " +
                                     std::to_string(code.h_z.rows()) + " bits");
        for (std::size_t i = 0; i < opt.syndrome_bits.size(); ++i) {
            if (opt.syndrome_bits[i] == '1')
                s.set(i, true);
            else if (opt.syndrome_bits[i] != '0')
                throw std::runtime_error("enumerate: --syndrome must be a 0/1 string");
        }
    }
    std::vector<double> betas = opt.beta_list;
    if (betas.empty()) betas = {0.0, 0.5, 1.0, 2.0};

    const ClassScoreTable table = class_score_table(code, s, w);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out);
        if (!file) throw std::runtime_error("enumerate: cannot write " + opt.out);
        os = &file;
    }
    const auto fmt = [](double v) { return detail::shortest_double(v); };
    *os << "beta,gamma,mean_score,var_score,tail_t,tail_count\n";
    for (double beta : betas) {
        const EnumeratorReport rep = directional_enumerator(table, beta);
        *os << fmt(beta) << ',' << fmt(rep.value) << ',' << fmt(rep.mean_score) << ','
            << fmt(rep.var_score) << ',' << fmt(opt.tail_t) << ','
            << tail_count(table, opt.tail_t) << '\n';
    }
    return 0;
}

int cmd_verify() {
    const std::vector<SuiteResult> results = run_selfchecks();
    std::size_t bad = 0;
    for (const SuiteResult& r : results) {
        std::printf("%-42s %6zu cases  %s\n", r.name.c_str(), r.cases,
                    r.passed() ? "PASS" : "FAIL");
        if (!r.passed()) {
            ++bad;
            std::printf("  -> %zu failing cases %s\n", r.failures, r.note.c_str());
        }
    }
    std::printf("%zu/%zu suites passed\n", results.size() - bad, results.size());
    return selfcheck_exit_code(results);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"directional decoding toolkit for CSS codes"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* info = app.add_subcommand("code-info", "print code parameters and small-code distances");
    add_code_flags(info, opt);
    info->add_option("--distance-cap", opt.distance_cap, "qubit cap for exhaustive distances")
        ->capture_default_str();

    CLI::App* sim_cmd = app.add_subcommand("sim", "single Monte Carlo point, CSV output");
    add_code_flags(sim_cmd, opt);
    add_field_flag(sim_cmd, opt);
    add_decoder_flags(sim_cmd, opt);
    add_sim_flags(sim_cmd, opt);

    CLI::App* sweep_p = app.add_subcommand("sweep-p", "sweep the physical error rate");
    add_code_flags(sweep_p, opt);
    add_field_flag(sweep_p, opt);
    add_decoder_flags(sweep_p, opt);
    add_sim_flags(sweep_p, opt);
    sweep_p->add_option("--p0-list", opt.p0_list, "physical error rates")->delimiter(',');

    CLI::App* sweep_b = app.add_subcommand("sweep-beta", "sweep the decoder tilt strength");
    add_code_flags(sweep_b, opt);
    add_field_flag(sweep_b, opt);
    add_decoder_flags(sweep_b, opt);
    add_sim_flags(sweep_b, opt);
    sweep_b->add_option("--beta-list", opt.beta_list, "decoder tilt strengths")->delimiter(',');

    CLI::App* enum_cmd = app.add_subcommand("enumerate", "class-score enumerator table, CSV output");
    add_code_flags(enum_cmd, opt);
    add_field_flag(enum_cmd, opt);
    enum_cmd->add_option("--beta-list", opt.beta_list, "bias grid (default 0,0.5,1,2)")->delimiter(',');
    enum_cmd->add_option("--syndrome", opt.syndrome_bits, "syndrome bit string (default: zero)");
    enum_cmd->add_option("--tail-t", opt.tail_t, "score threshold for the tail count")
        ->capture_default_str();
    enum_cmd->add_option("--out", opt.out, "output CSV path (default: stdout)");

    app.add_subcommand("verify", "run the identity and bound self-check suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (info->parsed()) return cmd_code_info(opt);
        if (sim_cmd->parsed()) return cmd_sim(opt);
        if (sweep_p->parsed()) return cmd_sweep_p(opt);
        if (sweep_b->parsed()) return cmd_sweep_beta(opt);
        if (enum_cmd->parsed()) return cmd_enumerate(opt);
        return cmd_verify();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
