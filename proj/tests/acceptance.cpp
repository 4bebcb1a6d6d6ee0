// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "treerep/analytic.hpp"
#include "treerep/montecarlo.hpp"
#include "treerep/optimizer.hpp"
#include "treerep/oracle.hpp"
#include "treerep/timing.hpp"
#include "treerep/twoway.hpp"

using namespace treerep;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        detail << (ok ? "" : "!") << what << "; ";
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

long long stations_for_spacing(double L, double L0) { return static_cast<long long>(std::ceil(L / L0 - 1e-9)) - 1; }

bool within_ulp(double a, double b) { return a == b || std::nextafter(a, b) == b; }

void headline_rate(Outcome& o) {
    RepeaterParams p;
    const long long m = stations_for_spacing(1000, 2.6);
    const double fast = cost_parameter(p, {4, 14, 4}, m, 1000).secret_rate;
    p.timing.tau_cz = 100e-9;
    const double slow = cost_parameter(p, {4, 14, 4}, m, 1000).secret_rate;
    o.require(m == 384, "m=" + std::to_string(m));
    o.require(fast >= 56e3 && fast <= 84e3, "r_s(10ns)=" + fmt("%.2f", fast / 1e3) + " kHz in [56,84]");
    o.require(slow >= 10.4e3 && slow <= 15.6e3, "r_s(100ns)=" + fmt("%.2f", slow / 1e3) + " kHz in [10.4,15.6]");
}

void timing_goldens(Outcome& o) {
    TimingParams p;
    const BranchingVector t{4, 14, 4};
    o.require(within_ulp(branch_time(t, p), 340e-9), "tau_branch=" + fmt("%.12g", branch_time(t, p) * 1e9) + " ns");
    o.require(within_ulp(delay_line_length(t, p), 68.0), "l_del=" + fmt("%.12g", delay_line_length(t, p)) + " m");
    p.tau_cz = 100e-9;
    o.require(within_ulp(branch_time(t, p), 1870e-9), "tau_branch=" + fmt("%.12g", branch_time(t, p) * 1e9) + " ns");
    o.require(within_ulp(delay_line_length(t, p), 374.0), "l_del=" + fmt("%.12g", delay_line_length(t, p)) + " m");
}

void oracle_equivalence(Outcome& o) {
    double worst = 0;
    int trees = 0;
    for (const auto& t : enumerate_trees(11, 10)) {
        const LossEnumeration en = enumerate_loss_patterns(t);
        for (double mu : {0.05, 0.1, 0.25, 0.5, 0.9}) {
            worst = std::max(worst, std::abs(static_cast<double>(en.probability(mu)) - encoded_transmission(t, mu)));
        }
        ++trees;
    }
    o.require(worst <= 1e-12, std::to_string(trees) + " trees, max |diff|=" + fmt("%.2g", worst));
}

void quantum_round_trip(Outcome& o) {
    const BranchingVector t{2, 2};
    const PureState state = build_tree_state(t);
    const PureState ref = branch_product_22();
    const std::complex<double> overlap = ref.amplitudes().dot(state.amplitudes());
    const double dev = (state.amplitudes() - ref.amplitudes() * (overlap / std::abs(overlap))).cwiseAbs().maxCoeff();
    o.require(dev < 1e-10, "state deviation " + fmt("%.2g", dev));

    const std::complex<double> alpha = std::cos(0.7);
    const std::complex<double> beta = std::polar(std::sin(0.7), -0.9);
    double min_fid = 1;
    int patterns = 0, runs = 0;
    bool two_loss_case = false;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
        const LossPattern loss = LossPattern::from_mask(t, mask);
        if (!quantum_recoverable(t, loss)) continue;
        ++patterns;
        // A first-level photon lost together with one of its children.
        two_loss_case = two_loss_case || mask == 0b101;
        for (int x1 : {1, -1}) {
            for (int x2 : {1, -1}) {
                const PureState enc = encode_message(state, alpha, beta, {x1, x2});
                for (int bits = 0; bits < 64; ++bits) {
                    std::vector<int> forced(7, 0);
                    for (int v = 1; v < 7; ++v) forced[static_cast<std::size_t>(v)] = (bits >> (v - 1)) & 1;
                    OutcomeSource src(forced);
                    const DecodeResult r = decode_with_loss(t, enc, {x1, x2}, loss, src);
                    if (!r.possible) continue;
                    ++runs;
                    min_fid = r.success ? std::min(min_fid, message_fidelity(r, alpha, beta)) : 0.0;
                }
            }
        }
    }
    o.require(two_loss_case, "two-photon-loss pattern recoverable");
    o.require(min_fid >= 1 - 1e-10, std::to_string(patterns) + " patterns, " + std::to_string(runs) +
                                        " outcome branches, min fidelity 1-" + fmt("%.2g", 1 - min_fid));
}

void secret_fraction_root(Outcome& o) {
    double lo = 0.1, hi = 0.15;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (secret_fraction(mid) > 0 ? lo : hi) = mid;
    }
    o.require(lo > 0.1260 && lo < 0.1262, "root " + fmt("%.7f", lo));
}

void monte_carlo_ratio(Outcome& o) {
    RepeaterParams p;
    p.max_depth = 3;
    MonteCarloOptions mc;
    mc.trials = 1000000;
    mc.jobs = 0;
    for (double target : {1e-4, 3e-4, 5e-4, 1e-3}) {
        p.eps_r = target;
        const OptimizationResult best = optimize(p, 1000.0, 0);
        const double mu = best.rate.mu;
        const InversionResult inv = invert_error_map(best.tree, mu, target, mc);
        const double ratio = target / inv.eps;
        const bool high = target >= 1e-3;
        const bool ok = high ? (ratio >= 3.5 && ratio <= 5.5) : (ratio >= 2.4 && ratio <= 3.6);
        o.require(ok, fmt("eps_r=%g ", target) + to_string(best.tree) + " m=" + std::to_string(best.stations) +
                          fmt(" mu=%.4f", mu) + fmt(" ratio=%.3f", ratio) + (high ? " in [3.5,5.5]" : " in [2.4,3.6]"));
    }
}

void crossover(Outcome& o) {
    RepeaterParams p;
    p.max_depth = 3;
    p.detector_efficiency = 0.85;
    p.eps_r = 1e-3;
    const CrossoverResult best = crossover_vs_direct(p, 200.0, 0.1, 0);
    o.require(best.ratio > 1, "eta_rep/eta_dir=" + fmt("%.3f", best.ratio));
    o.require(vertex_count(best.tree) == 285, "n=" + std::to_string(vertex_count(best.tree)) + " " + to_string(best.tree));
    if (best.stations != 97) {
        const CrossoverResult at97 = crossover_at_stations(p, 200.0, 97, 0);
        const double gap = 1 - at97.ratio / best.ratio;
        o.require(gap <= 0.01, "optimum m=" + std::to_string(best.stations) + fmt(" ratio %.3f", best.ratio) +
                                   ", m=97 ratio" + fmt(" %.3f", at97.ratio) + fmt(" (%.1f%% below optimum)", 100 * gap));
    } else {
        o.require(true, "m=97");
    }
    p.detector_efficiency = 0.95;
    for (auto [eps, expect] : {std::pair{2e-3, 49LL}, std::pair{3e-3, 32LL}}) {
        p.eps_r = eps;
        const CrossoverResult r = crossover_vs_direct(p, 200.0, 0.1, 0);
        o.require(r.stations == expect, fmt("eps_r=%g", eps) + " m=" + std::to_string(r.stations) + " (want " +
                                            std::to_string(expect) + ") " + to_string(r.tree) +
                                            fmt(" ratio %.3g", r.ratio));
    }
}

void two_way(Outcome& o) {
    RepeaterParams p;
    p.eps_r = 1e-4;
    const OptimizationResult tree = optimize(p, 1000.0, 0);
    const TwoWayResult tw = twoway_rate(TwoWayParams::from_tree_stations(tree.stations));
    const double factor = tree.rate.secret_rate / tw.rate_hz;
    o.require(factor >= 100, "tree " + to_string(tree.tree) + " m=" + std::to_string(tree.stations) +
                                 fmt(" r_s=%.1f kHz", tree.rate.secret_rate / 1e3) + ", two-way l=" +
                                 std::to_string(tw.l) + fmt(" r=%.1f kHz", tw.rate_hz / 1e3) +
                                 fmt(", factor %.2f (need >= 100)", factor));
}

void property_suites(Outcome& o) {
    bool monotone = true;
    for (const auto& t : enumerate_trees(50, 5)) {
        double prev = 1;
        for (int i = 0; i <= 100; ++i) {
            const double e = encoded_transmission(t, i / 100.0);
            monotone = monotone && e <= prev + 1e-15;
            prev = e;
        }
    }
    o.require(monotone, "eta_e monotone in mu");

    bool commute = true;
    for (const auto& t : enumerate_trees(40, 4)) {
        const auto g = stabilizer_generators(t, 40);
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = i + 1; j < g.size(); ++j) commute = commute && commutes(g[i], g[j]);
        }
    }
    o.require(commute, "stabilizers commute");

    long long mismatches = 0, patterns = 0;
    for (const auto& t : enumerate_trees(11, 10)) {
        LossDecoder decoder(t);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << decoder.photon_count()); ++mask) {
            const LossPattern loss = LossPattern::from_mask(t, mask);
            mismatches += decoder.success(loss) != quantum_recoverable(t, loss);
            ++patterns;
        }
    }
    o.require(mismatches == 0, "decoder vs quantum: " + std::to_string(mismatches) + "/" + std::to_string(patterns) +
                                   " mismatches");

    bool z_one = true;
    for (int l = 1; l <= 64; ++l) z_one = z_one && z_factor(l, 1.0) == 1.0;
    o.require(z_one, "Z_l(1)=1 for l<=64");

    MonteCarloOptions a;
    a.trials = 100000;
    a.rng.seed = 2024;
    MonteCarloOptions b = a;
    b.jobs = 4;
    const auto ra = simulate_reencoding_error({4, 14, 4}, 0.17, 1e-3, a);
    const auto rb = simulate_reencoding_error({4, 14, 4}, 0.17, 1e-3, b);
    const auto ea = sample_eta_e({4, 14, 4}, 0.25, a);
    const auto eb = sample_eta_e({4, 14, 4}, 0.25, b);
    o.require(ra.errors == rb.errors && ra.decoded == rb.decoded && ea.successes == eb.successes,
              "seed-exact across 1 and 4 workers");

    RepeaterParams p;
    p.max_depth = 3;
    const auto rows = sweep(p, {200, 400, 600, 800, 1000}, 0);
    bool increasing = true, depth3 = true;
    std::string shape;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        increasing = increasing && (i == 0 || rows[i].cost > rows[i - 1].cost);
        depth3 = depth3 && rows[i].tree.depth() == 3;
        shape += fmt("%g:", rows[i].distance_km) + to_string(rows[i].tree) + fmt("/%.3g ", rows[i].cost);
    }
    o.require(increasing && depth3, "sweep " + shape);
    RepeaterParams deep;
    const auto deep_rows = sweep(deep, {200, 400, 600, 800, 1000}, 0);
    bool deep3 = true;
    for (const auto& r : deep_rows) deep3 = deep3 && r.tree.depth() == 3;
    o.require(deep3, "depth-3 optima with depth 4 allowed");
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<void(Outcome&)> run;
        double time_limit_s;
    };
    const double none = 1e9;
    const std::vector<Criterion> criteria = {
        {"headline secret key rate", headline_rate, 1},
        {"timing goldens", timing_goldens, none},
        {"loss enumeration equals recursion", oracle_equivalence, 60},
        {"quantum round trip", quantum_round_trip, 10},
        {"secret fraction threshold", secret_fraction_root, none},
        {"Monte Carlo error ratio", monte_carlo_ratio, 600},
        {"direct transmission crossover", crossover, none},
        {"two-way comparison", two_way, 60},
        {"property suites", property_suites, 600},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > criteria[i].time_limit_s) o.require(false, fmt("runtime above %g s", criteria[i].time_limit_s));
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name.c_str(), secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
