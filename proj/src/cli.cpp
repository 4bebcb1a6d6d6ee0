#include "treerep/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>

#include <CLI11.hpp>

#include "treerep/analytic.hpp"
#include "treerep/gate_model.hpp"
#include "treerep/montecarlo.hpp"
#include "treerep/optimizer.hpp"
#include "treerep/oracle.hpp"
#include "treerep/timing.hpp"
#include "treerep/twoway.hpp"

namespace treerep {

namespace {

// ---- value parsing and printing -------------------------------------------

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw std::invalid_argument("bad value '" + text + "' for " + key);
    return value;
}

std::string exact(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string sig9(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    std::string s = text;
    if (!s.empty() && s.front() == '[') s.erase(0, 1);
    if (!s.empty() && s.back() == ']') s.pop_back();
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_number<double>(trim(item), key));
    if (out.empty()) throw std::invalid_argument(key + " needs at least one value");
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + exact(xs[i]);
    return out;
}

// ---- config schema ----------------------------------------------------------

struct Field {
    const char* section;
    const char* key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <typename T>
Field number_field(const char* section, const char* key, T RunConfig::*member) {
    return {section, key,
            [=](RunConfig& c, const std::string& v) { c.*member = parse_number<T>(v, key); },
            [=](const RunConfig& c) -> std::optional<std::string> {
                if constexpr (std::is_floating_point_v<T>) {
                    return exact(c.*member);
                } else {
                    return std::to_string(c.*member);
                }
            }};
}

template <typename T>
Field optional_field(const char* section, const char* key, std::optional<T> RunConfig::*member) {
    return {section, key,
            [=](RunConfig& c, const std::string& v) {
                if (v.empty()) {
                    (c.*member).reset();
                } else {
                    c.*member = parse_number<T>(v, key);
                }
            },
            [=](const RunConfig& c) -> std::optional<std::string> {
                if (!(c.*member)) return std::nullopt;
                if constexpr (std::is_floating_point_v<T>) {
                    return exact(*(c.*member));
                } else {
                    return std::to_string(*(c.*member));
                }
            }};
}

const std::vector<Field>& schema() {
    static const std::vector<Field> fields = {
        {"chain", "tree",
         [](RunConfig& c, const std::string& v) {
             if (v.empty()) {
                 c.tree.reset();
             } else {
                 c.tree = to_string(parse_branching_vector(v));
             }
         },
         [](const RunConfig& c) { return c.tree; }},
        number_field("chain", "distance_km", &RunConfig::distance_km),
        optional_field("chain", "spacing_km", &RunConfig::spacing_km),
        optional_field("chain", "stations", &RunConfig::stations),
        number_field("chain", "eta_d", &RunConfig::eta_d),
        number_field("chain", "eps_r", &RunConfig::eps_r),
        number_field("chain", "attenuation_length_km", &RunConfig::attenuation_length_km),
        number_field("chain", "min_spacing_km", &RunConfig::min_spacing_km),
        number_field("chain", "max_photons", &RunConfig::max_photons),
        number_field("chain", "max_depth", &RunConfig::max_depth),
        number_field("chain", "error_cap", &RunConfig::error_cap),
        number_field("timing", "tau_ph_ns", &RunConfig::tau_ph_ns),
        number_field("timing", "tau_cz_ns", &RunConfig::tau_cz_ns),
        number_field("timing", "first_level_factor", &RunConfig::first_level_factor),
        number_field("timing", "light_speed_m_per_s", &RunConfig::light_speed_m_per_s),
        number_field("montecarlo", "trials", &RunConfig::trials),
        number_field("montecarlo", "seed", &RunConfig::seed),
        optional_field("montecarlo", "mu", &RunConfig::mu),
        number_field("montecarlo", "eps", &RunConfig::eps),
        optional_field("montecarlo", "target_eps_r", &RunConfig::target_eps_r),
        {"sweep", "distances_km",
         [](RunConfig& c, const std::string& v) { c.distances_km = parse_list(v, "distances_km"); },
         [](const RunConfig& c) -> std::optional<std::string> { return join(c.distances_km); }},
        number_field("cavity", "cooperativity", &RunConfig::cooperativity),
        number_field("cavity", "kappa_loss_over_kappa_in", &RunConfig::kappa_loss_over_kappa_in),
        number_field("cavity", "mode_matching", &RunConfig::mode_matching),
        {"output", "format",
         [](RunConfig& c, const std::string& v) {
             if (v != "table" && v != "csv" && v != "jsonl") {
                 throw std::invalid_argument("format must be table, csv or jsonl");
             }
             c.format = v;
         },
         [](const RunConfig& c) -> std::optional<std::string> { return c.format; }},
    };
    return fields;
}

const Field& find_field(const std::string& section, const std::string& key) {
    for (const auto& f : schema()) {
        if (section == f.section && key == f.key) return f;
    }
    throw std::invalid_argument("unknown config key '" + key + "' in section [" + section + "]");
}

}  // namespace

void apply_config_text(RunConfig& cfg, std::string_view text) {
    std::vector<std::string> lines;
    bool embedded = false;
    {
        std::string all(text);
        std::stringstream ss(all);
        for (std::string line; std::getline(ss, line);) {
            if (line.rfind("#!", 0) == 0) embedded = true;
            lines.push_back(line);
        }
    }

    std::string section;
    int number = 0;
    for (const auto& raw : lines) {
        ++number;
        std::string line;
        if (embedded) {
            if (raw.rfind("#!", 0) != 0) continue;
            line = trim(std::string_view(raw).substr(2));
        } else {
            line = trim(raw);
            if (line.empty() || line[0] == '#') continue;
        }
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument("line " + std::to_string(number) + ": bad section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            bool known = false;
            for (const auto& f : schema()) known = known || section == f.section;
            if (!known) throw std::invalid_argument("unknown config section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(number) + ": expected key = value");
        if (section.empty()) throw std::invalid_argument("line " + std::to_string(number) + ": key outside a section");
        find_field(section, trim(std::string_view(line).substr(0, eq))).set(cfg, trim(std::string_view(line).substr(eq + 1)));
    }
}

std::string echo_config(const RunConfig& cfg) {
    std::string out;
    std::string section;
    for (const auto& f : schema()) {
        if (section != f.section) {
            section = f.section;
            out += "#! [" + section + "]\n";
        }
        if (auto v = f.get(cfg)) out += std::string("#! ") + f.key + " = " + *v + "\n";
    }
    return out;
}

namespace {

// ---- tables -----------------------------------------------------------------

using Cell = std::variant<std::string, double, long long, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return sig9(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

std::string cell_json(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? sig9(*d) : "null";
    return cell_text(c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void emit(std::ostream& out, const RunConfig& cfg, const std::string& command, const Table& t) {
    if (cfg.format == "jsonl") {
        out << "{\"command\":" << json_string(command) << ",\"config\":{";
        bool first = true;
        for (const auto& f : schema()) {
            if (auto v = f.get(cfg)) {
                out << (first ? "" : ",") << json_string(std::string(f.section) + "." + f.key) << ":" << json_string(*v);
                first = false;
            }
        }
        out << "}}\n";
        for (const auto& row : t.rows) {
            out << "{";
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << json_string(t.columns[i]) << ":" << cell_json(row[i]);
            }
            out << "}\n";
        }
        return;
    }

    out << "# treerep " << command << "\n" << echo_config(cfg);
    if (cfg.format == "csv") {
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
        out << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
            out << "\n";
        }
        return;
    }

    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], cell_text(row[i]).size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        out << s << "\n";
    };
    line(t.columns);
    for (const auto& row : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(cell_text(c));
        line(cells);
    }
}

Table long_table() { return Table{{"quantity", "value"}, {}}; }
void add(Table& t, const std::string& name, Cell value) { t.rows.push_back({name, std::move(value)}); }

// ---- shared helpers ---------------------------------------------------------

RepeaterParams repeater_params(const RunConfig& cfg) {
    RepeaterParams p;
    p.detector_efficiency = cfg.eta_d;
    p.attenuation_length_km = cfg.attenuation_length_km;
    p.timing.tau_ph = cfg.tau_ph_ns * 1e-9;
    p.timing.tau_cz = cfg.tau_cz_ns * 1e-9;
    p.timing.first_level_factor = cfg.first_level_factor;
    p.timing.light_speed_fiber = cfg.light_speed_m_per_s;
    p.eps_r = cfg.eps_r;
    p.max_photons = cfg.max_photons;
    p.min_spacing_km = cfg.min_spacing_km;
    p.max_depth = cfg.max_depth;
    p.validate();
    return p;
}

BranchingVector required_tree(const RunConfig& cfg) {
    if (!cfg.tree) throw std::invalid_argument("--tree is required for this command");
    return parse_branching_vector(*cfg.tree);
}

std::optional<long long> stations_of(const RunConfig& cfg) {
    if (cfg.stations) {
        if (*cfg.stations < 0) throw std::invalid_argument("--stations must be non-negative");
        return cfg.stations;
    }
    if (cfg.spacing_km) {
        if (!(*cfg.spacing_km > 0)) throw std::invalid_argument("--spacing-km must be positive");
        // Smallest number of hops whose length does not exceed the requested spacing.
        const double hops = std::ceil(cfg.distance_km / *cfg.spacing_km - 1e-9);
        return std::max(0LL, static_cast<long long>(hops) - 1);
    }
    return std::nullopt;
}

CavityParams cavity_params(const RunConfig& cfg) {
    CavityParams c;
    c.cooperativity = cfg.cooperativity;
    c.kappa_in = 1.0;
    c.kappa_loss = cfg.kappa_loss_over_kappa_in;
    c.detector_efficiency = cfg.eta_d;
    c.mode_matching = cfg.mode_matching;
    c.validate();
    return c;
}

void add_rate_rows(Table& t, const RateResult& r) {
    add(t, "eta", r.eta);
    add(t, "mu", r.mu);
    add(t, "R1", r.R1);
    add(t, "R2", r.R2);
    add(t, "eta_e", r.eta_e);
    add(t, "p_trans", r.p_trans);
    add(t, "eps_trans", r.eps_trans);
    add(t, "qber", r.Q);
    add(t, "secret_fraction", r.secret_fraction);
    add(t, "r0_hz", r.r0);
    add(t, "secret_rate_hz", r.secret_rate);
    add(t, "cost", r.cost);
    add(t, "feasible", r.feasible);
}

// ---- commands ---------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    const BranchingVector t = required_tree(cfg);
    const RepeaterParams params = repeater_params(cfg);
    const auto n = vertex_count(t);
    Table table = long_table();
    add(table, "tree", to_string(t));
    add(table, "vertices", static_cast<long long>(n));
    add(table, "depth", static_cast<long long>(t.depth()));

    const auto m = stations_of(cfg);
    if (cfg.mu && !m) {
        const double mu = *cfg.mu;
        if (!(mu >= 0 && mu <= 1)) throw std::invalid_argument("--mu must lie in [0, 1]");
        add(table, "mu", mu);
        const auto R = indirect_z_probs(t, mu);
        for (int k = 1; k <= t.depth() + 1; ++k) add(table, "R" + std::to_string(k), R[static_cast<std::size_t>(k)]);
        add(table, "eta_e", encoded_transmission(t, mu));
        emit(out, cfg, "analyze", table);
        return 0;
    }
    if (!m) throw std::invalid_argument("analyze needs --stations, --spacing-km or --mu");

    const RateResult r = cost_parameter(params, t, *m, cfg.distance_km);
    add(table, "distance_km", cfg.distance_km);
    add(table, "stations", static_cast<long long>(*m));
    add(table, "spacing_km", r.spacing_km);
    add_rate_rows(table, r);
    const auto R = indirect_z_probs(t, r.mu);
    for (int k = 3; k <= t.depth() + 1; ++k) add(table, "R" + std::to_string(k), R[static_cast<std::size_t>(k)]);
    add(table, "eps_trans_linear", accumulated_error_linear(params.eps_r, *m));
    add(table, "generation_time_s", generation_time(t, params.timing));
    add(table, "branch_time_s", branch_time(t, params.timing));
    add(table, "delay_line_m", delay_line_length(t, params.timing));
    add(table, "distance_limit_km", distance_limit(r.spacing_km, params.eps_r));

    const CavityParams cavity = cavity_params(cfg);
    const QubitAmplitudes plus{std::sqrt(0.5), std::sqrt(0.5)};
    const TransferFidelity gate = heralded_transfer(cavity, plus);
    add(table, "gate_infidelity", 1.0 - gate.fidelity);
    add(table, "gate_success_probability", gate.success_probability);
    add(table, "gate_infidelity_expanded", expanded_error(cavity, plus).error);
    add(table, "mode_matching_error", mode_matching_error(cavity.mode_matching));

    std::string issues;
    auto note = [&](const std::string& s) { issues += (issues.empty() ? "" : "; ") + s; };
    if (r.spacing_km < params.min_spacing_km) note("spacing below minimum");
    if (n > params.max_photons) note("photon count above cap");
    if (t.depth() > params.max_depth) note("depth above cap");
    if (!r.feasible) note("no secret key");
    add(table, "constraints", issues.empty() ? std::string("ok") : issues);
    emit(out, cfg, "analyze", table);
    return 0;
}

Table optimum_table() {
    return Table{{"distance_km", "tree", "vertices", "depth", "stations", "spacing_km", "mu", "eta_e", "p_trans",
                  "eps_trans", "qber", "secret_fraction", "r0_hz", "secret_rate_hz", "cost", "feasible"},
                 {}};
}

void add_optimum(Table& t, const OptimizationResult& r) {
    t.rows.push_back({r.distance_km, to_string(r.tree), static_cast<long long>(vertex_count(r.tree)),
                      static_cast<long long>(r.tree.depth()), static_cast<long long>(r.stations), r.spacing_km,
                      r.rate.mu, r.rate.eta_e, r.rate.p_trans, r.rate.eps_trans, r.rate.Q, r.rate.secret_fraction,
                      r.rate.r0, r.rate.secret_rate, r.cost, r.feasible});
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    Table t = optimum_table();
    add_optimum(t, optimize(repeater_params(cfg), cfg.distance_km, cfg.jobs));
    emit(out, cfg, "optimize", t);
    return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
    Table t = optimum_table();
    for (const auto& r : sweep(repeater_params(cfg), cfg.distances_km, cfg.jobs)) add_optimum(t, r);
    emit(out, cfg, "sweep", t);
    return 0;
}

int cmd_montecarlo(const RunConfig& cfg, std::ostream& out) {
    const BranchingVector t = required_tree(cfg);
    double mu = 0;
    if (cfg.mu) {
        mu = *cfg.mu;
    } else if (const auto m = stations_of(cfg)) {
        mu = LossModel::from_channel(cfg.distance_km / static_cast<double>(*m + 1), cfg.attenuation_length_km, cfg.eta_d)
                 .mu;
    } else {
        throw std::invalid_argument("montecarlo needs --mu, --stations or --spacing-km");
    }
    MonteCarloOptions opts;
    opts.trials = cfg.trials;
    opts.rng.seed = cfg.seed;
    opts.jobs = cfg.jobs;

    Table table = long_table();
    add(table, "tree", to_string(t));
    add(table, "mu", mu);
    add(table, "trials", static_cast<long long>(cfg.trials));
    add(table, "seed", static_cast<long long>(cfg.seed));
    const TransmissionEstimate eta = sample_eta_e(t, mu, opts);
    add(table, "eta_e_analytic", encoded_transmission(t, mu));
    add(table, "eta_e_estimate", eta.estimate);
    add(table, "eta_e_stderr", eta.std_error);

    if (cfg.target_eps_r) {
        const InversionResult inv = invert_error_map(t, mu, *cfg.target_eps_r, opts);
        add(table, "target_eps_r", *cfg.target_eps_r);
        add(table, "eps", inv.eps);
        add(table, "eps_r_estimate", inv.at_eps.eps_r);
        add(table, "eps_r_stderr", inv.at_eps.std_error);
        add(table, "ratio", inv.eps > 0 ? *cfg.target_eps_r / inv.eps : 0.0);
        add(table, "iterations", static_cast<long long>(inv.iterations));
    } else {
        const ReencodingEstimate r = simulate_reencoding_error(t, mu, cfg.eps, opts);
        add(table, "eps", cfg.eps);
        add(table, "eps_r_estimate", r.eps_r);
        add(table, "eps_r_stderr", r.std_error);
        add(table, "ratio", cfg.eps > 0 ? r.eps_r / cfg.eps : 0.0);
        add(table, "decoded", static_cast<long long>(r.decoded));
        add(table, "errors", static_cast<long long>(r.errors));
    }
    emit(out, cfg, "montecarlo", table);
    return 0;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    std::vector<BranchingVector> trees;
    if (cfg.tree) {
        trees.push_back(parse_branching_vector(*cfg.tree));
    } else {
        trees = enumerate_trees(11, 10);
    }
    Table table{{"check", "tree", "status", "detail"}, {}};
    bool all_ok = true;
    auto record = [&](const std::string& check, const BranchingVector& t, bool ok, double detail) {
        table.rows.push_back({check, to_string(t), std::string(ok ? "pass" : "FAIL"), detail});
        all_ok = all_ok && ok;
    };

    RandomStream rng(RngSpec{cfg.seed}, 0);
    for (const auto& t : trees) {
        const auto n = vertex_count(t);
        if (n > 11) throw std::invalid_argument("oracle checks support trees of at most 11 vertices");
        const PureState state = build_tree_state(t);

        double worst = 0;
        const TreeLayout layout(t);
        for (const auto& g : stabilizer_generators(t, 11)) {
            std::uint64_t x = 0, z = 0;
            x |= std::uint64_t{1} << layout.vertex_of(g.x_support);
            for (const auto& idx : g.z_support) z |= std::uint64_t{1} << layout.vertex_of(idx);
            worst = std::max(worst, std::abs(state.expectation(x, z) - 1.0));
        }
        record("stabilizers", t, worst < 1e-10, worst);

        if (t == BranchingVector{2, 2}) {
            const PureState ref = branch_product_22();
            const std::complex<double> phase = ref.amplitudes().dot(state.amplitudes());
            const double dev = (state.amplitudes() - ref.amplitudes() * (phase / std::abs(phase))).cwiseAbs().maxCoeff();
            record("explicit_state", t, dev < 1e-10, dev);
        }

        const double theta = std::acos(std::sqrt(rng.next_double()));
        const double phi = 2 * std::numbers::pi * rng.next_double();
        const std::complex<double> alpha = std::cos(theta);
        const std::complex<double> beta = std::polar(std::sin(theta), phi);
        double min_fid = 1;
        for (int x1 : {1, -1}) {
            for (int x2 : {1, -1}) {
                const PureState enc = encode_message(state, alpha, beta, {x1, x2});
                OutcomeSource src(RngSpec{cfg.seed}, static_cast<std::uint64_t>(2 * x1 + x2 + 3));
                const DecodeResult r = decode_with_loss(t, enc, {x1, x2}, LossPattern::none(t), src);
                min_fid = std::min(min_fid, message_fidelity(r, alpha, beta));
            }
        }
        record("round_trip", t, min_fid >= 1 - 1e-10, 1 - min_fid);

        const LossEnumeration en = enumerate_loss_patterns(t);
        double diff = 0;
        for (double mu : {0.05, 0.1, 0.25, 0.5, 0.9}) {
            diff = std::max(diff, std::abs(static_cast<double>(en.probability(mu)) - encoded_transmission(t, mu)));
        }
        record("enumeration_vs_recursion", t, diff <= 1e-12, diff);

        LossDecoder decoder(t);
        long long mismatches = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << decoder.photon_count()); ++mask) {
            const LossPattern loss = LossPattern::from_mask(t, mask);
            mismatches += decoder.success(loss) != quantum_recoverable(t, loss) ? 1 : 0;
        }
        record("decoder_vs_quantum", t, mismatches == 0, static_cast<double>(mismatches));
    }
    emit(out, cfg, "oracle", table);
    return all_ok ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    const RepeaterParams params = repeater_params(cfg);
    Table table = long_table();

    const OptimizationResult tree = optimize(params, cfg.distance_km, cfg.jobs);
    add(table, "tree_repeater.tree", to_string(tree.tree));
    add(table, "tree_repeater.stations", static_cast<long long>(tree.stations));
    add(table, "tree_repeater.secret_rate_hz", tree.rate.secret_rate);
    add(table, "tree_repeater.feasible", tree.feasible);

    TwoWayParams tw = TwoWayParams::from_tree_stations(tree.stations);
    tw.detector_efficiency = cfg.eta_d;
    tw.distance_km = cfg.distance_km;
    tw.attenuation_length_km = cfg.attenuation_length_km;
    tw.light_speed_fiber = cfg.light_speed_m_per_s;
    tw.min_spacing_km = cfg.min_spacing_km;
    const TwoWayResult two = twoway_rate(tw);
    add(table, "two_way.qubits", static_cast<long long>(tw.total_qubits));
    add(table, "two_way.l", static_cast<long long>(two.l));
    add(table, "two_way.l_max", static_cast<long long>(two.l_max));
    add(table, "two_way.p_ent", two.p_ent);
    add(table, "two_way.z", two.z);
    add(table, "two_way.rate_hz", two.rate_hz);
    add(table, "two_way.rate_ratio", two.rate_hz > 0 ? tree.rate.secret_rate / two.rate_hz : 0.0);

    add(table, "direct.rate_hz_1ghz_source",
        1e9 * direct_transmission(1, cfg.eta_d, cfg.distance_km, cfg.attenuation_length_km));

    const CrossoverResult cross = crossover_vs_direct(params, cfg.distance_km, cfg.error_cap, cfg.jobs);
    add(table, "crossover.tree", to_string(cross.tree));
    add(table, "crossover.vertices", static_cast<long long>(vertex_count(cross.tree)));
    add(table, "crossover.stations", static_cast<long long>(cross.stations));
    add(table, "crossover.eta_rep", cross.eta_rep);
    add(table, "crossover.eta_dir", cross.eta_dir);
    add(table, "crossover.ratio", cross.ratio);
    add(table, "crossover.eps_trans_linear", cross.eps_trans_linear);
    add(table, "crossover.degenerate", cross.degenerate);
    add(table, "crossover.feasible", cross.feasible);
    emit(out, cfg, "compare", table);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tree-cluster one-way repeater: rates, optimization, Monte Carlo and exact checks"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string tree, format, distances;
    double distance_km = 0, spacing_km = 0, eta_d = 0, eps_r = 0, tau_ph_ns = 0, tau_cz_ns = 0, mu = 0, eps = 0,
           target = 0, l_att = 0, min_spacing = 0;
    long long stations = 0;
    std::uint64_t max_photons = 0, trials = 0, seed = 0;
    int max_depth = 0;
    unsigned jobs = 1;

    app.add_option("--config", config_path, "Config file (key = value under [section] headers)");
    auto* o_tree = app.add_option("--tree", tree, "Branching vector, e.g. [4,14,4]");
    auto* o_dist = app.add_option("--distance-km", distance_km, "Total distance L (km)");
    auto* o_spacing = app.add_option("--spacing-km", spacing_km, "Station spacing L0 (km)");
    auto* o_stations = app.add_option("--stations", stations, "Intermediate stations m");
    auto* o_eta = app.add_option("--eta-d", eta_d, "Detector efficiency");
    auto* o_eps_r = app.add_option("--eps-r", eps_r, "Re-encoding error probability");
    auto* o_tph = app.add_option("--tau-ph-ns", tau_ph_ns, "Photon generation time (ns)");
    auto* o_tcz = app.add_option("--tau-cz-ns", tau_cz_ns, "Spin-spin CZ gate time (ns)");
    auto* o_maxn = app.add_option("--max-photons", max_photons, "Photon cap for the tree search");
    auto* o_maxd = app.add_option("--max-depth", max_depth, "Depth cap for the tree search");
    auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials");
    auto* o_seed = app.add_option("--seed", seed, "RNG seed");
    auto* o_jobs = app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    auto* o_format = app.add_option("--format", format, "table, csv or jsonl");
    auto* o_mu = app.add_option("--mu", mu, "Per-photon loss probability");
    auto* o_eps = app.add_option("--eps", eps, "Single-qubit depolarizing error");
    auto* o_target = app.add_option("--target-eps-r", target, "Invert the error map for this eps_r");
    auto* o_dists = app.add_option("--distances-km", distances, "Comma-separated distances for sweep (km)");
    auto* o_latt = app.add_option("--attenuation-length-km", l_att, "Fiber attenuation length (km)");
    auto* o_minsp = app.add_option("--min-spacing-km", min_spacing, "Minimum station spacing (km)");

    const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> commands = {
        {"analyze", cmd_analyze}, {"optimize", cmd_optimize}, {"sweep", cmd_sweep},
        {"montecarlo", cmd_montecarlo}, {"oracle", cmd_oracle}, {"compare", cmd_compare}};
    app.add_subcommand("analyze", "Evaluate one (tree, m, L) point with every intermediate quantity");
    app.add_subcommand("optimize", "Minimum-cost tree and station count for one distance");
    app.add_subcommand("sweep", "optimize over a list of distances");
    app.add_subcommand("montecarlo", "Sample eta_e and the re-encoding error for one tree");
    app.add_subcommand("oracle", "State-vector checks on small trees");
    app.add_subcommand("compare", "Two-way repeater and direct-transmission baselines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot read config file " + config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            apply_config_text(cfg, ss.str());
        }
        if (o_tree->count()) cfg.tree = to_string(parse_branching_vector(tree));
        if (o_dist->count()) cfg.distance_km = distance_km;
        if (o_spacing->count()) cfg.spacing_km = spacing_km;
        if (o_stations->count()) cfg.stations = stations;
        if (o_eta->count()) cfg.eta_d = eta_d;
        if (o_eps_r->count()) cfg.eps_r = eps_r;
        if (o_tph->count()) cfg.tau_ph_ns = tau_ph_ns;
        if (o_tcz->count()) cfg.tau_cz_ns = tau_cz_ns;
        if (o_maxn->count()) cfg.max_photons = max_photons;
        if (o_maxd->count()) cfg.max_depth = max_depth;
        if (o_trials->count()) cfg.trials = trials;
        if (o_seed->count()) cfg.seed = seed;
        if (o_jobs->count()) cfg.jobs = jobs;
        if (o_format->count()) find_field("output", "format").set(cfg, format);
        if (o_mu->count()) cfg.mu = mu;
        if (o_eps->count()) cfg.eps = eps;
        if (o_target->count()) cfg.target_eps_r = target;
        if (o_dists->count()) cfg.distances_km = parse_list(distances, "--distances-km");
        if (o_latt->count()) cfg.attenuation_length_km = l_att;
        if (o_minsp->count()) cfg.min_spacing_km = min_spacing;

        const std::string name = app.get_subcommands().front()->get_name();
        return commands.at(name)(cfg, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace treerep
