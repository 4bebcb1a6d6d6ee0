#include "treerep/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "treerep/analytic.hpp"

namespace treerep {

namespace {

using cd = std::complex<double>;

void check_qubit_count(int qubits) {
    if (qubits < 0 || qubits > kMaxOracleQubits) {
        throw std::length_error("state of " + std::to_string(qubits) + " qubits exceeds the oracle cap of " +
                                std::to_string(kMaxOracleQubits));
    }
}

TreeLayout oracle_layout(const BranchingVector& t, int extra_qubits) {
    const std::uint64_t n = vertex_count(t);
    if (n + static_cast<std::uint64_t>(extra_qubits) > static_cast<std::uint64_t>(kMaxOracleQubits)) {
        throw std::length_error("tree " + to_string(t) + " has " + std::to_string(n) +
                                " vertices, too many for the state-vector oracle");
    }
    return TreeLayout(t, static_cast<std::uint64_t>(kMaxOracleQubits));
}

int first_level_ancestor(const TreeLayout& layout, int v) {
    while (layout.level(v) > 1) v = layout.parent(v);
    return v;
}

// z on the Bell partner's children and on other first-level qubits, x one
// level further down, alternating from there.
Basis alternating_basis(const TreeLayout& layout, int bell_partner, int v) {
    const int below = layout.level(v) - 1;
    const bool z_level = first_level_ancestor(layout, v) == bell_partner ? below % 2 == 1 : below % 2 == 0;
    return z_level ? Basis::Z : Basis::X;
}

int first_arrived(const TreeLayout& layout, const LossPattern& loss) {
    for (int v = layout.level_begin(1); v < layout.level_begin(2); ++v) {
        if (!loss.is_lost(v)) return v;
    }
    return -1;
}

void check_pattern(const TreeLayout& layout, const LossPattern& loss) {
    if (static_cast<int>(loss.lost.size()) != layout.size() - 1) {
        throw std::invalid_argument("loss pattern length does not match tree " + to_string(layout.shape()));
    }
}

}  // namespace

PureState::PureState(int qubits) : qubits_(qubits) {
    check_qubit_count(qubits);
    amp_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << qubits);
    amp_[0] = 1.0;
}

PureState::PureState(int qubits, Eigen::VectorXcd amplitudes) : qubits_(qubits), amp_(std::move(amplitudes)) {
    check_qubit_count(qubits);
    if (amp_.size() != (Eigen::Index{1} << qubits)) throw std::invalid_argument("amplitude vector has wrong length");
}

void PureState::normalize() {
    const double n = amp_.norm();
    if (n == 0) throw std::domain_error("cannot normalize the zero vector");
    amp_ /= n;
}

void PureState::check_qubit(int q) const {
    if (q < 0 || q >= qubits_) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
}

void PureState::apply_h(int q) {
    check_qubit(q);
    const Eigen::Index bit = Eigen::Index{1} << q;
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        const cd a = amp_[i];
        const cd b = amp_[i | bit];
        amp_[i] = s * (a + b);
        amp_[i | bit] = s * (a - b);
    }
}

void PureState::apply_x(int q) {
    check_qubit(q);
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
    }
}

void PureState::apply_z(int q) {
    check_qubit(q);
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (i & bit) amp_[i] = -amp_[i];
    }
}

double PureState::prob_zero(int q) const {
    check_qubit(q);
    const Eigen::Index bit = Eigen::Index{1} << q;
    double p0 = 0;
    double total = 0;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        const double w = std::norm(amp_[i]);
        total += w;
        if (!(i & bit)) p0 += w;
    }
    return total > 0 ? p0 / total : 0.0;
}

double PureState::project(int q, int value) {
    check_qubit(q);
    if (value != 0 && value != 1) throw std::invalid_argument("measurement outcome must be 0 or 1");
    const double p0 = prob_zero(q);
    const Eigen::Index bit = Eigen::Index{1} << q;
    for (Eigen::Index i = 0; i < amp_.size(); ++i) {
        if (((i & bit) != 0) != (value == 1)) amp_[i] = 0;
    }
    const double p = value == 0 ? p0 : 1 - p0;
    if (p > 0) normalize();
    return p;
}

std::complex<double> PureState::expectation(std::uint64_t x_mask, std::uint64_t z_mask) const {
    const std::uint64_t limit = std::uint64_t{1} << qubits_;
    if (x_mask >= limit || z_mask >= limit) throw std::out_of_range("Pauli mask wider than the state");
    static const cd kIPow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    const cd y_phase = kIPow[std::popcount(x_mask & z_mask) % 4];
    cd sum = 0;
    for (std::uint64_t i = 0; i < limit; ++i) {
        const double sign = std::popcount(i & z_mask) % 2 ? -1.0 : 1.0;
        sum += std::conj(amp_[static_cast<Eigen::Index>(i ^ x_mask)]) * amp_[static_cast<Eigen::Index>(i)] * sign;
    }
    return sum * y_phase;
}

PureState build_tree_state(const BranchingVector& t) {
    const TreeLayout layout = oracle_layout(t, 0);
    const int n = layout.size();
    std::vector<std::uint64_t> neighbor_below(static_cast<std::size_t>(n), 0);
    for (int v = 1; v < n; ++v) neighbor_below[static_cast<std::size_t>(layout.parent(v))] |= std::uint64_t{1} << v;

    Eigen::VectorXcd amp(Eigen::Index{1} << n);
    const double scale = std::pow(2.0, -0.5 * n);
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
        int edges = 0;
        for (int v = 0; v < n; ++v) {
            if ((i >> v) & 1u) edges += std::popcount(i & neighbor_below[static_cast<std::size_t>(v)]);
        }
        amp[static_cast<Eigen::Index>(i)] = edges % 2 ? -scale : scale;
    }
    return PureState(n, std::move(amp));
}

PureState branch_product_22() {
    // Vertices: root 0, branch heads 1 and 2, children 3,4 under 1 and 5,6 under 2.
    const double h = std::sqrt(0.5);
    auto plus = [&](int) { return h; };
    auto minus = [&](int bit) { return bit ? -h : h; };
    auto bit = [](std::uint32_t x, int q) { return static_cast<int>((x >> q) & 1u); };
    auto branch = [&](std::uint32_t x, int head, int c0, int c1, double sign) {
        const double zero = bit(x, head) == 0 ? plus(bit(x, c0)) * plus(bit(x, c1)) : 0.0;
        const double one = bit(x, head) == 1 ? minus(bit(x, c0)) * minus(bit(x, c1)) : 0.0;
        return h * (zero + sign * one);
    };
    Eigen::VectorXcd amp(128);
    for (std::uint32_t x = 0; x < 128; ++x) {
        const double sign = bit(x, 0) == 0 ? 1.0 : -1.0;
        amp[x] = h * branch(x, 1, 3, 4, sign) * branch(x, 2, 5, 6, sign);
    }
    return PureState(7, std::move(amp));
}

void BellOutcome::validate() const {
    if ((x1 != 1 && x1 != -1) || (x2 != 1 && x2 != -1)) throw std::invalid_argument("Bell outcomes must be +1 or -1");
}

PureState encode_message(const PureState& tree, std::complex<double> alpha, std::complex<double> beta,
                         BellOutcome outcome) {
    outcome.validate();
    if (tree.qubits() < 2) throw std::invalid_argument("tree state needs a root and at least one photon");
    check_qubit_count(tree.qubits() + 1);
    const double norm2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(norm2 - 1.0) > 1e-10) throw std::invalid_argument("message amplitudes are not normalized");

    // Bell coefficient c[message][root].
    double c[2][2] = {{0, 0}, {0, 0}};
    if (outcome.x1 == 1) {
        c[0][0] = 1;
        c[1][1] = outcome.x2;
    } else {
        c[0][1] = 1;
        c[1][0] = outcome.x2;
    }
    const cd msg[2] = {alpha, beta};
    const int photons = tree.qubits() - 1;
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(Eigen::Index{1} << photons);
    const auto& in = tree.amplitudes();
    for (Eigen::Index p = 0; p < amp.size(); ++p) {
        for (int m = 0; m < 2; ++m) {
            for (int r = 0; r < 2; ++r) {
                if (c[m][r] != 0) amp[p] += c[m][r] * msg[m] * in[r | (p << 1)];
            }
        }
    }
    PureState out(photons, std::move(amp));
    out.normalize();
    return out;
}

OutcomeSource::OutcomeSource(RngSpec spec, std::uint64_t stream_id) : rng_(spec, stream_id), sampling_(true) {}

OutcomeSource::OutcomeSource(std::vector<int> forced_bits) : forced_(std::move(forced_bits)) {}

int OutcomeSource::choose(int vertex, double prob_zero) {
    if (sampling_) return rng_.next_double() < prob_zero ? 0 : 1;
    if (vertex < 0 || static_cast<std::size_t>(vertex) >= forced_.size()) {
        throw std::out_of_range("no forced outcome for vertex " + std::to_string(vertex));
    }
    const int bit = forced_[static_cast<std::size_t>(vertex)];
    const double p = bit == 0 ? prob_zero : 1 - prob_zero;
    if (p < 1e-12) impossible_ = true;
    return bit;
}

DecodeResult decode_with_loss(const BranchingVector& t, const PureState& encoded, BellOutcome encoding,
                              const LossPattern& loss, OutcomeSource& outcomes) {
    encoding.validate();
    const TreeLayout layout = oracle_layout(t, 0);
    const int n = layout.size();
    check_pattern(layout, loss);
    if (encoded.qubits() != n - 1) throw std::invalid_argument("encoded state does not match tree " + to_string(t));

    DecodeResult out;
    MeasurementRecord& rec = out.record;
    rec.encoding = encoding;
    rec.basis.assign(static_cast<std::size_t>(n), Basis::Unused);
    rec.outcome.assign(static_cast<std::size_t>(n), 0);
    rec.z_value.assign(static_cast<std::size_t>(n), 0);

    const int j = first_arrived(layout, loss);
    out.bell_partner = j;
    if (j < 0) {
        for (int v = 1; v < n; ++v) rec.basis[static_cast<std::size_t>(v)] = loss.is_lost(v) ? Basis::Lost : Basis::Unused;
        return out;
    }
    rec.basis[static_cast<std::size_t>(j)] = Basis::BellPartner;

    PureState s = encoded;
    for (int v = 1; v < n; ++v) {
        if (v == j) continue;
        const int q = v - 1;
        const bool lost = loss.is_lost(v);
        const Basis basis = lost ? Basis::Lost : alternating_basis(layout, j, v);
        rec.basis[static_cast<std::size_t>(v)] = basis;
        if (basis == Basis::X) s.apply_h(q);
        const int bit = outcomes.choose(v, s.prob_zero(q));
        if (outcomes.impossible()) {
            out.possible = false;
            return out;
        }
        s.project(q, bit);
        if (!lost) rec.outcome[static_cast<std::size_t>(v)] = bit ? -1 : 1;
    }

    // z value of v: its own outcome, or x_c times the z values of c's children
    // for an observed x-measured child c.
    std::function<int(int)> infer = [&](int v) -> int {
        const auto sv = static_cast<std::size_t>(v);
        if (rec.basis[sv] == Basis::Z) return rec.outcome[sv];
        for (int c = layout.first_child(v); c < layout.first_child(v) + layout.child_count(v); ++c) {
            if (rec.basis[static_cast<std::size_t>(c)] != Basis::X) continue;
            int value = rec.outcome[static_cast<std::size_t>(c)];
            for (int g = layout.first_child(c); value != 0 && g < layout.first_child(c) + layout.child_count(c); ++g) {
                value *= infer(g);
            }
            if (value != 0) return value;
        }
        return 0;
    };

    bool known = true;
    for (int u = layout.level_begin(1); u < layout.level_begin(2); ++u) {
        if (u == j) continue;
        const int z = infer(u);
        rec.z_value[static_cast<std::size_t>(u)] = z;
        rec.other_first_level_sign *= z;
        known = known && z != 0;
    }
    for (int c = layout.first_child(j); c < layout.first_child(j) + layout.child_count(j); ++c) {
        const int z = infer(c);
        rec.z_value[static_cast<std::size_t>(c)] = z;
        rec.child_sign *= z;
        known = known && z != 0;
    }
    if (!known) return out;

    // Every other qubit is now in a basis state; read off the Bell partner.
    const auto& amp = s.amplitudes();
    Eigen::Index peak = 0;
    amp.cwiseAbs2().maxCoeff(&peak);
    const Eigen::Index jbit = Eigen::Index{1} << (j - 1);
    const Eigen::Index base = peak & ~jbit;
    Eigen::Vector2cd phi(amp[base], amp[base | jbit]);
    phi.normalize();

    // Partner holds Z^sigma H Z^S Z^b X^a |msg>; undo in reverse.
    const Eigen::Matrix2cd Z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    const Eigen::Matrix2cd X = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    const Eigen::Matrix2cd H = (Eigen::Matrix2cd() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
    if (rec.child_sign < 0) phi = Z * phi;
    phi = H * phi;
    if (rec.other_first_level_sign < 0) phi = Z * phi;
    if (encoding.x2 < 0) phi = Z * phi;
    if (encoding.x1 < 0) phi = X * phi;

    out.success = true;
    out.qubit = phi;
    return out;
}

double message_fidelity(const DecodeResult& r, std::complex<double> alpha, std::complex<double> beta) {
    if (!r.success) return 0.0;
    const Eigen::Vector2cd msg(alpha, beta);
    return std::norm(msg.dot(r.qubit));
}

bool quantum_recoverable(const BranchingVector& t, const LossPattern& loss) {
    const TreeLayout layout = oracle_layout(t, 1);
    const int n = layout.size();
    check_pattern(layout, loss);
    const int j = first_arrived(layout, loss);
    if (j < 0) return false;

    const PureState tree = build_tree_state(t);
    const PureState e0 = encode_message(tree, 1.0, 0.0, BellOutcome{});
    const PureState e1 = encode_message(tree, 0.0, 1.0, BellOutcome{});
    const int photons = n - 1;
    const int ref = photons;  // reference qubit on top
    Eigen::VectorXcd amp(Eigen::Index{1} << (photons + 1));
    amp << e0.amplitudes(), e1.amplitudes();
    PureState s(photons + 1, amp / std::sqrt(2.0));

    for (int v = 1; v < n; ++v) {
        if (v == j || loss.is_lost(v)) continue;
        const int q = v - 1;
        if (alternating_basis(layout, j, v) == Basis::X) s.apply_h(q);
        s.project(q, s.prob_zero(q) >= 0.5 ? 0 : 1);
    }

    // rho over (partner, reference), index = partner + 2 * reference.
    const Eigen::Index jbit = Eigen::Index{1} << (j - 1);
    const Eigen::Index rbit = Eigen::Index{1} << ref;
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    const auto& a = s.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (i & (jbit | rbit)) continue;
        const Eigen::Vector4cd v(a[i], a[i | jbit], a[i | rbit], a[i | jbit | rbit]);
        rho += v * v.adjoint();
    }
    rho /= rho.trace().real();
    const double purity = (rho * rho).trace().real();
    Eigen::Matrix2cd rho_ref;
    for (int r = 0; r < 2; ++r) {
        for (int rp = 0; rp < 2; ++rp) rho_ref(r, rp) = rho(2 * r, 2 * rp) + rho(2 * r + 1, 2 * rp + 1);
    }
    const double mixedness = (rho_ref - 0.5 * Eigen::Matrix2cd::Identity()).norm();
    return purity > 1 - 1e-9 && mixedness < 1e-9;
}

bool structural_success(const BranchingVector& t, const LossPattern& loss) {
    const TreeLayout layout(t);
    check_pattern(layout, loss);
    const int j = first_arrived(layout, loss);
    if (j < 0) return false;

    std::function<bool(int)> z_known = [&](int v) {
        if (!loss.is_lost(v)) return true;
        for (int c = layout.first_child(v); c < layout.first_child(v) + layout.child_count(v); ++c) {
            if (loss.is_lost(c)) continue;
            bool all = true;
            for (int g = layout.first_child(c); all && g < layout.first_child(c) + layout.child_count(c); ++g) {
                all = z_known(g);
            }
            if (all) return true;
        }
        return false;
    };

    for (int u = layout.level_begin(1); u < layout.level_begin(2); ++u) {
        if (u != j && !z_known(u)) return false;
    }
    for (int c = layout.first_child(j); c < layout.first_child(j) + layout.child_count(j); ++c) {
        if (!z_known(c)) return false;
    }
    return true;
}

long double LossEnumeration::probability(long double mu) const {
    long double total = 0;
    for (std::size_t k = 0; k < success_counts.size(); ++k) {
        total += static_cast<long double>(success_counts[k]) * ipow(mu, static_cast<long long>(k)) *
                 ipow(1.0L - mu, static_cast<long long>(photons) - static_cast<long long>(k));
    }
    return total;
}

LossEnumeration enumerate_loss_patterns(const BranchingVector& t, std::uint64_t max_vertices) {
    const std::uint64_t n = vertex_count(t);
    if (n > max_vertices || n > 31) {
        throw std::length_error("tree " + to_string(t) + " has " + std::to_string(n) + " vertices, enumeration cap is " +
                                std::to_string(max_vertices));
    }
    LossEnumeration out;
    out.photons = static_cast<int>(n) - 1;
    out.success_counts.assign(static_cast<std::size_t>(out.photons) + 1, 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << out.photons); ++mask) {
        if (structural_success(t, LossPattern::from_mask(t, mask))) {
            ++out.success_counts[static_cast<std::size_t>(std::popcount(mask))];
        }
    }
    return out;
}

double enumerate_loss_success(const BranchingVector& t, double mu) {
    if (!(mu >= 0 && mu <= 1)) throw std::invalid_argument("loss probability must lie in [0, 1]");
    return static_cast<double>(enumerate_loss_patterns(t).probability(mu));
}

}  // namespace treerep
