#include "treerep/tree.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace treerep {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b) {
        throw std::overflow_error("tree vertex count overflows 64 bits");
    }
    return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    if (a > std::numeric_limits<std::uint64_t>::max() - b) {
        throw std::overflow_error("tree vertex count overflows 64 bits");
    }
    return a + b;
}

}  // namespace

BranchingVector::BranchingVector(std::vector<int> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw std::invalid_argument("branching vector needs at least one level");
    }
    for (int b : branches_) {
        if (b < 1) {
            throw std::invalid_argument("branching vector entries must be >= 1");
        }
    }
}

std::vector<std::uint64_t> level_sizes(const BranchingVector& t) {
    std::vector<std::uint64_t> sizes{1};
    for (int b : t.branches()) {
        sizes.push_back(checked_mul(sizes.back(), static_cast<std::uint64_t>(b)));
    }
    return sizes;
}

std::uint64_t vertex_count(const BranchingVector& t) {
    std::uint64_t total = 0;
    for (std::uint64_t s : level_sizes(t)) total = checked_add(total, s);
    return total;
}

std::string to_string(const BranchingVector& t) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.branches().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(t.branches()[i]);
    }
    out += ']';
    return out;
}

BranchingVector parse_branching_vector(std::string_view text) {
    std::string compact;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    std::string_view body = compact;
    if (!body.empty() && body.front() == '[') {
        if (body.back() != ']') throw std::invalid_argument("unbalanced brackets in tree '" + std::string(text) + "'");
        body = body.substr(1, body.size() - 2);
    }
    if (body.empty()) throw std::invalid_argument("empty tree specification");

    std::vector<int> branches;
    while (true) {
        auto comma = body.find(',');
        std::string_view item = body.substr(0, comma);
        int value = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw std::invalid_argument("malformed tree entry '" + std::string(item) + "'");
        }
        branches.push_back(value);
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    return BranchingVector(std::move(branches));
}

TreeLayout::TreeLayout(BranchingVector t, std::uint64_t max_vertices) : shape_(std::move(t)) {
    const std::uint64_t n = vertex_count(shape_);
    if (n > max_vertices) {
        throw std::length_error("tree " + to_string(shape_) + " has " + std::to_string(n) +
                                " vertices, above the cap of " + std::to_string(max_vertices));
    }
    const auto sizes = level_sizes(shape_);
    level_.reserve(n);
    parent_.reserve(n);
    first_child_.assign(n, static_cast<int>(n));

    int begin = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        level_begin_.push_back(begin);
        begin += static_cast<int>(sizes[k]);
    }
    level_begin_.push_back(begin);

    for (std::size_t k = 0; k < sizes.size(); ++k) {
        for (std::uint64_t p = 0; p < sizes[k]; ++p) {
            const int v = level_begin_[k] + static_cast<int>(p);
            level_.push_back(static_cast<int>(k));
            if (k == 0) {
                parent_.push_back(-1);
            } else {
                const int b = shape_[static_cast<int>(k) - 1];
                parent_.push_back(level_begin_[k - 1] + static_cast<int>(p) / b);
            }
            if (k + 1 < sizes.size()) {
                first_child_[static_cast<std::size_t>(v)] =
                    level_begin_[k + 1] + static_cast<int>(p) * shape_[static_cast<int>(k)];
            }
        }
    }
}

std::vector<int> TreeLayout::neighbors(int v) const {
    std::vector<int> out;
    if (parent(v) >= 0) out.push_back(parent(v));
    for (int c = 0; c < child_count(v); ++c) out.push_back(first_child(v) + c);
    return out;
}

TreeIndex TreeLayout::index_of(int v) const {
    TreeIndex idx;
    while (parent(v) >= 0) {
        const int p = parent(v);
        idx.path.push_back(v - first_child(p));
        v = p;
    }
    std::reverse(idx.path.begin(), idx.path.end());
    return idx;
}

int TreeLayout::vertex_of(const TreeIndex& index) const {
    int v = 0;
    for (int step : index.path) {
        if (step < 0 || step >= child_count(v)) {
            throw std::out_of_range("tree index does not address a vertex");
        }
        v = first_child(v) + step;
    }
    return v;
}

std::vector<Stabilizer> stabilizer_generators(const BranchingVector& t, std::uint64_t max_vertices) {
    const TreeLayout layout(t, max_vertices);
    std::vector<Stabilizer> gens;
    gens.reserve(static_cast<std::size_t>(layout.size()));
    for (int v = 0; v < layout.size(); ++v) {
        Stabilizer s;
        s.x_support = layout.index_of(v);
        for (int u : layout.neighbors(v)) s.z_support.push_back(layout.index_of(u));
        gens.push_back(std::move(s));
    }
    return gens;
}

bool commutes(const Stabilizer& a, const Stabilizer& b) {
    // X on one side meeting Z on the other is the only anticommuting overlap.
    const auto contains = [](const std::vector<TreeIndex>& set, const TreeIndex& v) {
        return std::find(set.begin(), set.end(), v) != set.end();
    };
    int anticommuting = 0;
    if (a.x_support != b.x_support) {
        if (contains(b.z_support, a.x_support)) ++anticommuting;
        if (contains(a.z_support, b.x_support)) ++anticommuting;
    }
    return anticommuting % 2 == 0;
}

namespace {

void extend(std::vector<int>& prefix, std::uint64_t count, std::uint64_t level_size, int target_depth,
            std::uint64_t max_photons, const std::function<void(const BranchingVector&)>& visit) {
    if (static_cast<int>(prefix.size()) == target_depth) {
        visit(BranchingVector(prefix));
        return;
    }
    for (int b = 1;; ++b) {
        const std::uint64_t next_level = level_size * static_cast<std::uint64_t>(b);
        // Remaining levels add at least next_level vertices each.
        const auto remaining = static_cast<std::uint64_t>(target_depth - static_cast<int>(prefix.size()));
        if (count + next_level * remaining > max_photons) break;
        prefix.push_back(b);
        extend(prefix, count + next_level, next_level, target_depth, max_photons, visit);
        prefix.pop_back();
    }
}

}  // namespace

void for_each_tree(std::uint64_t max_photons, int max_depth,
                   const std::function<void(const BranchingVector&)>& visit) {
    for (int depth = 1; depth <= max_depth; ++depth) {
        std::vector<int> prefix;
        extend(prefix, 1, 1, depth, max_photons, visit);
    }
}

std::vector<BranchingVector> enumerate_trees(std::uint64_t max_photons, int max_depth) {
    std::vector<BranchingVector> out;
    for_each_tree(max_photons, max_depth, [&](const BranchingVector& t) { out.push_back(t); });
    return out;
}

}  // namespace treerep
