#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace treerep {

/// Shape of a regular tree: `branches[k]` is the number of children of every
/// vertex on level k (the root is level 0). `[4,14,4]` has 1+4+56+224 vertices.
///
/// The depth is the number of entries, i.e. the number of levels below the
/// root, so `[b0]` is a depth-1 tree (a star) and `[4,14,4]` has depth 3.
class BranchingVector {
public:
    BranchingVector() = default;
    /// Throws std::invalid_argument if empty or any entry is < 1.
    explicit BranchingVector(std::vector<int> branches);
    BranchingVector(std::initializer_list<int> branches)
        : BranchingVector(std::vector<int>(branches)) {}

    int depth() const { return static_cast<int>(branches_.size()); }
    int operator[](int level) const { return branches_[static_cast<std::size_t>(level)]; }
    /// Children per vertex on `level`; zero beyond the leaves.
    int branching_at(int level) const {
        return level < depth() ? branches_[static_cast<std::size_t>(level)] : 0;
    }
    const std::vector<int>& branches() const { return branches_; }

    friend bool operator==(const BranchingVector&, const BranchingVector&) = default;
    friend auto operator<=>(const BranchingVector& a, const BranchingVector& b) {
        return a.branches_ <=> b.branches_;
    }

private:
    std::vector<int> branches_;
};

/// Total vertex count including the root, 1 + b0 + b0*b1 + ... .
/// Throws std::overflow_error if the count does not fit in 64 bits.
std::uint64_t vertex_count(const BranchingVector& t);

/// Number of vertices on each level, `[1, b0, b0*b1, ...]` (depth+1 entries).
std::vector<std::uint64_t> level_sizes(const BranchingVector& t);

/// "[4,14,4]" form used in all text I/O.
std::string to_string(const BranchingVector& t);

/// Parses "[4,14,4]" (whitespace tolerated, brackets optional).
/// Throws std::invalid_argument on malformed input or entries < 1.
BranchingVector parse_branching_vector(std::string_view text);

/// Canonical vertex address: the child index taken at each step from the root.
struct TreeIndex {
    std::vector<int> path;

    int level() const { return static_cast<int>(path.size()); }
    friend bool operator==(const TreeIndex&, const TreeIndex&) = default;
    friend auto operator<=>(const TreeIndex&, const TreeIndex&) = default;
};

/// Breadth-first numbering of the vertices of a tree. Vertex 0 is the root,
/// then level 1 left to right, and so on; siblings are contiguous.
class TreeLayout {
public:
    /// Throws std::length_error if the tree has more than `max_vertices`.
    explicit TreeLayout(BranchingVector t, std::uint64_t max_vertices = 1u << 24);

    const BranchingVector& shape() const { return shape_; }
    int size() const { return static_cast<int>(parent_.size()); }
    int level(int v) const { return level_[static_cast<std::size_t>(v)]; }
    int parent(int v) const { return parent_[static_cast<std::size_t>(v)]; }
    int first_child(int v) const { return first_child_[static_cast<std::size_t>(v)]; }
    int child_count(int v) const { return shape_.branching_at(level(v)); }
    /// First vertex on `level` (levels 0..depth+1; depth+1 yields size()).
    int level_begin(int level) const { return level_begin_[static_cast<std::size_t>(level)]; }

    std::vector<int> neighbors(int v) const;
    TreeIndex index_of(int v) const;
    /// Throws std::out_of_range if the path does not address a vertex.
    int vertex_of(const TreeIndex& index) const;

private:
    BranchingVector shape_;
    std::vector<int> level_;
    std::vector<int> parent_;
    std::vector<int> first_child_;
    std::vector<int> level_begin_;
};

/// K_v = X_v Z_{N(v)}.
struct Stabilizer {
    TreeIndex x_support;
    std::vector<TreeIndex> z_support;
};

/// One generator per vertex in breadth-first order. Throws std::length_error
/// if the tree has more than `max_vertices` vertices.
std::vector<Stabilizer> stabilizer_generators(const BranchingVector& t, std::uint64_t max_vertices);

/// Pauli strings commute iff they anticommute on an even number of sites.
bool commutes(const Stabilizer& a, const Stabilizer& b);

/// Every branching vector with depth <= max_depth and vertex_count <= max_photons,
/// ordered by depth and then lexicographically by branches.
std::vector<BranchingVector> enumerate_trees(std::uint64_t max_photons, int max_depth);

/// Same order as enumerate_trees without materializing the list.
void for_each_tree(std::uint64_t max_photons, int max_depth,
                   const std::function<void(const BranchingVector&)>& visit);

}  // namespace treerep
