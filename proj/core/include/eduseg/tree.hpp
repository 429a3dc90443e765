#ifndef EDUSEG_TREE_HPP
#define EDUSEG_TREE_HPP

#include <string>
#include <vector>

namespace eduseg {

/// One constituent in a parse tree. Preterminals carry the surface word;
/// internal nodes have children. Spans are 1-based inclusive leaf indices.
struct TreeNode {
    std::string label;
    int first = 0;
    int last = 0;
    int parent = -1;          // -1 for the root
    int depth = 0;            // edges from the root
    std::vector<int> children;
    std::string word;         // non-empty iff preterminal
};

/// Constituency tree over one sentence. Nodes are addressed by integer
/// handles; handle 0 is the root. Immutable after construction.
class ParseTree {
public:
    ParseTree() = default;
    ParseTree(std::vector<TreeNode> nodes, std::vector<int> leaf_nodes);

    int leaf_count() const { return static_cast<int>(leaf_nodes_.size()); }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int root() const { return 0; }

    const TreeNode& node(int id) const;

    /// Preterminal node covering leaf i (1-based).
    int preterminal_of(int i) const;

    /// Highest node whose span starts at leaf i. Ties on equal span are
    /// broken toward the node nearest the root, so a unary chain resolves
    /// to its topmost member.
    int largest_constituent_starting_at(int i) const;

    /// Mirror image on span end.
    int largest_constituent_ending_at(int i) const;

    /// Edges from the root to the node.
    int node_depth(int id) const;

    /// "PARENT -> CHILD1 CHILD2 ...". Preterminals yield "POS -> <w>".
    std::string production_rule(int id) const;

    /// Deepest node whose span contains [i, j].
    int lowest_spanning_subtree(int i, int j) const;

    /// Size of the greedy left-to-right maximal-constituent cover of [i, j];
    /// 0 for an empty range (i > j).
    int count_constituents_over(int i, int j) const;

    /// Bracketed rendering; parse_bracketed_tree() inverts it.
    std::string serialize() const;

private:
    void check_leaf_index(int i) const;
    void check_node(int id) const;

    std::vector<TreeNode> nodes_;
    std::vector<int> leaf_nodes_;  // leaf k (1-based) -> node handle at [k-1]
};

}  // namespace eduseg

#endif
