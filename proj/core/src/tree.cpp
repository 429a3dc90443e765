#include "eduseg/tree.hpp"

#include "eduseg/errors.hpp"

namespace eduseg {

ParseTree::ParseTree(std::vector<TreeNode> nodes, std::vector<int> leaf_nodes)
    : nodes_(std::move(nodes)), leaf_nodes_(std::move(leaf_nodes)) {}

const TreeNode& ParseTree::node(int id) const {
    check_node(id);
    return nodes_[id];
}

void ParseTree::check_node(int id) const {
    if (id < 0 || id >= static_cast<int>(nodes_.size()))
        throw MembershipError("node handle " + std::to_string(id) +
                              " does not belong to this tree");
}

void ParseTree::check_leaf_index(int i) const {
    if (i < 1 || i > leaf_count())
        throw IndexError("leaf index " + std::to_string(i) + " out of range [1," +
                         std::to_string(leaf_count()) + "]");
}

int ParseTree::preterminal_of(int i) const {
    check_leaf_index(i);
    return leaf_nodes_[i - 1];
}

int ParseTree::largest_constituent_starting_at(int i) const {
    check_leaf_index(i);
    // Nodes starting at i form a chain from the preterminal upward.
    int best = leaf_nodes_[i - 1];
    int cur = nodes_[best].parent;
    while (cur >= 0 && nodes_[cur].first == i) {
        best = cur;
        cur = nodes_[cur].parent;
    }
    return best;
}

int ParseTree::largest_constituent_ending_at(int i) const {
    check_leaf_index(i);
    int best = leaf_nodes_[i - 1];
    int cur = nodes_[best].parent;
    while (cur >= 0 && nodes_[cur].last == i) {
        best = cur;
        cur = nodes_[cur].parent;
    }
    return best;
}

int ParseTree::node_depth(int id) const {
    check_node(id);
    return nodes_[id].depth;
}

std::string ParseTree::production_rule(int id) const {
    check_node(id);
    const TreeNode& n = nodes_[id];
    std::string rule = n.label + " ->";
    if (n.children.empty()) {
        rule += " <w>";
    } else {
        for (int c : n.children) rule += " " + nodes_[c].label;
    }
    return rule;
}

int ParseTree::lowest_spanning_subtree(int i, int j) const {
    check_leaf_index(i);
    check_leaf_index(j);
    if (i > j) throw IndexError("empty span for lowest_spanning_subtree");
    int cur = 0;
    for (;;) {
        bool descended = false;
        for (int c : nodes_[cur].children) {
            if (nodes_[c].first <= i && j <= nodes_[c].last) {
                cur = c;
                descended = true;
                break;
            }
        }
        if (!descended) return cur;
    }
}

int ParseTree::count_constituents_over(int i, int j) const {
    if (i > j) return 0;
    check_leaf_index(i);
    check_leaf_index(j);
    int count = 0;
    int cur = i;
    while (cur <= j) {
        // Widest constituent starting at cur that stays inside [i, j]; the
        // preterminal always qualifies, so the walk makes progress.
        int pick = leaf_nodes_[cur - 1];
        int up = nodes_[pick].parent;
        while (up >= 0 && nodes_[up].first == cur && nodes_[up].last <= j) {
            pick = up;
            up = nodes_[up].parent;
        }
        cur = nodes_[pick].last + 1;
        ++count;
    }
    return count;
}

namespace {

void serialize_node(const std::vector<TreeNode>& nodes, int id, std::string& out) {
    const TreeNode& n = nodes[id];
    out += '(';
    out += n.label;
    if (n.children.empty()) {
        out += ' ';
        out += n.word;
    } else {
        for (int c : n.children) {
            out += ' ';
            serialize_node(nodes, c, out);
        }
    }
    out += ')';
}

}  // namespace

std::string ParseTree::serialize() const {
    if (nodes_.empty()) return "";
    std::string out;
    serialize_node(nodes_, 0, out);
    return out;
}

}  // namespace eduseg
