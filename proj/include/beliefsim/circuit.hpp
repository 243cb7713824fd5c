#pragma once

#include <string>
#include <vector>

namespace beliefsim {

// Boolean circuit candidate: an expression tree over AND/OR/XOR/NOT and input
// variables x0..x{n-1}, serialized as nested prefix text, e.g.
// "OR(AND(x0,x1),x2)". AND/OR/XOR take two or more operands (XOR is parity),
// NOT exactly one.
class Circuit {
public:
    static Circuit parse(const std::string& text, int num_inputs);

    int eval(const std::vector<int>& bits) const;  // bits.size() must equal num_inputs
    int num_inputs() const { return num_inputs_; }
    const std::string& text() const { return text_; }

    // full truth table, 2^n entries ordered by input bit pattern (x0 = LSB)
    std::vector<int> truth_table() const;

private:
    enum class Op { kInput, kNot, kAnd, kOr, kXor };
    struct Node {
        Op op = Op::kInput;
        int input = -1;
        std::vector<int> children;
    };

    int eval_node(int node, const std::vector<int>& bits) const;

    std::vector<Node> nodes_;
    int root_ = -1;
    int num_inputs_ = 0;
    std::string text_;
};

}  // namespace beliefsim
