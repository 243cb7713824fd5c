#include "beliefsim/circuit.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace beliefsim {

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            throw std::invalid_argument("circuit parse error: expected '" + std::string(1, c) +
                                        "' at position " + std::to_string(pos) + " in " + text);
        ++pos;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos)
            throw std::invalid_argument("circuit parse error: expected identifier at position " +
                                        std::to_string(pos) + " in " + text);
        return text.substr(start, pos - start);
    }
};

}  // namespace

Circuit Circuit::parse(const std::string& text, int num_inputs) {
    if (num_inputs <= 0) throw std::invalid_argument("Circuit: num_inputs must be positive");
    Circuit c;
    c.num_inputs_ = num_inputs;
    c.text_ = text;

    Parser p{text};
    // recursive descent over prefix terms
    std::function<int()> term = [&]() -> int {
        std::string name = p.ident();
        Node node;
        if (name == "AND" || name == "OR" || name == "XOR" || name == "NOT") {
            node.op = name == "AND"  ? Op::kAnd
                      : name == "OR" ? Op::kOr
                      : name == "XOR" ? Op::kXor
                                      : Op::kNot;
            p.expect('(');
            node.children.push_back(term());
            while (p.peek() == ',') {
                p.expect(',');
                node.children.push_back(term());
            }
            p.expect(')');
            if (node.op == Op::kNot && node.children.size() != 1)
                throw std::invalid_argument("circuit parse error: NOT takes one operand: " + text);
            if (node.op != Op::kNot && node.children.size() < 2)
                throw std::invalid_argument("circuit parse error: " + name +
                                            " takes at least two operands: " + text);
        } else if (name.size() >= 2 && name[0] == 'x') {
            node.op = Op::kInput;
            node.input = std::stoi(name.substr(1));
            if (node.input < 0 || node.input >= num_inputs)
                throw std::invalid_argument("circuit parse error: input " + name +
                                            " out of range for " + std::to_string(num_inputs) +
                                            " inputs");
        } else {
            throw std::invalid_argument("circuit parse error: unknown token '" + name + "' in " +
                                        text);
        }
        c.nodes_.push_back(std::move(node));
        return static_cast<int>(c.nodes_.size()) - 1;
    };

    c.root_ = term();
    p.skip_ws();
    if (p.pos != text.size())
        throw std::invalid_argument("circuit parse error: trailing input in " + text);
    return c;
}

int Circuit::eval_node(int node, const std::vector<int>& bits) const {
    const Node& n = nodes_[node];
    switch (n.op) {
        case Op::kInput:
            return bits[static_cast<std::size_t>(n.input)];
        case Op::kNot:
            return 1 - eval_node(n.children[0], bits);
        case Op::kAnd: {
            for (int ch : n.children)
                if (eval_node(ch, bits) == 0) return 0;
            return 1;
        }
        case Op::kOr: {
            for (int ch : n.children)
                if (eval_node(ch, bits) == 1) return 1;
            return 0;
        }
        case Op::kXor: {
            int acc = 0;
            for (int ch : n.children) acc ^= eval_node(ch, bits);
            return acc;
        }
    }
    return 0;
}

int Circuit::eval(const std::vector<int>& bits) const {
    if (static_cast<int>(bits.size()) != num_inputs_)
        throw std::invalid_argument("Circuit::eval: arity mismatch");
    for (int b : bits)
        if (b != 0 && b != 1) throw std::invalid_argument("Circuit::eval: bits must be 0/1");
    return eval_node(root_, bits);
}

std::vector<int> Circuit::truth_table() const {
    const std::size_t rows = std::size_t{1} << num_inputs_;
    std::vector<int> table(rows);
    std::vector<int> bits(static_cast<std::size_t>(num_inputs_));
    for (std::size_t r = 0; r < rows; ++r) {
        for (int i = 0; i < num_inputs_; ++i) bits[static_cast<std::size_t>(i)] = (r >> i) & 1;
        table[r] = eval_node(root_, bits);
    }
    return table;
}

}  // namespace beliefsim
