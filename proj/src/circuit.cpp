#include "ldpc_audit/circuit.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "ldpc_audit/errors.hpp"
#include "ldpc_audit/gf2.hpp"
#include "ldpc_audit/peel.hpp"

namespace ldpc_audit {

std::string to_string(Gate::Op op) {
    switch (op) {
        case Gate::Op::input: return "input";
        case Gate::Op::external: return "external";
        case Gate::Op::zero: return "zero";
        case Gate::Op::wire: return "wire";
        case Gate::Op::xor2: return "xor";
    }
    return "zero";
}

std::vector<std::size_t> Circuit::externals() const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < gates.size(); ++g)
        if (gates[g].op == Gate::Op::external) out.push_back(g);
    return out;
}

void validate(const Circuit& c) {
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
        const Gate& gate = c.gates[g];
        const bool unary = gate.op == Gate::Op::wire;
        const bool binary = gate.op == Gate::Op::xor2;
        if ((unary || binary) && gate.a >= g)
            throw WiringError("gate " + std::to_string(g) + " reads a later gate");
        if (binary && gate.b >= g)
            throw WiringError("gate " + std::to_string(g) + " reads a later gate");
    }
    for (std::size_t id : c.inputs)
        if (id >= c.gates.size() || c.gates[id].op != Gate::Op::input)
            throw WiringError("input list names gate " + std::to_string(id) +
                              ", which is not an input terminal");
    for (const auto& [pos, id] : c.outputs) {
        if (pos >= c.codeword_length)
            throw WiringError("output position " + std::to_string(pos) + " out of range");
        if (id >= c.gates.size())
            throw WiringError("output " + std::to_string(pos) + " names a missing gate");
    }
}

namespace {

BitVector run(const Circuit& c, std::span<const std::uint8_t> message,
              const std::map<std::size_t, std::uint8_t>* externals) {
    if (message.size() != c.inputs.size())
        throw DimensionError("message has " + std::to_string(message.size()) +
                             " bits, circuit has " + std::to_string(c.inputs.size()) + " inputs");
    std::vector<std::uint8_t> value(c.gates.size(), 0);
    std::vector<std::uint8_t> is_input(c.gates.size(), 0);
    for (std::size_t k = 0; k < c.inputs.size(); ++k) {
        value[c.inputs[k]] = message[k] & 1U;
        is_input[c.inputs[k]] = 1;
    }
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
        const Gate& gate = c.gates[g];
        switch (gate.op) {
            case Gate::Op::input:
                if (!is_input[g]) throw WiringError("input gate " + std::to_string(g) + " is not listed");
                break;
            case Gate::Op::external: {
                if (externals == nullptr)
                    throw WiringError("unresolved external terminal for variable " +
                                      std::to_string(gate.label + 1));
                auto it = externals->find(gate.label);
                if (it == externals->end())
                    throw WiringError("no value for external variable " +
                                      std::to_string(gate.label + 1));
                value[g] = it->second & 1U;
                break;
            }
            case Gate::Op::zero: value[g] = 0; break;
            case Gate::Op::wire: value[g] = value[gate.a]; break;
            case Gate::Op::xor2: value[g] = value[gate.a] ^ value[gate.b]; break;
        }
    }
    BitVector out(c.codeword_length, 0);
    for (const auto& [pos, id] : c.outputs) out[pos] = value[id];
    return out;
}

std::size_t add_gate(Circuit& c, Gate g) {
    c.gates.push_back(g);
    return c.gates.size() - 1;
}

/// Balanced fan-in-2 sum of the given nodes. Empty -> zero gate, single
/// node -> wire.
std::size_t xor_tree(Circuit& c, std::vector<std::size_t> nodes) {
    if (nodes.empty()) return add_gate(c, {Gate::Op::zero, 0, 0, 0});
    if (nodes.size() == 1) return add_gate(c, {Gate::Op::wire, nodes[0], 0, 0});
    while (nodes.size() > 1) {
        std::vector<std::size_t> next;
        for (std::size_t k = 0; k + 1 < nodes.size(); k += 2)
            next.push_back(add_gate(c, {Gate::Op::xor2, nodes[k], nodes[k + 1], 0}));
        if (nodes.size() % 2 == 1) next.push_back(nodes.back());
        nodes = std::move(next);
    }
    return nodes.front();
}

/// Emits the solve steps of `s` given nodes for its message bits; external
/// terminals are created on first use through `externals`.
void emit_steps(Circuit& c, const EncodeSchedule& s, std::map<std::size_t, std::size_t>& node,
                std::map<std::size_t, std::size_t>& externals) {
    auto lookup = [&](std::size_t var) {
        if (auto it = node.find(var); it != node.end()) return it->second;
        auto [it, fresh] = externals.try_emplace(var, 0);
        if (fresh) it->second = add_gate(c, {Gate::Op::external, 0, 0, var});
        return it->second;
    };
    for (const auto& step : s.solve_steps) {
        std::vector<std::size_t> ops;
        for (std::size_t v : step.operands) ops.push_back(lookup(v));
        node[step.variable] = xor_tree(c, std::move(ops));
    }
}

}  // namespace

BitVector evaluate(const Circuit& c, std::span<const std::uint8_t> message) {
    return run(c, message, nullptr);
}

BitVector evaluate(const Circuit& c, std::span<const std::uint8_t> message,
                   const std::map<std::size_t, std::uint8_t>& externals) {
    return run(c, message, &externals);
}

EncodeSchedule schedule_pseudo_tree(const BitMatrix& m, const SubSelection& sel) {
    const PeelTrace trace = strip(m, sel);
    if (!trace.empty())
        throw PreconditionError("selection is not a pseudo-tree: " +
                                std::to_string(trace.survivors.row_ids.size()) + " rows and " +
                                std::to_string(trace.survivors.col_ids.size()) +
                                " columns survive peeling");
    EncodeSchedule s;
    s.codeword_length = m.cols();
    s.message_bits = trace.dropped_isolated;
    std::ranges::sort(s.message_bits);
    s.unpaired_rows = trace.dropped_rows;

    std::vector<bool> inside(m.cols(), false);
    for (std::size_t j : sel.col_ids) inside[j] = true;
    std::set<std::size_t> ext;
    for (auto it = trace.pairs.rbegin(); it != trace.pairs.rend(); ++it) {
        EncodeSchedule::SolveStep step;
        step.variable = it->first;
        step.constraint = it->second;
        for (std::size_t j : m.row_support(it->second)) {
            if (j == it->first) continue;
            step.operands.push_back(j);
            if (!inside[j]) ext.insert(j);
        }
        s.solve_steps.push_back(std::move(step));
    }
    s.externals.assign(ext.begin(), ext.end());
    return s;
}

Circuit build_circuit(const EncodeSchedule& schedule) {
    Circuit c;
    c.codeword_length = schedule.codeword_length;
    std::map<std::size_t, std::size_t> node;
    std::map<std::size_t, std::size_t> externals;
    for (std::size_t v : schedule.message_bits) {
        node[v] = add_gate(c, {Gate::Op::input, 0, 0, v});
        c.inputs.push_back(node[v]);
    }
    emit_steps(c, schedule, node, externals);
    for (const auto& [v, id] : node) c.outputs[v] = id;
    return c;
}

namespace {

/// Inverse of a square invertible matrix by Gauss-Jordan on [A | I].
BitMatrix inverse(const BitMatrix& a) {
    const std::size_t n = a.rows();
    BitMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j : a.row_support(i)) aug.set(i, j);
        aug.set(i, n + i);
    }
    const RowEchelon e = row_echelon(aug);
    if (e.pivot_cols.size() < n || e.pivot_cols[n - 1] != n - 1)
        throw PreconditionError("correction system is singular");
    BitMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.set(i, j, e.reduced.get(i, n + j));
    return inv;
}

}  // namespace

ComponentCircuit encode_component(const BitMatrix& rows, std::span<const std::size_t> cols,
                                  std::size_t fold_max_k) {
    const std::vector<std::size_t> col_ids(cols.begin(), cols.end());
    const SubSelection whole{SubSelection::all(rows.rows(), 0).row_ids, col_ids};
    whole.validate(rows);

    ComponentCircuit out;
    // Cut positions are local to `whole`, which lists every row in order.
    const BitMatrix local = submatrix(rows, whole);
    out.cut_rows = pseudo_tree_cut(local, SubSelection::all(local), fold_max_k);
    std::ranges::sort(out.cut_rows);

    SubSelection kept{complement(out.cut_rows, rows.rows()), col_ids};
    const EncodeSchedule sched = schedule_pseudo_tree(rows, kept);

    std::vector<std::size_t> extra = out.cut_rows;
    extra.insert(extra.end(), sched.unpaired_rows.begin(), sched.unpaired_rows.end());
    std::ranges::sort(extra);
    out.cut_rows = extra;

    const std::size_t nu = sched.message_bits.size();
    std::set<std::size_t> ext_set(sched.externals.begin(), sched.externals.end());
    std::vector<bool> inside(rows.cols(), false);
    for (std::size_t j : col_ids) inside[j] = true;
    for (std::size_t r : extra)
        for (std::size_t j : rows.row_support(r))
            if (!inside[j]) ext_set.insert(j);
    const std::vector<std::size_t> ext(ext_set.begin(), ext_set.end());
    const std::size_t ne = ext.size();

    // Symbolic values of every variable: coefficients over message bits (u)
    // followed by coefficients over externals (e).
    std::map<std::size_t, BitVector> sym;
    for (std::size_t k = 0; k < nu; ++k) {
        BitVector v(nu + ne, 0);
        v[k] = 1;
        sym[sched.message_bits[k]] = std::move(v);
    }
    for (std::size_t k = 0; k < ne; ++k) {
        BitVector v(nu + ne, 0);
        v[nu + k] = 1;
        sym[ext[k]] = std::move(v);
    }
    for (const auto& step : sched.solve_steps) {
        BitVector v(nu + ne, 0);
        for (std::size_t o : step.operands)
            for (std::size_t k = 0; k < v.size(); ++k) v[k] ^= sym.at(o)[k];
        sym[step.variable] = std::move(v);
    }

    // Each extra row as [R | S]: its value given u and e.
    std::vector<BitVector> rs;
    for (std::size_t r : extra) {
        BitVector v(nu + ne, 0);
        for (std::size_t j : rows.row_support(r))
            for (std::size_t k = 0; k < v.size(); ++k) v[k] ^= sym.at(j)[k];
        rs.push_back(std::move(v));
    }

    // Q: extra rows whose message parts are independent, chosen greedily.
    std::vector<std::size_t> q;
    BitMatrix rq(0, nu);
    BitMatrix rsq(0, nu + ne);
    for (std::size_t t = 0; t < extra.size(); ++t) {
        BitVector rpart(rs[t].begin(), rs[t].begin() + static_cast<std::ptrdiff_t>(nu));
        BitMatrix trial = rq;
        trial.append_row(rpart);
        if (rank(trial) > rq.rows()) {
            rq = std::move(trial);
            rsq.append_row(rs[t]);
            q.push_back(t);
            out.corrected_rows.push_back(extra[t]);
        } else {
            BitMatrix with = rsq;
            with.append_row(rs[t]);
            if (rank(with) > rsq.rows())
                out.unenforced_rows.push_back(extra[t]);
            else
                out.redundant_rows.push_back(extra[t]);
        }
    }

    Circuit& c = out.circuit;
    c.codeword_length = rows.cols();
    std::map<std::size_t, std::size_t> externals;

    if (q.empty()) {
        std::map<std::size_t, std::size_t> node;
        for (std::size_t v : sched.message_bits) {
            node[v] = add_gate(c, {Gate::Op::input, 0, 0, v});
            c.inputs.push_back(node[v]);
        }
        emit_steps(c, sched, node, externals);
        for (std::size_t j : col_ids) c.outputs[j] = node.at(j);
        return out;
    }

    const std::vector<std::size_t> pivots = row_echelon(rq).pivot_cols;
    std::vector<bool> is_pivot(nu, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    BitMatrix rqp(q.size(), q.size());
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = 0; b < pivots.size(); ++b) rqp.set(a, b, rq.get(a, pivots[b]));
    const BitMatrix inv = inverse(rqp);

    std::map<std::size_t, std::size_t> free_input;
    for (std::size_t k = 0; k < nu; ++k) {
        if (is_pivot[k]) continue;
        const std::size_t v = sched.message_bits[k];
        free_input[v] = add_gate(c, {Gate::Op::input, 0, 0, v});
        c.inputs.push_back(free_input[v]);
    }
    auto lookup_ext = [&](std::size_t var) {
        auto [it, fresh] = externals.try_emplace(var, 0);
        if (fresh) it->second = add_gate(c, {Gate::Op::external, 0, 0, var});
        return it->second;
    };

    // Pass 1: pivot message bits held at zero.
    std::map<std::size_t, std::size_t> first = free_input;
    const std::size_t zero = add_gate(c, {Gate::Op::zero, 0, 0, 0});
    for (std::size_t p : pivots) first[sched.message_bits[p]] = zero;
    emit_steps(c, sched, first, externals);

    // Syndromes of the corrected rows, then u_P = R_QP^{-1} y.
    std::vector<std::size_t> syndrome;
    for (std::size_t t : q) {
        std::vector<std::size_t> terms;
        for (std::size_t j : rows.row_support(extra[t]))
            terms.push_back(inside[j] ? first.at(j) : lookup_ext(j));
        syndrome.push_back(xor_tree(c, std::move(terms)));
    }
    std::map<std::size_t, std::size_t> second = free_input;
    for (std::size_t b = 0; b < pivots.size(); ++b) {
        std::vector<std::size_t> terms;
        for (std::size_t a = 0; a < q.size(); ++a)
            if (inv.get(b, a)) terms.push_back(syndrome[a]);
        second[sched.message_bits[pivots[b]]] = xor_tree(c, std::move(terms));
    }

    // Pass 2 with the corrected message.
    emit_steps(c, sched, second, externals);
    for (std::size_t j : col_ids) c.outputs[j] = second.at(j);
    return out;
}

Circuit compose(std::span<const Circuit> parts) {
    Circuit out;
    std::map<std::size_t, std::size_t> produced;
    for (const Circuit& part : parts) {
        out.codeword_length = std::max(out.codeword_length, part.codeword_length);
        std::vector<std::size_t> remap(part.gates.size());
        for (std::size_t g = 0; g < part.gates.size(); ++g) {
            Gate gate = part.gates[g];
            switch (gate.op) {
                case Gate::Op::external: {
                    auto it = produced.find(gate.label);
                    if (it == produced.end())
                        throw WiringError("variable " + std::to_string(gate.label + 1) +
                                          " is read before any component produces it");
                    remap[g] = it->second;
                    continue;
                }
                case Gate::Op::wire: gate.a = remap[gate.a]; break;
                case Gate::Op::xor2:
                    gate.a = remap[gate.a];
                    gate.b = remap[gate.b];
                    break;
                default: break;
            }
            remap[g] = add_gate(out, gate);
        }
        for (std::size_t id : part.inputs) out.inputs.push_back(remap[id]);
        for (const auto& [pos, id] : part.outputs) {
            if (!out.outputs.emplace(pos, remap[id]).second)
                throw DimensionError("codeword position " + std::to_string(pos + 1) +
                                     " is produced twice");
            produced[pos] = remap[id];
        }
    }
    return out;
}

EncoderBuild build_encoder(const BitMatrix& m, const DecompositionReport& report) {
    EncoderBuild build;
    std::vector<Circuit> circuits;
    for (const Component& comp : report.components) {
        const BitMatrix rows = component_constraints(m, report, comp);
        ComponentCircuit cc = encode_component(rows, comp.selection.col_ids);
        circuits.push_back(cc.circuit);
        build.parts.push_back(std::move(cc));
    }
    build.circuit = compose(circuits);
    build.circuit.codeword_length = m.cols();
    return build;
}

EncoderVerdict verify_encoder(const BitMatrix& m, const Circuit& c, const VerifyMode& mode) {
    if (c.codeword_length != m.cols())
        throw DimensionError("circuit writes " + std::to_string(c.codeword_length) +
                             " positions, matrix has " + std::to_string(m.cols()) + " columns");
    EncoderVerdict v;
    v.inputs = c.input_count();
    v.kernel_dim = m.cols() - rank(m);

    BitMatrix image(0, m.cols());
    for (std::size_t k = 0; k < v.inputs; ++k) {
        BitVector e(v.inputs, 0);
        e[k] = 1;
        image.append_row(evaluate(c, e));
    }
    v.image_rank = rank(image);
    v.injective = v.image_rank == v.inputs;
    v.dimension_match = v.inputs == v.kernel_dim;

    auto check = [&](const BitVector& msg) {
        ++v.messages_tested;
        BitVector x = evaluate(c, msg);
        if (in_kernel(m, x)) return true;
        v.witness = msg;
        v.witness_output = std::move(x);
        return false;
    };

    v.membership = true;
    if (mode.kind == VerifyMode::Kind::exhaustive) {
        if (v.inputs > 20)
            throw PreconditionError("exhaustive verification needs at most 20 inputs, circuit has " +
                                    std::to_string(v.inputs));
        const std::uint64_t total = std::uint64_t{1} << v.inputs;
        BitVector msg(v.inputs, 0);
        for (std::uint64_t w = 0; w < total; ++w) {
            for (std::size_t k = 0; k < v.inputs; ++k) msg[k] = (w >> k) & 1U;
            if (!check(msg)) {
                v.membership = false;
                break;
            }
        }
    } else {
        std::mt19937_64 rng(mode.seed);
        BitVector msg(v.inputs, 0);
        for (std::size_t s = 0; s < mode.samples; ++s) {
            for (auto& b : msg) b = static_cast<std::uint8_t>(rng() & 1U);
            if (!check(msg)) {
                v.membership = false;
                break;
            }
        }
    }
    v.encodes = v.membership && v.injective && v.dimension_match;
    return v;
}

}  // namespace ldpc_audit
