#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldpc_audit/bit_matrix.hpp"
#include "ldpc_audit/decompose.hpp"

namespace ldpc_audit {

/// One node of an XOR circuit. Operands always refer to earlier gates.
struct Gate {
    enum class Op {
        input,     ///< message bit; `label` is the variable it carries
        external,  ///< value of `label` produced by another circuit
        zero,      ///< constant 0
        wire,      ///< copy of gate a
        xor2,      ///< gate a + gate b
    };
    Op op = Op::zero;
    std::size_t a = 0;
    std::size_t b = 0;
    std::size_t label = 0;

    friend bool operator==(const Gate&, const Gate&) = default;
};

std::string to_string(Gate::Op op);

/// Directed acyclic XOR circuit with fan-in at most 2, stored in
/// topological order.
struct Circuit {
    std::vector<Gate> gates;
    /// Gate ids of the message-bit terminals, in message order.
    std::vector<std::size_t> inputs;
    /// Codeword position -> gate id.
    std::map<std::size_t, std::size_t> outputs;
    std::size_t codeword_length = 0;

    [[nodiscard]] std::size_t size() const { return gates.size(); }
    [[nodiscard]] std::size_t input_count() const { return inputs.size(); }
    /// Gate ids of unresolved external terminals.
    [[nodiscard]] std::vector<std::size_t> externals() const;

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Structural check: operands precede their gate, inputs are input gates,
/// outputs point at existing gates inside the codeword range. Throws
/// WiringError on the first violation.
void validate(const Circuit& c);

/// Evaluates every gate. Positions without an output stay 0. Throws
/// DimensionError on a message of the wrong length and WiringError when the
/// circuit still has external terminals.
BitVector evaluate(const Circuit& c, std::span<const std::uint8_t> message);

/// As above, with values for the external terminals keyed by variable.
BitVector evaluate(const Circuit& c, std::span<const std::uint8_t> message,
                   const std::map<std::size_t, std::uint8_t>& externals);

/// Back-substitution order for a pseudo-tree.
struct EncodeSchedule {
    struct SolveStep {
        std::size_t variable = 0;
        std::size_t constraint = 0;
        /// Other columns of the constraint: message bits, externals or
        /// variables solved by earlier steps.
        std::vector<std::size_t> operands;
    };
    std::vector<std::size_t> message_bits;
    std::vector<SolveStep> solve_steps;
    /// Columns outside the selection read by some step, ascending.
    std::vector<std::size_t> externals;
    /// Rows with no support inside the selection; no step enforces them.
    std::vector<std::size_t> unpaired_rows;
    std::size_t codeword_length = 0;
};

/// Reverse peel order of strip(m, sel). Operands are taken from the full
/// rows of `m`, so columns outside `sel` appear as externals. Throws
/// PreconditionError when the selection is not a pseudo-tree.
EncodeSchedule schedule_pseudo_tree(const BitMatrix& m, const SubSelection& sel);

/// Every solve step becomes a balanced XOR tree over its operands.
Circuit build_circuit(const EncodeSchedule& schedule);

/// Circuit for one decomposition component and what it does not enforce.
struct ComponentCircuit {
    Circuit circuit;
    /// Rows taken out to leave a pseudo-tree (component-local row numbers).
    std::vector<std::size_t> cut_rows;
    /// Cut rows restored exactly by the correction pass.
    std::vector<std::size_t> corrected_rows;
    /// Cut rows implied by the others whatever the external values.
    std::vector<std::size_t> redundant_rows;
    /// Cut rows that hold only for some external values.
    std::vector<std::size_t> unenforced_rows;
};

/// Encoder for the system `rows` (full-width constraints) over the columns
/// `cols`. Columns outside `cols` read by the rows become externals. The
/// circuit has exactly cols - rank(rows restricted to cols) inputs and every
/// solution of the system with the externals fixed is in its image.
ComponentCircuit encode_component(const BitMatrix& rows, std::span<const std::size_t> cols,
                                  std::size_t fold_max_k = 2);

/// Joins component circuits in order: inputs are concatenated, each
/// external terminal is wired to the output of an earlier circuit. Throws
/// WiringError when no earlier circuit produces the variable and
/// DimensionError when two circuits claim the same output.
Circuit compose(std::span<const Circuit> parts);

struct EncoderBuild {
    Circuit circuit;
    std::vector<ComponentCircuit> parts;
};

/// Component-by-component encoder for a decomposition of `m`.
EncoderBuild build_encoder(const BitMatrix& m, const DecompositionReport& report);

struct VerifyMode {
    enum class Kind { exhaustive, sampled };
    Kind kind = Kind::exhaustive;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    static VerifyMode exhaustive() { return {}; }
    static VerifyMode sampled(std::size_t count, std::uint64_t seed) {
        return {Kind::sampled, count, seed};
    }
};

struct EncoderVerdict {
    bool encodes = false;
    bool membership = false;
    bool injective = false;
    bool dimension_match = false;
    std::size_t inputs = 0;
    std::size_t image_rank = 0;
    std::size_t kernel_dim = 0;
    std::size_t messages_tested = 0;
    /// First message found whose output violates M x = 0.
    std::optional<BitVector> witness;
    std::optional<BitVector> witness_output;
};

/// Membership of the tested images in Ker(m), injectivity of the linear
/// map and input count = dim Ker(m). Exhaustive mode walks the messages in
/// increasing binary order (bit i of the counter = input i) and throws
/// PreconditionError above 20 inputs.
EncoderVerdict verify_encoder(const BitMatrix& m, const Circuit& c,
                              const VerifyMode& mode = VerifyMode::exhaustive());

}  // namespace ldpc_audit
