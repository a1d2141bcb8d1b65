"""Gate-level adder models: ripple-carry, carry-save trees and block CLA.

Each operation returns both the exact arithmetic result and a
:class:`GateCost` from a declared unit-gate model (any 2-input gate is one
gate and one delay unit, a full adder is 5 gates and 2 delays, and so on).
The cost constants live in :class:`CostModel` so they can be recalibrated
without touching the structure; they are a reproducible stand-in for
synthesis cell counts and nanoseconds, which a software model cannot
produce.

The "cla" flavour is a standard block carry-lookahead adder: bitwise
generate/propagate, 4-bit lookahead blocks, and further 4-ary lookahead
levels across blocks. Carries are computed from the flat AND-OR lookahead
expansion, not from a serial recurrence, so its agreement with
:func:`ripple_add` (and with plain integer addition) is a meaningful
cross-check rather than the same code twice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields
from typing import Sequence

__all__ = [
    "AdderKind",
    "BitVector",
    "CostModel",
    "DEFAULT_COST_MODEL",
    "GateCost",
    "adder_tree_cost",
    "adder_tree_sum",
    "cla_add",
    "cla_cost",
    "csa_compress",
    "csa_stage_count",
    "ripple_add",
    "ripple_cost",
]


class AdderKind(enum.Enum):
    """Carry-propagation strategies the datapath can be configured with."""

    RIPPLE = "ripple"
    CSA_TREE = "csa"
    CLA = "cla"


@dataclass(frozen=True)
class GateCost:
    """Unit-gate count and critical-path depth of a piece of logic."""

    gate_count: int
    depth: int

    def __post_init__(self) -> None:
        if self.gate_count < 0 or self.depth < 0:
            raise ValueError("costs cannot be negative")

    def to_dict(self) -> dict:
        return {"gate_count": self.gate_count, "depth": self.depth}


ZERO_COST = GateCost(0, 0)


@dataclass(frozen=True)
class CostModel:
    """Declared unit-gate constants; every cost in the package derives from these."""

    fa_gates: int = 5           # full adder
    fa_depth: int = 2
    cla_gp_gates_per_bit: int = 3   # bitwise generate/propagate stage
    cla_gp_depth: int = 1
    cla_block_gates: int = 14   # one 4-bit lookahead block
    cla_block_depth: int = 2
    cla_block_size: int = 4
    cla_sum_gates_per_bit: int = 1  # final sum XOR
    cla_sum_depth: int = 1
    mux2_gates: int = 4         # 2:1 multiplexer, per bit
    mux2_depth: int = 2

    @classmethod
    def from_dict(cls, data: dict) -> "CostModel":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown cost-model keys: {sorted(unknown)}")
        bad = [k for k, v in data.items() if not isinstance(v, int) or v < 0]
        if bad:
            raise ValueError(f"cost-model values must be non-negative integers: {bad}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True)
class BitVector:
    """A signed integer pinned to a two's-complement width."""

    width: int
    value: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("width must be at least 1")
        bound = 1 << (self.width - 1)
        if not (-bound <= self.value < bound):
            raise ValueError(
                f"value {self.value} does not fit in {self.width} signed bits"
            )

    @classmethod
    def from_unsigned(cls, width: int, bits: int) -> "BitVector":
        bits &= (1 << width) - 1
        if bits >= 1 << (width - 1):
            bits -= 1 << width
        return cls(width, bits)

    @property
    def unsigned(self) -> int:
        return self.value & ((1 << self.width) - 1)

    def bit(self, i: int) -> int:
        if not (0 <= i < self.width):
            raise IndexError(f"bit {i} out of range for width {self.width}")
        return (self.value >> i) & 1

    def extend(self, width: int) -> "BitVector":
        """Sign-extend to a wider vector."""
        if width < self.width:
            raise ValueError("cannot extend to a narrower width")
        return BitVector(width, self.value)


def _require_equal_widths(a: BitVector, b: BitVector) -> int:
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    return a.width


def ripple_cost(width: int, model: CostModel = DEFAULT_COST_MODEL) -> GateCost:
    return GateCost(width * model.fa_gates, width * model.fa_depth)


def ripple_add(
    a: BitVector,
    b: BitVector,
    carry_in: int = 0,
    model: CostModel = DEFAULT_COST_MODEL,
) -> tuple[BitVector, int, GateCost]:
    """Chain of full adders; two's-complement sum modulo 2^width plus carry-out."""
    width = _require_equal_widths(a, b)
    carry = carry_in & 1
    bits = 0
    for i in range(width):
        ai = a.bit(i)
        bi = b.bit(i)
        axb = ai ^ bi
        bits |= (axb ^ carry) << i
        carry = (ai & bi) | (axb & carry)
    return BitVector.from_unsigned(width, bits), carry, ripple_cost(width, model)


def _expand_carries(gs: Sequence[int], ps: Sequence[int], cin: int) -> tuple[list[int], int]:
    # Flat lookahead expansion for one block:
    #   c_j = OR_{i<j} (g_i AND p_{i+1..j-1}) OR (p_0..p_{j-1} AND cin)
    m = len(gs)
    out = []
    for j in range(m + 1):
        c = cin
        for k in range(j):
            c &= ps[k]
        for i in range(j):
            term = gs[i]
            for k in range(i + 1, j):
                term &= ps[k]
            c |= term
        out.append(c)
    return out[:m], out[m]


def _lookahead_carries(
    gs: Sequence[int], ps: Sequence[int], cin: int, block: int
) -> tuple[list[int], int]:
    # Hierarchical lookahead: blocks of `block` units, recursing over block
    # (G, P) pairs until one block covers everything.
    if len(gs) <= block:
        return _expand_carries(gs, ps, cin)
    block_g = []
    block_p = []
    chunks = []
    for i in range(0, len(gs), block):
        cg, cp = gs[i : i + block], ps[i : i + block]
        chunks.append((cg, cp))
        _, g_out = _expand_carries(cg, cp, 0)
        p_all = 1
        for p in cp:
            p_all &= p
        block_g.append(g_out)
        block_p.append(p_all)
    block_cins, carry_out = _lookahead_carries(block_g, block_p, cin, block)
    carries: list[int] = []
    for (cg, cp), bc in zip(chunks, block_cins):
        inner, _ = _expand_carries(cg, cp, bc)
        carries.extend(inner)
    return carries, carry_out


def cla_cost(width: int, model: CostModel = DEFAULT_COST_MODEL) -> GateCost:
    blocks = -(-width // model.cla_block_size)
    lookahead_nodes = 0
    levels = 0
    k = blocks
    while k > 1:
        k = -(-k // model.cla_block_size)
        lookahead_nodes += k
        levels += 1
    gates = (
        width * model.cla_gp_gates_per_bit
        + blocks * model.cla_block_gates
        + lookahead_nodes * model.cla_block_gates
        + width * model.cla_sum_gates_per_bit
    )
    depth = (
        model.cla_gp_depth
        + model.cla_block_depth
        + levels * model.cla_block_depth
        + model.cla_sum_depth
    )
    return GateCost(gates, depth)


def cla_add(
    a: BitVector,
    b: BitVector,
    carry_in: int = 0,
    model: CostModel = DEFAULT_COST_MODEL,
) -> tuple[BitVector, int, GateCost]:
    """Block carry-lookahead addition; numerically identical to ripple_add."""
    width = _require_equal_widths(a, b)
    gs = [a.bit(i) & b.bit(i) for i in range(width)]
    ps = [a.bit(i) ^ b.bit(i) for i in range(width)]
    carries, carry_out = _lookahead_carries(gs, ps, carry_in & 1, model.cla_block_size)
    bits = 0
    for i in range(width):
        bits |= (ps[i] ^ carries[i]) << i
    return BitVector.from_unsigned(width, bits), carry_out, cla_cost(width, model)


def csa_stage_count(operand_count: int) -> int:
    """Number of 3:2 compression layers needed to reach two vectors."""
    stages = 0
    k = operand_count
    while k > 2:
        k -= k // 3
        stages += 1
    return stages


def csa_compress(
    operands: Sequence[BitVector],
    model: CostModel = DEFAULT_COST_MODEL,
) -> tuple[tuple[BitVector, BitVector], GateCost]:
    """3:2 compression layers until two vectors remain.

    The two outputs sum to the input total modulo 2^width; any carry pushed
    past the top bit is dropped, so callers that need the exact total must
    pre-extend the operands.
    """
    if len(operands) < 3:
        raise ValueError("csa_compress needs at least 3 operands")
    width = operands[0].width
    for op in operands:
        if op.width != width:
            raise ValueError(f"width mismatch: {op.width} vs {width}")
    mask = (1 << width) - 1
    current = [op.unsigned for op in operands]
    applications = 0
    stages = 0
    while len(current) > 2:
        nxt = []
        i = 0
        while i + 3 <= len(current):
            x, y, z = current[i : i + 3]
            nxt.append(x ^ y ^ z)
            nxt.append((((x & y) | (x & z) | (y & z)) << 1) & mask)
            applications += 1
            i += 3
        nxt.extend(current[i:])
        current = nxt
        stages += 1
    cost = GateCost(applications * width * model.fa_gates, stages * model.fa_depth)
    s = BitVector.from_unsigned(width, current[0])
    c = BitVector.from_unsigned(width, current[1])
    return (s, c), cost


def tree_output_width(operand_width: int, operand_count: int) -> int:
    """Width at which a sum of ``operand_count`` signed words cannot wrap."""
    if operand_count < 1:
        raise ValueError("need at least one operand")
    return operand_width + (operand_count - 1).bit_length()


def adder_tree_cost(
    operand_count: int,
    operand_width: int,
    kind: AdderKind,
    model: CostModel = DEFAULT_COST_MODEL,
) -> GateCost:
    """Cost of summing ``operand_count`` words, all extended to the no-wrap width."""
    if operand_count < 1:
        raise ValueError("need at least one operand")
    if operand_count == 1:
        return ZERO_COST
    width = tree_output_width(operand_width, operand_count)
    if kind is AdderKind.CSA_TREE:
        final = cla_cost(width, model)
        if operand_count == 2:
            return final
        applications = operand_count - 2
        stages = csa_stage_count(operand_count)
        return GateCost(
            applications * width * model.fa_gates + final.gate_count,
            stages * model.fa_depth + final.depth,
        )
    per_adder = ripple_cost(width, model) if kind is AdderKind.RIPPLE else cla_cost(width, model)
    gates = 0
    depth = 0
    k = operand_count
    while k > 1:
        gates += (k // 2) * per_adder.gate_count
        depth += per_adder.depth
        k = (k + 1) // 2
    return GateCost(gates, depth)


def _pairwise_reduce(
    values: list[BitVector], kind: AdderKind, model: CostModel
) -> BitVector:
    while len(values) > 1:
        nxt = []
        for i in range(0, len(values) - 1, 2):
            if kind is AdderKind.RIPPLE:
                s, _, _ = ripple_add(values[i], values[i + 1], 0, model)
            else:
                s, _, _ = cla_add(values[i], values[i + 1], 0, model)
            nxt.append(s)
        if len(values) % 2:
            nxt.append(values[-1])
        values = nxt
    return values[0]


def adder_tree_sum(
    operands: Sequence[BitVector],
    kind: AdderKind,
    model: CostModel = DEFAULT_COST_MODEL,
    bit_level: bool = False,
) -> tuple[int, GateCost]:
    """Sum of the operands plus the cost of the configured tree.

    The total is the exact integer sum for every kind; the output width is
    sized so no wrap can occur. With ``bit_level=True`` the value is pushed
    through the gate-level adders themselves (pairwise tree for ripple/cla,
    3:2 compression plus a final cla for the carry-save tree) instead of
    native integer addition; both routes must agree and tests hold them to
    that.
    """
    if len(operands) == 0:
        raise ValueError("empty operand list")
    width = operands[0].width
    for op in operands:
        if op.width != width:
            raise ValueError(f"width mismatch: {op.width} vs {width}")
    count = len(operands)
    cost = adder_tree_cost(count, width, kind, model)
    if count == 1:
        return operands[0].value, cost
    if not bit_level:
        return sum(op.value for op in operands), cost
    out_width = tree_output_width(width, count)
    extended = [op.extend(out_width) for op in operands]
    if kind is AdderKind.CSA_TREE and count >= 3:
        (s, c), _ = csa_compress(extended, model)
        total, _, _ = cla_add(s, c, 0, model)
        return total.value, cost
    return _pairwise_reduce(extended, kind, model).value, cost
