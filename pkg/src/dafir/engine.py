"""Distributed-arithmetic FIR engine: tables, partitioning, bit-serial schedule.

The multiply-accumulate y = sum_k A_k * x_k is reorganised over the bits of
the samples: at cycle n the n-th bits of all K samples form per-group
addresses, each group contributes the precomputed sum of its selected
coefficients, the group outputs are summed by an adder tree, shifted left
by n, and accumulated. The MSB cycle is subtracted instead of added, which
is exactly the two's-complement sign correction. After L cycles (L = input
word width) the accumulator equals the inner product, bit for bit.

Partial products come from either stored lookup tables (one table of 2^M
entries per group of M taps) or a multiplexer-style generator that selects
and sums coefficients on the fly; both must agree at every address, and
the evaluator must agree with the direct-form oracle on every input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

from .adders import (
    DEFAULT_COST_MODEL,
    AdderKind,
    BitVector,
    CostModel,
    adder_tree_sum,
)
from .numerics import (
    AccumulatorOverflow,
    CoefficientSet,
    FixedFormat,
    Sample,
    WideAccumulator,
    required_accumulator_width,
)

__all__ = [
    "AddressWord",
    "BitSerialState",
    "CycleRecord",
    "CycleTrace",
    "DaFilter",
    "DaLut",
    "Mismatch",
    "PartitionPlan",
    "PpgMode",
    "address_for_cycle",
    "build_lut",
    "da_filter_stream",
    "da_inner_product",
    "memory_locations",
    "mux_ppg",
    "partial_product_width",
    "partition_taps",
    "verify_windows",
]

MAX_GROUP_SIZE = 16  # keeps 2^M tables desk-scale

TapIndex = Union[int, None]  # None marks a zero-coefficient padding slot


class PpgMode(enum.Enum):
    """Where per-group partial products come from."""

    STORED = "stored"
    MUX = "mux"


@dataclass(frozen=True)
class PartitionPlan:
    """Assignment of tap indices to address groups.

    Taps are grouped consecutively; the last group is padded with ``None``
    slots (synthetic zero coefficients) up to ``group_size``. A padding
    slot contributes nothing to any partial product and its address bit
    reads as 0.
    """

    group_size: int
    groups: tuple[tuple[TapIndex, ...], ...]
    padded_taps: int

    def __post_init__(self) -> None:
        if not (1 <= self.group_size <= MAX_GROUP_SIZE):
            raise ValueError(f"group_size must be in [1, {MAX_GROUP_SIZE}]")
        seen: set[int] = set()
        pads = 0
        for group in self.groups:
            if len(group) != self.group_size:
                raise ValueError("every group must have exactly group_size slots")
            for idx in group:
                if idx is None:
                    pads += 1
                elif idx in seen:
                    raise ValueError(f"tap index {idx} appears in more than one group")
                else:
                    seen.add(idx)
        if pads != self.padded_taps:
            raise ValueError("padded_taps does not match the padding slots present")
        if seen != set(range(len(seen))):
            raise ValueError("tap indices must cover 0..K-1 exactly once")

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    @property
    def num_taps(self) -> int:
        """Real (unpadded) taps covered by the plan."""
        return self.num_groups * self.group_size - self.padded_taps


def partition_taps(num_taps: int, group_size: int) -> PartitionPlan:
    """Group consecutive taps, zero-padding the final group.

    ceil(num_taps / group_size) groups come out; storage for the stored-LUT
    mode is num_groups * 2^group_size entries instead of 2^num_taps.
    """
    if num_taps < 1:
        raise ValueError("num_taps must be at least 1")
    if not (1 <= group_size <= MAX_GROUP_SIZE):
        raise ValueError(f"group_size must be in [1, {MAX_GROUP_SIZE}]")
    groups = []
    for start in range(0, num_taps, group_size):
        members: list[TapIndex] = list(range(start, min(start + group_size, num_taps)))
        members += [None] * (group_size - len(members))
        groups.append(tuple(members))
    padded = len(groups) * group_size - num_taps
    return PartitionPlan(group_size, tuple(groups), padded)


def memory_locations(plan: PartitionPlan) -> int:
    """Total stored table entries: number of groups times 2^group_size."""
    return plan.num_groups * (1 << plan.group_size)


def partial_product_width(coeff_width: int, group_size: int) -> int:
    """Signed bits needed by any sum of ``group_size`` coefficients.

    The negative extreme is group_size * -2^(coeff_width-1), so one extra
    bit per doubling of the group: 16-bit coefficients in pairs need 17.
    """
    return coeff_width + (group_size - 1).bit_length()


@dataclass(frozen=True)
class DaLut:
    """Stored table for one group: entries[a] = sum of coefficients whose bit is set in a."""

    group: tuple[TapIndex, ...]
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != 1 << len(self.group):
            raise ValueError("a group of M taps needs exactly 2^M entries")


def build_lut(coeffs: CoefficientSet, group: Sequence[TapIndex]) -> DaLut:
    """Precompute all 2^M subset sums for a group (address bit j selects member j)."""
    values = coeffs.values
    members = tuple(group)
    size = len(members)
    entries = []
    for address in range(1 << size):
        total = 0
        for j, idx in enumerate(members):
            if idx is not None and (address >> j) & 1:
                total += values[idx]
        entries.append(total)
    return DaLut(members, tuple(entries))


def mux_ppg(coeffs: CoefficientSet, group: Sequence[TapIndex], address: int) -> int:
    """Partial product computed directly from the address, with no stored table.

    Models the shared multiplexer structure: the address bits steer the
    group's coefficients into an on-the-fly sum. Must match the stored
    table at every address.
    """
    members = tuple(group)
    if not (0 <= address < 1 << len(members)):
        raise ValueError(f"address {address} out of range for a {len(members)}-bit group")
    values = coeffs.values
    total = 0
    for j, idx in enumerate(members):
        if idx is not None and (address >> j) & 1:
            total += values[idx]
    return total


@dataclass(frozen=True)
class AddressWord:
    """Per-group table addresses formed from bit ``cycle`` of every sample."""

    cycle: int
    per_group: tuple[int, ...]


def address_for_cycle(
    delay_line: Sequence[int],
    plan: PartitionPlan,
    cycle: int,
    input_width: int,
) -> AddressWord:
    """Gather bit ``cycle`` of each group member's sample into an address.

    ``delay_line[i]`` holds x(current - i), so tap i multiplies the sample
    it should. Address bit j of a group belongs to group member j; padding
    slots read as 0.
    """
    if not (0 <= cycle < input_width):
        raise ValueError(f"cycle {cycle} out of range for {input_width}-bit inputs")
    if len(delay_line) != plan.num_taps:
        raise ValueError("delay line length must equal the plan's tap count")
    addresses = []
    for group in plan.groups:
        a = 0
        for j, idx in enumerate(group):
            if idx is not None:
                a |= ((delay_line[idx] >> cycle) & 1) << j
        addresses.append(a)
    return AddressWord(cycle, tuple(addresses))


@dataclass(frozen=True)
class CycleRecord:
    """Everything one clock of the bit-serial schedule did."""

    cycle: int
    addresses: tuple[int, ...]
    partials: tuple[int, ...]
    tree_sum: int
    shift: int
    subtract: bool
    acc_after: int


CycleTrace = tuple[CycleRecord, ...]


@dataclass
class BitSerialState:
    """Mutable evaluator state: delay line, accumulator, current cycle."""

    delay_line: tuple[int, ...]
    acc: WideAccumulator
    cycle: int = 0


def _normalize_tables(
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    luts: Sequence[Union[DaLut, Sequence[int]]] | None,
) -> tuple[tuple[int, ...], ...]:
    if luts is None:
        return tuple(build_lut(coeffs, g).entries for g in plan.groups)
    if len(luts) != plan.num_groups:
        raise ValueError("need exactly one table per group")
    tables = []
    want = 1 << plan.group_size
    bound = 1 << (partial_product_width(coeffs.format.width, plan.group_size) - 1)
    for lut in luts:
        entries = tuple(lut.entries if isinstance(lut, DaLut) else (int(v) for v in lut))
        if len(entries) != want:
            raise ValueError(f"each table needs {want} entries")
        for v in entries:
            if not (-bound <= v < bound):
                raise ValueError(
                    f"table entry {v} cannot be a sum of {plan.group_size} "
                    f"coefficients of {coeffs.format.width} bits"
                )
        tables.append(entries)
    return tuple(tables)


def _check_inputs(
    delay_line: Sequence[int],
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    input_width: int,
) -> tuple[int, ...]:
    num_taps = len(coeffs)
    if plan.num_taps != num_taps:
        raise ValueError(
            f"plan covers {plan.num_taps} taps but the filter has {num_taps}"
        )
    dl = tuple(int(x) for x in delay_line)
    if len(dl) != num_taps:
        raise ValueError(f"delay line has {len(dl)} entries, expected {num_taps}")
    fmt = FixedFormat(input_width)
    for x in dl:
        fmt.check(x, "sample")
    return dl


def _compile_evaluator(
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    ppg_mode: PpgMode,
    input_width: int,
    tables: tuple[tuple[int, ...], ...] | None,
) -> Callable[[Sequence[int]], int]:
    """Bind the bit-serial loop over precomputed group structures.

    The returned callable runs the full L-cycle schedule on one delay line
    and returns the accumulator; everything it touches is a local, which
    matters when a verification sweep calls it millions of times.
    """
    length = input_width
    last = length - 1
    acc_width = required_accumulator_width(len(coeffs), coeffs.format.width, length)
    bound = 1 << (acc_width - 1)

    if ppg_mode is PpgMode.STORED:
        if tables is None:
            tables = _normalize_tables(coeffs, plan, None)
        members = tuple(
            tuple((j, idx) for j, idx in enumerate(g) if idx is not None)
            for g in plan.groups
        )
        pairs = tuple(zip(tables, members))

        def evaluate(dl: Sequence[int]) -> int:
            acc = 0
            for n in range(length):
                t = 0
                for tab, mem in pairs:
                    a = 0
                    for j, i in mem:
                        a |= ((dl[i] >> n) & 1) << j
                    t += tab[a]
                if n == last:
                    acc -= t << n
                else:
                    acc += t << n
            if acc >= bound or acc < -bound:
                raise AccumulatorOverflow(
                    f"inner product {acc} exceeds the {acc_width}-bit accumulator"
                )
            return acc

    else:
        # Mux mode: each set address bit steers one coefficient into the sum.
        values = coeffs.values
        selects = tuple(
            (idx, values[idx]) for g in plan.groups for idx in g if idx is not None
        )

        def evaluate(dl: Sequence[int]) -> int:
            acc = 0
            for n in range(length):
                t = 0
                for i, c in selects:
                    if (dl[i] >> n) & 1:
                        t += c
                if n == last:
                    acc -= t << n
                else:
                    acc += t << n
            if acc >= bound or acc < -bound:
                raise AccumulatorOverflow(
                    f"inner product {acc} exceeds the {acc_width}-bit accumulator"
                )
            return acc

    return evaluate


def da_inner_product(
    delay_line: Sequence[int],
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    ppg_mode: PpgMode = PpgMode.STORED,
    tree: AdderKind = AdderKind.CLA,
    *,
    input_width: int,
    luts: Sequence[Union[DaLut, Sequence[int]]] | None = None,
    collect_trace: bool = True,
    bit_level: bool = False,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> tuple[int, CycleTrace | None]:
    """Run the L-cycle bit-serial schedule on one delay-line snapshot.

    Returns the accumulator value, which equals sum_k A_k * x_k exactly,
    and the per-cycle trace (or None when ``collect_trace`` is off). With
    ``bit_level=True`` each cycle's group outputs are summed through the
    gate-level adder tree of the configured kind instead of native
    integers; the result must not change.

    ``luts`` overrides the derived tables in stored mode, which lets a
    verifier exercise exactly the entries a design file carries.
    """
    dl = _check_inputs(delay_line, coeffs, plan, input_width)
    tables = _normalize_tables(coeffs, plan, luts) if ppg_mode is PpgMode.STORED else None

    if not collect_trace and not bit_level:
        return _compile_evaluator(coeffs, plan, ppg_mode, input_width, tables)(dl), None

    width = partial_product_width(coeffs.format.width, plan.group_size)
    acc_width = required_accumulator_width(len(coeffs), coeffs.format.width, input_width)
    state = BitSerialState(dl, WideAccumulator(acc_width))
    records = []
    last = input_width - 1
    for n in range(input_width):
        word = address_for_cycle(dl, plan, n, input_width)
        if ppg_mode is PpgMode.STORED:
            assert tables is not None
            partials = tuple(tab[a] for tab, a in zip(tables, word.per_group))
        else:
            partials = tuple(
                mux_ppg(coeffs, g, a) for g, a in zip(plan.groups, word.per_group)
            )
        tree_sum, _ = adder_tree_sum(
            [BitVector(width, p) for p in partials], tree, cost_model, bit_level=bit_level
        )
        subtract = n == last
        if subtract:
            state.acc.subtract(tree_sum << n)
        else:
            state.acc.add(tree_sum << n)
        state.cycle = n + 1
        records.append(
            CycleRecord(n, word.per_group, partials, tree_sum, n, subtract, state.acc.value)
        )
    trace: CycleTrace = tuple(records)
    return state.acc.value, trace


class DaFilter:
    """Streaming DA evaluator: one inner product per pushed sample.

    Owns a private delay line (newest sample first, zeros initially); one
    instance per thread, instances independent. Output matches
    :func:`dafir.numerics.direct_fir` sample for sample.
    """

    def __init__(
        self,
        coeffs: CoefficientSet,
        plan: PartitionPlan,
        ppg_mode: PpgMode = PpgMode.STORED,
        tree: AdderKind = AdderKind.CLA,
        *,
        input_width: int,
        luts: Sequence[Union[DaLut, Sequence[int]]] | None = None,
        bit_level: bool = False,
        cost_model: CostModel = DEFAULT_COST_MODEL,
    ) -> None:
        if plan.num_taps != len(coeffs):
            raise ValueError(
                f"plan covers {plan.num_taps} taps but the filter has {len(coeffs)}"
            )
        self.coeffs = coeffs
        self.plan = plan
        self.ppg_mode = ppg_mode
        self.tree = tree
        self.input_format = FixedFormat(input_width)
        self.bit_level = bit_level
        self.cost_model = cost_model
        self._tables = (
            _normalize_tables(coeffs, plan, luts) if ppg_mode is PpgMode.STORED else None
        )
        self._fast = _compile_evaluator(coeffs, plan, ppg_mode, input_width, self._tables)
        self._delay = [0] * len(coeffs)

    def _admit(self, sample: Union[int, Sample]) -> int:
        if isinstance(sample, Sample):
            if sample.format != self.input_format:
                raise ValueError(
                    f"sample format {sample.format} does not match {self.input_format}"
                )
            x = sample.value
        else:
            x = self.input_format.check(int(sample), "sample")
        self._delay.insert(0, x)
        self._delay.pop()
        return x

    def push(self, sample: Union[int, Sample]) -> int:
        self._admit(sample)
        return self._fast(self._delay)

    def push_traced(self, sample: Union[int, Sample]) -> tuple[int, CycleTrace]:
        self._admit(sample)
        value, trace = da_inner_product(
            tuple(self._delay),
            self.coeffs,
            self.plan,
            self.ppg_mode,
            self.tree,
            input_width=self.input_format.width,
            luts=self._tables,
            collect_trace=True,
            bit_level=self.bit_level,
            cost_model=self.cost_model,
        )
        assert trace is not None
        return value, trace

    def process(self, samples: Iterable[Union[int, Sample]]) -> list[int]:
        return [self.push(s) for s in samples]

    def reset(self) -> None:
        self._delay = [0] * len(self.coeffs)


def da_filter_stream(
    samples: Iterable[Union[int, Sample]],
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    ppg_mode: PpgMode = PpgMode.STORED,
    tree: AdderKind = AdderKind.CLA,
    *,
    input_width: int,
    luts: Sequence[Union[DaLut, Sequence[int]]] | None = None,
    trace: bool = False,
    bit_level: bool = False,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> tuple[list[int], list[CycleTrace] | None]:
    """Filter a whole stream; optionally keep every sample's cycle trace."""
    filt = DaFilter(
        coeffs,
        plan,
        ppg_mode,
        tree,
        input_width=input_width,
        luts=luts,
        bit_level=bit_level,
        cost_model=cost_model,
    )
    if not trace:
        return filt.process(samples), None
    outputs = []
    traces = []
    for s in samples:
        value, t = filt.push_traced(s)
        outputs.append(value)
        traces.append(t)
    return outputs, traces


@dataclass(frozen=True)
class Mismatch:
    """First place a DA evaluation and the direct-form oracle disagreed."""

    window: tuple[int, ...]
    got: int
    expected: int


def verify_windows(
    coeffs: CoefficientSet,
    plan: PartitionPlan,
    ppg_mode: PpgMode,
    *,
    input_width: int,
    windows: Iterable[Sequence[int]],
    luts: Sequence[Union[DaLut, Sequence[int]]] | None = None,
    limit: int = 1,
) -> tuple[int, list[Mismatch]]:
    """Compare the DA path against the direct dot product on many windows.

    A window is one delay-line snapshot (newest sample first). Returns the
    number of windows checked and up to ``limit`` mismatches; an empty list
    means full agreement. The oracle side is an independent plain
    multiply-accumulate, never a table.
    """
    tables = _normalize_tables(coeffs, plan, luts) if ppg_mode is PpgMode.STORED else None
    evaluate = _compile_evaluator(coeffs, plan, ppg_mode, input_width, tables)
    taps = coeffs.values
    checked = 0
    mismatches: list[Mismatch] = []
    for window in windows:
        got = evaluate(window)
        expected = sum(a * x for a, x in zip(taps, window))
        checked += 1
        if got != expected:
            mismatches.append(Mismatch(tuple(window), got, expected))
            if len(mismatches) >= limit:
                break
    return checked, mismatches


def all_windows(num_taps: int, input_width: int) -> Iterable[tuple[int, ...]]:
    """Every possible delay-line snapshot, all 2^(K*L) of them, in order."""
    span = 1 << input_width
    half = span >> 1
    mask = span - 1

    def decode(code: int) -> tuple[int, ...]:
        out = []
        for _ in range(num_taps):
            v = code & mask
            out.append(v - span if v >= half else v)
            code >>= input_width
        return tuple(out)

    return (decode(c) for c in range(1 << (num_taps * input_width)))
