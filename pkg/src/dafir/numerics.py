"""Fixed-point formats, coefficient quantization and the direct-form FIR oracle.

Everything here is exact integer (or rational) arithmetic. Samples and
coefficients are signed two's-complement integers described by a
:class:`FixedFormat`; quantization maps real values onto the Q1.(W-1)
grid with round-half-to-even and saturation. :func:`direct_fir` is the
golden reference every table-driven evaluation path is checked against,
so it deliberately uses Python's unbounded integers and nothing else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "AccumulatorOverflow",
    "Coefficient",
    "CoefficientSet",
    "DirectFormFir",
    "FixedFormat",
    "Sample",
    "WideAccumulator",
    "dequantize",
    "direct_fir",
    "min_signed_width",
    "quantize_coefficient",
    "required_accumulator_width",
]

RealLike = Union[int, float, str, Fraction, Decimal]

MIN_WIDTH = 2
MAX_WIDTH = 64


class AccumulatorOverflow(OverflowError):
    """An accumulator left its declared signed range (a sizing bug, not data)."""


@dataclass(frozen=True)
class FixedFormat:
    """Signed two's-complement word description.

    ``width`` counts all bits including the sign bit; representable values
    are the integers in [-2^(width-1), 2^(width-1) - 1].
    """

    width: int
    signed: bool = True

    def __post_init__(self) -> None:
        if not (MIN_WIDTH <= self.width <= MAX_WIDTH):
            raise ValueError(f"width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {self.width}")
        if not self.signed:
            raise ValueError("only signed formats are supported")

    @property
    def min_value(self) -> int:
        return -(1 << (self.width - 1))

    @property
    def max_value(self) -> int:
        return (1 << (self.width - 1)) - 1

    @property
    def scale(self) -> int:
        """Scale factor of the Q1.(width-1) interpretation, i.e. 2^(width-1)."""
        return 1 << (self.width - 1)

    def contains(self, value: int) -> bool:
        return self.min_value <= value <= self.max_value

    def check(self, value: int, what: str = "value") -> int:
        if not self.contains(value):
            raise ValueError(
                f"{what} {value} outside signed {self.width}-bit range "
                f"[{self.min_value}, {self.max_value}]"
            )
        return value


@dataclass(frozen=True)
class Coefficient:
    """One filter tap, an exact integer within its format's range."""

    value: int
    format: FixedFormat

    def __post_init__(self) -> None:
        self.format.check(self.value, "coefficient")


@dataclass(frozen=True)
class Sample:
    """One input word, an exact integer within its format's range."""

    value: int
    format: FixedFormat

    def __post_init__(self) -> None:
        self.format.check(self.value, "sample")


@dataclass(frozen=True)
class CoefficientSet:
    """Ordered taps of a filter, all sharing one coefficient format."""

    taps: tuple[Coefficient, ...]
    format: FixedFormat

    def __post_init__(self) -> None:
        if len(self.taps) < 1:
            raise ValueError("a filter needs at least one tap")
        for tap in self.taps:
            if tap.format != self.format:
                raise ValueError("all taps must share the set's format")

    def __len__(self) -> int:
        return len(self.taps)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(tap.value for tap in self.taps)

    @classmethod
    def from_integers(cls, values: Sequence[int], fmt: FixedFormat) -> "CoefficientSet":
        return cls(tuple(Coefficient(int(v), fmt) for v in values), fmt)

    @classmethod
    def from_reals(
        cls, reals: Sequence[RealLike], fmt: FixedFormat
    ) -> tuple["CoefficientSet", tuple[bool, ...]]:
        """Quantize real-valued taps; returns the set plus per-tap saturation flags."""
        taps = []
        flags = []
        for r in reals:
            coeff, saturated = quantize_coefficient(r, fmt)
            taps.append(coeff)
            flags.append(saturated)
        return cls(tuple(taps), fmt), tuple(flags)


@dataclass
class WideAccumulator:
    """Signed accumulator that treats leaving its range as a hard error.

    Unlike hardware registers this never wraps; a trip means the declared
    width was mis-sized, not that the data was unlucky.
    """

    width: int
    value: int = 0
    _bound: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.width < 2:
            raise ValueError("accumulator width must be at least 2")
        self._bound = 1 << (self.width - 1)
        self._check(self.value)

    def _check(self, v: int) -> int:
        if v >= self._bound or v < -self._bound:
            raise AccumulatorOverflow(
                f"accumulator value {v} exceeds signed {self.width}-bit range"
            )
        return v

    def add(self, v: int) -> int:
        self.value = self._check(self.value + v)
        return self.value

    def subtract(self, v: int) -> int:
        self.value = self._check(self.value - v)
        return self.value


def _to_fraction(real: RealLike) -> Fraction:
    # Text goes through Decimal so "0.1" means the decimal 1/10, not the
    # nearest binary float; floats are taken at their exact binary value.
    if isinstance(real, str):
        try:
            return Fraction(Decimal(real))
        except InvalidOperation as exc:
            raise ValueError(f"cannot parse {real!r} as a number") from exc
    if isinstance(real, (int, Fraction)):
        return Fraction(real)
    if isinstance(real, Decimal):
        return Fraction(real)
    if isinstance(real, float):
        return Fraction(real)
    raise TypeError(f"unsupported value type {type(real).__name__}")


def quantize_coefficient(real: RealLike, fmt: FixedFormat) -> tuple[Coefficient, bool]:
    """Map a real value onto the Q1.(width-1) integer grid.

    Rounds real * 2^(width-1) to the nearest integer with ties to even,
    then saturates to the representable range. Returns the coefficient and
    a flag telling whether saturation clipped the value.
    """
    scaled = _to_fraction(real) * fmt.scale
    code = round(scaled)  # round() on Fraction is exact half-to-even
    saturated = code < fmt.min_value or code > fmt.max_value
    code = max(fmt.min_value, min(fmt.max_value, code))
    return Coefficient(code, fmt), saturated


def dequantize(coeff: Coefficient) -> Fraction:
    """Exact real value a coefficient code stands for."""
    return Fraction(coeff.value, coeff.format.scale)


def required_accumulator_width(num_taps: int, coeff_width: int, input_width: int) -> int:
    """Smallest provably safe signed width for a K-tap inner product.

    Returns W + L + ceil(log2(K)). For every representable coefficient and
    sample, |sum_k A_k * x_k| < 2^(result-1). Note that sizing "one extra
    bit for K parallel terms" undercounts: K=8, W=16, L=16 needs 35 bits,
    not 34, because the most negative product is -2^(W-1) * -2^(L-1) =
    +2^(W+L-2), and eight of those reach 2^33.
    """
    if num_taps < 1:
        raise ValueError("num_taps must be at least 1")
    if coeff_width < 2 or input_width < 2:
        raise ValueError("widths must be at least 2")
    return coeff_width + input_width + (num_taps - 1).bit_length()


def min_signed_width(value: int) -> int:
    """Fewest two's-complement bits that can hold ``value``."""
    if value >= 0:
        return value.bit_length() + 1
    return (-value - 1).bit_length() + 1


def _tap_values(coeffs: Union[CoefficientSet, Sequence[int]]) -> tuple[int, ...]:
    if isinstance(coeffs, CoefficientSet):
        return coeffs.values
    return tuple(int(v) for v in coeffs)


class DirectFormFir:
    """Streaming direct-form FIR evaluator; the golden oracle.

    Owns a private delay line initialised to zeros, so outputs are emitted
    from the very first sample (warm-up included). One instance per thread;
    instances are independent.
    """

    def __init__(
        self,
        coeffs: Union[CoefficientSet, Sequence[int]],
        input_format: FixedFormat | None = None,
    ) -> None:
        self._taps = _tap_values(coeffs)
        self._input_format = input_format
        self._delay = [0] * len(self._taps)

    def push(self, sample: Union[int, Sample]) -> int:
        if isinstance(sample, Sample):
            if self._input_format is not None and sample.format != self._input_format:
                raise ValueError(
                    f"sample format {sample.format} does not match "
                    f"declared input format {self._input_format}"
                )
            x = sample.value
        else:
            x = int(sample)
            if self._input_format is not None:
                self._input_format.check(x, "sample")
        self._delay.insert(0, x)
        self._delay.pop()
        return sum(a * x for a, x in zip(self._taps, self._delay))

    def reset(self) -> None:
        self._delay = [0] * len(self._taps)


def direct_fir(
    samples: Iterable[Union[int, Sample]],
    coeffs: Union[CoefficientSet, Sequence[int]],
    input_format: FixedFormat | None = None,
) -> list[int]:
    """y(n) = sum_i taps[i] * x(n-i), with x(m) = 0 for m < 0, exactly."""
    fir = DirectFormFir(coeffs, input_format)
    return [fir.push(s) for s in samples]
