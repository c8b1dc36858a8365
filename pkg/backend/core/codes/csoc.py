"""
Convolutional Self-Orthogonal Codes
===================================

A (k+1, k, m) systematic feedforward convolutional code is described by k
generator tap sets. Tap set i lists the nonzero positions b of
g_i = (g_{i,0}, ..., g_{i,m}); parity at time l is

    p_l = XOR_i XOR_{b in taps_i} u_{l-b}^{(i)}

The code is self-orthogonal when, for every information error symbol, the J
syndrome bits that check it share no other unknown error symbol. With
decision feedback, past symbols are treated as known, so a check on
e_l^{(i)} taken at syndrome time l+d involves symbols at relative offsets
0..d only.

Stream index k denotes the parity stream throughout this package.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import CodeStructureError, DimensionMismatchError, NotSelfOrthogonalError


TapSet = Tuple[int, ...]


@dataclass(frozen=True)
class CsocCode:
    """Component code: k information streams plus one parity stream."""
    k: int
    m: int
    generators: Tuple[TapSet, ...]

    def __post_init__(self):
        try:
            generators = tuple(tuple(int(tap) for tap in taps) for taps in self.generators)
        except (TypeError, ValueError) as exc:
            raise CodeStructureError(f"tap sets must be sequences of integers: {exc}") from exc
        object.__setattr__(self, "generators", generators)
        check_structure(self.k, self.m, generators)

    @property
    def J(self) -> int:
        """Orthogonal check count (uniform tap count)."""
        return len(self.generators[0])

    @property
    def nu(self) -> int:
        """Termination length k(m+1)."""
        return self.k * (self.m + 1)

    @property
    def parity_stream(self) -> int:
        return self.k

    @property
    def nonzero_taps(self) -> int:
        """Total number of nonzero generator terms, kJ for a uniform code."""
        return sum(len(taps) for taps in self.generators)

    @property
    def rate(self) -> float:
        return self.k / (self.k + 1)

    @classmethod
    def from_taps(cls, generators: Sequence[Sequence[int]], m: Optional[int] = None) -> "CsocCode":
        """Build a code from tap sets, inferring m as the largest tap."""
        generators = [list(taps) for taps in generators]
        if m is None:
            taps = [tap for g in generators for tap in g]
            if not taps:
                raise CodeStructureError("at least one nonempty tap set is required")
            m = max(taps)
        return cls(k=len(generators), m=m, generators=tuple(tuple(g) for g in generators))

    @classmethod
    def from_bit_strings(cls, strings: Sequence[str], m: Optional[int] = None) -> "CsocCode":
        """Build a code from generator bit strings, leftmost digit is g_{i,0}."""
        return cls.from_taps([parse_generator_bits(s) for s in strings], m=m)

    def to_bit_strings(self) -> List[str]:
        strings = []
        for taps in self.generators:
            bits = ["0"] * (max(taps) + 1)
            for tap in taps:
                bits[tap] = "1"
            strings.append("".join(bits))
        return strings

    def to_dict(self) -> Dict:
        """Code description in the JSON file format (tap-list form)."""
        return {
            'k': self.k,
            'm': self.m,
            'J': self.J,
            'generators': [list(taps) for taps in self.generators]
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "CsocCode":
        """Create from a code description; generators may be bit strings or tap lists."""
        if 'generators' not in data:
            raise CodeStructureError("code description has no 'generators'")
        raw = data['generators']
        if not isinstance(raw, (list, tuple)) or not raw:
            raise CodeStructureError("'generators' must be a nonempty list")
        generators = [
            parse_generator_bits(g) if isinstance(g, str) else list(g)
            for g in raw
        ]
        code = cls.from_taps(generators, m=data.get('m'))
        if 'k' in data and int(data['k']) != code.k:
            raise CodeStructureError(f"k={data['k']} but {code.k} generators were given")
        if 'J' in data and int(data['J']) != code.J:
            raise CodeStructureError(f"J={data['J']} but tap sets have {code.J} taps")
        return code


class Participant(NamedTuple):
    """One error symbol in a check: stream (k = parity) and time offset relative to l."""
    stream: int
    offset: int


@dataclass(frozen=True)
class OrthogonalCheck:
    """Check j on e_l^{(i)}: the syndrome bit s_{l+offset} and its other participants."""
    offset: int
    participants: Tuple[Participant, ...]


@dataclass(frozen=True)
class CheckSet:
    """For each information stream, its J orthogonal checks."""
    code: CsocCode
    checks: Tuple[Tuple[OrthogonalCheck, ...], ...]

    def for_stream(self, stream: int) -> Tuple[OrthogonalCheck, ...]:
        return self.checks[stream]

    def participants(self, stream: int) -> List[Participant]:
        """All participants of the set on `stream`, concatenated over checks."""
        return [p for check in self.checks[stream] for p in check.participants]


@dataclass(frozen=True)
class OrthogonalityViolation:
    """Two tap pairs (generator, (a, b)) sharing the positive difference b - a."""
    difference: int
    first: Tuple[int, Tuple[int, int]]
    second: Tuple[int, Tuple[int, int]]

    def describe(self) -> str:
        (g1, (a1, b1)), (g2, (a2, b2)) = self.first, self.second
        return (
            f"difference {self.difference} occurs in generator {g1} taps ({a1},{b1}) "
            f"and generator {g2} taps ({a2},{b2})"
        )


@dataclass(frozen=True)
class OrthogonalityReport:
    valid: bool
    violation: Optional[OrthogonalityViolation] = None

    @property
    def message(self) -> str:
        if self.valid:
            return "valid"
        return f"not self-orthogonal: {self.violation.describe()}"


def parse_generator_bits(bits: str) -> List[int]:
    """'1001100000001' -> [0, 3, 4, 12]."""
    bits = bits.strip()
    if not bits or set(bits) - {"0", "1"}:
        raise CodeStructureError(f"generator string must contain only 0/1: {bits!r}")
    return [position for position, bit in enumerate(bits) if bit == "1"]


def check_structure(k: int, m: int, generators: Sequence[Sequence[int]]) -> None:
    """Raise CodeStructureError unless the tap sets are well formed with uniform J and tight m."""
    if k < 1:
        raise CodeStructureError(f"k must be >= 1, got {k}")
    if m < 0:
        raise CodeStructureError(f"m must be >= 0, got {m}")
    if len(generators) != k:
        raise CodeStructureError(f"expected {k} tap sets, got {len(generators)}")

    for i, taps in enumerate(generators):
        if len(taps) == 0:
            raise CodeStructureError(f"tap set {i} is empty")
        if any(b <= a for a, b in zip(taps, taps[1:])):
            raise CodeStructureError(f"tap set {i} is not strictly increasing: {list(taps)}")
        if taps[0] < 0 or taps[-1] > m:
            raise CodeStructureError(f"tap set {i} has taps outside [0, {m}]: {list(taps)}")

    if max(taps[-1] for taps in generators) != m:
        raise CodeStructureError(f"no generator attains a tap at m={m}")

    sizes = {len(taps) for taps in generators}
    if len(sizes) != 1:
        raise CodeStructureError(f"tap sets must share one J, got sizes {sorted(sizes)}")


def validate_self_orthogonality(code: CsocCode) -> OrthogonalityReport:
    """
    Difference-set test: all positive pairwise tap differences must be distinct
    within each generator and disjoint across generators.
    """
    seen: Dict[int, Tuple[int, Tuple[int, int]]] = {}
    for i, taps in enumerate(code.generators):
        for x, a in enumerate(taps):
            for b in taps[x + 1:]:
                difference = b - a
                if difference in seen:
                    violation = OrthogonalityViolation(
                        difference=difference,
                        first=seen[difference],
                        second=(i, (a, b))
                    )
                    return OrthogonalityReport(valid=False, violation=violation)
                seen[difference] = (i, (a, b))
    return OrthogonalityReport(valid=True)


def _raw_check_sets(code: CsocCode) -> Tuple[Tuple[OrthogonalCheck, ...], ...]:
    checks = []
    for i, own_taps in enumerate(code.generators):
        stream_checks = []
        for d in own_taps:
            participants = [
                Participant(alpha, d - b)
                for alpha, taps in enumerate(code.generators)
                for b in taps
                if b <= d and not (alpha == i and b == d)
            ]
            participants.append(Participant(code.parity_stream, d))
            stream_checks.append(OrthogonalCheck(offset=d, participants=tuple(participants)))
        checks.append(tuple(stream_checks))
    return tuple(checks)


def find_repeated_participant(code: CsocCode) -> Optional[Tuple[int, Participant]]:
    """
    Direct definition of self-orthogonality: enumerate the checks on every
    stream and return the first (stream, participant) seen in two checks.
    """
    for i, stream_checks in enumerate(_raw_check_sets(code)):
        seen = set()
        for check in stream_checks:
            for participant in check.participants:
                if participant in seen:
                    return i, participant
                seen.add(participant)
    return None


def build_check_sets(code: CsocCode) -> CheckSet:
    """Orthogonal check sets {A_j^{(i)}} for a valid code."""
    report = validate_self_orthogonality(code)
    if not report.valid:
        raise NotSelfOrthogonalError(report.message, report=report)
    return CheckSet(code=code, checks=_raw_check_sets(code))


def _as_bit_matrix(code: CsocCode, streams: Union[ArrayLike, Iterable]) -> NDArray[np.uint8]:
    rows = [np.asarray(stream, dtype=np.uint8).ravel() for stream in streams]
    if len(rows) != code.k:
        raise DimensionMismatchError(f"expected {code.k} information streams, got {len(rows)}")
    lengths = {row.size for row in rows}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"information streams differ in length: {sorted(lengths)}")
    return np.vstack(rows)


def encode_block(code: CsocCode, info: ArrayLike) -> NDArray[np.uint8]:
    """Parity stream for k information streams, encoder starting in the zero state."""
    u = _as_bit_matrix(code, info)
    n = u.shape[1]
    parity = np.zeros(n, dtype=np.uint8)
    for i, taps in enumerate(code.generators):
        for b in taps:
            if b < n:
                parity[b:] ^= u[i, :n - b]
    return parity


def form_syndromes(code: CsocCode, hard_info: ArrayLike, hard_parity: ArrayLike) -> NDArray[np.uint8]:
    """s_l = re-encoded hard information XOR hard parity."""
    u = _as_bit_matrix(code, hard_info)
    parity = np.asarray(hard_parity, dtype=np.uint8).ravel()
    if parity.size != u.shape[1]:
        raise DimensionMismatchError(
            f"parity length {parity.size} does not match information length {u.shape[1]}"
        )
    return encode_block(code, u) ^ parity
