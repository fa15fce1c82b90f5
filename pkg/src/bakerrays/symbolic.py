"""Two-symbol sequences: finite prefix plus a tail descriptor, the shift,
classification, strip itineraries, and the greedy oscillating-sequence
builder.

Tail descriptors:

* ConstantTail(symbol): symbol repeated forever;
* PeriodicTail(word): word repeated forever (kept primitive and non-constant);
* ScheduleTail(blocks): the stream 1 0^b0 1 0^b1 ...; entries beyond the
  listed blocks continue by incrementing the last one, so every schedule has
  unbounded zero-runs;
* tail None: unspecified beyond the prefix (finite observation); such
  sequences cannot be classified.

CLI literal grammar: "0~" / "1~" constant tails, "(01)*" periodic tails, an
optional prefix of 0/1 digits in front, e.g. "0110(01)*".
"""

import re
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from . import kernels
from .core import check_point
from .errors import (
    DomainError,
    MapOverflowError,
    ScanExhaustedError,
    UndecidableSequenceError,
)


@dataclass(frozen=True)
class ConstantTail:
    symbol: int

    def __post_init__(self):
        if self.symbol not in (0, 1):
            raise DomainError("symbol must be 0 or 1")


@dataclass(frozen=True)
class PeriodicTail:
    word: Tuple[int, ...]

    def __post_init__(self):
        if not self.word or any(b not in (0, 1) for b in self.word):
            raise DomainError("periodic word must be a nonempty 0/1 word")


@dataclass(frozen=True)
class ScheduleTail:
    blocks: Tuple[int, ...]

    def __post_init__(self):
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise DomainError("schedule entries must be >= 1")

    def block(self, j):
        if j < len(self.blocks):
            return self.blocks[j]
        return self.blocks[-1] + (j - len(self.blocks) + 1)


Tail = Union[ConstantTail, PeriodicTail, ScheduleTail]


def _primitive(word):
    n = len(word)
    for d in range(1, n):
        if n % d == 0 and word == word[d:] + word[:d]:
            return word[:d]
    return word


@dataclass(frozen=True)
class SymbolSequence:
    prefix: Tuple[int, ...] = ()
    tail: Optional[Tail] = None

    def __post_init__(self):
        prefix = tuple(int(b) for b in self.prefix)
        if any(b not in (0, 1) for b in prefix):
            raise DomainError("prefix must consist of symbols 0 and 1")
        tail = self.tail
        if isinstance(tail, PeriodicTail):
            word = _primitive(tail.word)
            if len(set(word)) == 1:
                tail = ConstantTail(word[0])
            elif word != tail.word:
                tail = PeriodicTail(word)
        # absorb prefix symbols that the tail already produces
        if isinstance(tail, ConstantTail):
            while prefix and prefix[-1] == tail.symbol:
                prefix = prefix[:-1]
        elif isinstance(tail, PeriodicTail):
            word = tail.word
            while prefix and prefix[-1] == word[-1]:
                prefix = prefix[:-1]
                word = word[-1:] + word[:-1]
            tail = PeriodicTail(word)
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    def symbol_at(self, n):
        if n < 0:
            raise DomainError("index must be >= 0")
        if n < len(self.prefix):
            return self.prefix[n]
        m = n - len(self.prefix)
        tail = self.tail
        if tail is None:
            raise DomainError(f"sequence unspecified past index {len(self.prefix) - 1}")
        if isinstance(tail, ConstantTail):
            return tail.symbol
        if isinstance(tail, PeriodicTail):
            return tail.word[m % len(tail.word)]
        j = 0
        while True:
            if m == 0:
                return 1
            m -= 1
            b = tail.block(j)
            if m < b:
                return 0
            m -= b
            j += 1

    def symbols(self, depth):
        return tuple(self.symbol_at(n) for n in range(depth))

    def constant_from(self):
        """Index where a constant tail begins, or None."""
        if isinstance(self.tail, ConstantTail):
            return len(self.prefix)
        return None


def shift(s, n=1):
    """Drop n leading symbols, renormalizing prefix and tail."""
    if n < 0:
        raise DomainError("shift count must be >= 0")
    if n <= len(s.prefix):
        return SymbolSequence(s.prefix[n:], s.tail)
    m = n - len(s.prefix)
    tail = s.tail
    if tail is None:
        raise DomainError("cannot shift past an unspecified tail")
    if isinstance(tail, ConstantTail):
        return SymbolSequence((), tail)
    if isinstance(tail, PeriodicTail):
        k = m % len(tail.word)
        return SymbolSequence((), PeriodicTail(tail.word[k:] + tail.word[:k]))
    # walk into the schedule stream 1 0^B0 1 0^B1 ...
    j = 0
    while True:
        if m == 0:
            nblocks = max(j + 1, len(tail.blocks))
            return SymbolSequence((), ScheduleTail(tuple(tail.block(i) for i in range(j, nblocks))))
        m -= 1  # the block's leading 1
        b = tail.block(j)
        if m < b:
            rest = b - m
            if rest > 10**7:
                raise DomainError("shift into the middle of a huge block is not supported")
            nblocks = max(j + 2, len(tail.blocks))
            later = tuple(tail.block(i) for i in range(j + 1, nblocks))
            return SymbolSequence((0,) * rest, ScheduleTail(later))
        m -= b
        j += 1


CLASS_EVENTUALLY_CONSTANT = "EventuallyConstant"
CLASS_BOUNDED = "Bounded"
CLASS_OSCILLATING = "Oscillating"


def classify_sequence(s):
    """Classify a sequence; returns (kind, max_block or None).

    EventuallyConstant for constant tails; Bounded(N) for periodic tails with
    N the longest run of equal symbols anywhere in the infinite word;
    Oscillating for schedules (their zero-runs are unbounded by construction).
    """
    tail = s.tail
    if tail is None:
        raise UndecidableSequenceError("finite observation: tail unspecified")
    if isinstance(tail, ConstantTail):
        return CLASS_EVENTUALLY_CONSTANT, None
    if isinstance(tail, ScheduleTail):
        return CLASS_OSCILLATING, None
    # longest run over prefix + enough periods to cover all joins
    word = tail.word
    window = s.prefix + word * 3
    best = 1
    run = 1
    for a, b in zip(window, window[1:]):
        run = run + 1 if a == b else 1
        best = max(best, run)
    return CLASS_BOUNDED, best


@dataclass(frozen=True)
class ItineraryOutcome:
    kind: str  # "symbols" | "entered_v" | "exited_s" | "hit_real_axis"
    symbols: Tuple[int, ...] = ()
    step: Optional[int] = None


def itinerary(z, depth):
    """Record which half-strip each iterate visits: 0 above the real axis,
    1 below. Stops when the orbit enters the absorbing rectangle, leaves the
    strip, or lands on the real axis (within 1e-12). Points on the boundary
    lines keep their symbol forever.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    z = check_point(z)
    bits, code, step = kernels.itinerary_bits(z.real, z.imag, depth)
    if code == kernels.ITIN_OK:
        return ItineraryOutcome("symbols", tuple(bits))
    if code == kernels.ITIN_ENTERED_V:
        return ItineraryOutcome("entered_v", tuple(bits), step)
    if code == kernels.ITIN_EXITED_S:
        return ItineraryOutcome("exited_s", tuple(bits), step)
    if code == kernels.ITIN_HIT_REAL:
        return ItineraryOutcome("hit_real_axis", tuple(bits), step)
    raise MapOverflowError(
        f"orbit left the representable range at step {step}", step=step, symbols=bits
    )


_LITERAL_RE = re.compile(r"^([01]*)(?:\(([01]+)\)\*|([01])~)$")


def parse_sequence(text):
    """Parse a sequence literal: prefix digits + "(word)*" or "c~"."""
    m = _LITERAL_RE.match(text.strip())
    if not m:
        raise DomainError(
            f"bad sequence literal {text!r}; examples: \"0~\", \"1~\", \"(01)*\", \"0110(01)*\""
        )
    prefix = tuple(int(c) for c in m.group(1))
    if m.group(2) is not None:
        return SymbolSequence(prefix, PeriodicTail(tuple(int(c) for c in m.group(2))))
    return SymbolSequence(prefix, ConstantTail(int(m.group(3))))


def format_sequence(s):
    prefix = "".join(str(b) for b in s.prefix)
    tail = s.tail
    if tail is None:
        return prefix + "?"
    if isinstance(tail, ConstantTail):
        return f"{prefix}{tail.symbol}~"
    if isinstance(tail, PeriodicTail):
        return f"{prefix}({''.join(str(b) for b in tail.word)})*"
    return f"{prefix}[1" + "".join(f" 0^{b} 1" for b in tail.blocks) + " ...]"


def constant_sequence(symbol):
    return SymbolSequence((), ConstantTail(symbol))


def build_oscillating_sequence(radii, t_probe=8.0):
    """Greedy construction of a sequence whose ray provably exceeds the given
    moduli.

    For each stage j the eventually-constant sequence 1 0^b0 ... 1 0~ is
    probed for a parameter t_j with |ray(t_j)| > radii[j] + 1.05; the next
    block length is the agreement depth that keeps every extension within
    distance 1 of that far point, so the returned sequence satisfies
    |ray(t_j)| > radii[j] + 0.05.

    The scan walks t upward through (-2, t_probe] first; targets that the
    wandering part of the curve cannot reach (its modulus there is capped
    near 3.7) are found on the escaping tail instead, scanning upward from
    -max(6, |t_probe|).
    """
    from . import rays

    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise DomainError("radii must be strictly increasing")
    if not radii:
        return SymbolSequence((1,), ConstantTail(0))

    blocks = []
    step = 0.05
    floor = -max(6.0, abs(float(t_probe)), max(radii) + 2.1)
    for r in radii:
        target = r + 1.0 + 0.05
        stage_prefix = [1]
        for b in blocks:
            stage_prefix += [0] * b + [1]
        stage = SymbolSequence(tuple(stage_prefix), ConstantTail(0))
        t_j = None
        t = -2.0 + step
        while t <= t_probe + 1e-9:
            if abs(rays.ray_point(stage, t, 1e-9).z) > target:
                t_j = t
                break
            t += step
        if t_j is None:
            t = floor
            while t <= -2.0 + 1e-9:
                if abs(rays.ray_point(stage, t, 1e-9).z) > target:
                    t_j = t
                    break
                t += step
        if t_j is None:
            raise ScanExhaustedError(
                f"ray probe never exceeded modulus {target} within t in [{floor}, {t_probe}]"
            )
        blocks.append(rays.continuity_depth(stage, t_j, 1.0))
    return SymbolSequence((), ScheduleTail(tuple(blocks)))
