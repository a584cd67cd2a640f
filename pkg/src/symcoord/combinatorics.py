"""Integer partitions and the small index sets used by the diagonal formulas."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence


@dataclass(frozen=True, order=False)
class Partition:
    """A weakly decreasing tuple of positive integers.

    The empty partition is a valid value (weight 0, length 0).
    """

    parts: tuple[int, ...] = ()
    multiplicities: Mapping[int, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "multiplicities", dict(Counter(parts)))

    @classmethod
    def of(cls, parts: Iterable[int]) -> "Partition":
        """Build a partition from parts in any order (zeros dropped)."""
        return cls(tuple(sorted((p for p in parts if p), reverse=True)))

    @classmethod
    def from_multiplicities(cls, mult: Mapping[int, int]) -> "Partition":
        return cls.of(h for h, m in mult.items() for _ in range(m))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse the textual form ``"[3,1,1]"`` (brackets optional)."""
        body = text.strip().strip("[]()").strip()
        if not body:
            return cls(())
        return cls.of(int(tok) for tok in body.split(","))

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0] if self.parts else 0

    def m(self, h: int) -> int:
        """Multiplicity of the part ``h``."""
        return self.multiplicities.get(h, 0)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def remove_part(self, h: int, d: int) -> "Partition":
        """Replace one instance of the part ``h`` by ``h - d`` (dropped when zero)."""
        if self.m(h) == 0:
            raise ValueError(f"{self} has no part {h}")
        if not 0 <= d <= h:
            raise ValueError(f"cannot subtract {d} from part {h}")
        parts = list(self.parts)
        parts.remove(h)
        parts.append(h - d)
        return Partition.of(parts)

    def add_part(self, h: int) -> "Partition":
        return Partition.of(self.parts + (h,))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "[" + ",".join(map(str, self.parts)) + "]"


# Alias used where the partition records which indices of a simple derivative coincide.
DerivativePattern = Partition


def enumerate_partitions(r: int) -> list[Partition]:
    """All partitions of ``r`` in reverse-lexicographic order; ``r = 0`` gives ``[()]``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return list(_partitions(r, r))


@lru_cache(maxsize=None)
def _partitions_cached(r: int, cap: int) -> tuple[tuple[int, ...], ...]:
    if r == 0:
        return ((),)
    out = []
    for first in range(min(r, cap), 0, -1):
        for rest in _partitions_cached(r - first, first):
            out.append((first,) + rest)
    return tuple(out)


def _partitions(r: int, cap: int) -> Iterator[Partition]:
    for parts in _partitions_cached(r, cap):
        yield Partition(parts)


def partition_count(r: int) -> int:
    """Number of partitions of ``r`` via Euler's pentagonal recurrence."""
    p = [1] + [0] * r
    for n in range(1, r + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p[r]


def conjugate(lam: Partition) -> Partition:
    """Transpose of the Ferrers diagram."""
    if not lam.parts:
        return lam
    return Partition(tuple(sum(1 for p in lam.parts if p > i) for i in range(lam.parts[0])))


def dominates(mu: Partition, lam: Partition) -> bool:
    """True when every prefix sum of ``mu`` is at least that of ``lam``."""
    if mu.weight != lam.weight:
        raise ValueError(f"incomparable partitions: {mu} has weight {mu.weight}, {lam} has weight {lam.weight}")
    a = itertools.accumulate(mu.parts + (0,) * max(0, lam.length - mu.length))
    b = itertools.accumulate(lam.parts + (0,) * max(0, mu.length - lam.length))
    return all(x >= y for x, y in zip(a, b))


def compositions(total: int, k: int, minima: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Ordered ``k``-tuples summing to ``total`` with entry ``i`` at least ``minima[i]`` (default 1)."""
    if minima is None:
        minima = (1,) * k
    if k == 0:
        if total == 0:
            yield ()
        return
    rest_min = sum(minima[1:])
    for first in range(minima[0], total - rest_min + 1):
        for tail in compositions(total - first, k - 1, minima[1:]):
            yield (first,) + tail


@dataclass(frozen=True)
class IndexTupleA:
    """Element ``(a, b)`` of A_{K,nu}: ``a + sum(b) = |K| + nu + 1``, all entries positive."""

    a: int
    b: Mapping[int, int]

    def __hash__(self):
        return hash((self.a, tuple(sorted(self.b.items()))))


@dataclass(frozen=True)
class IndexTupleB:
    """Element ``(a, c)`` of B_{J,alpha}: ``c[beta] >= |J_beta|`` and ``a + sum(c) = sum |J|``."""

    a: int
    c: Mapping[int, int]

    def __hash__(self):
        return hash((self.a, tuple(sorted(self.c.items()))))


def enumerate_A(K: Iterable[int], nu: int) -> list[IndexTupleA]:
    if nu < 0:
        raise ValueError("nu must be non-negative")
    keys = sorted(K)
    total = len(keys) + nu + 1
    return [IndexTupleA(comp[0], dict(zip(keys, comp[1:]))) for comp in compositions(total, len(keys) + 1)]


def enumerate_B(block_sizes: Sequence[int], alpha: int) -> list[IndexTupleB]:
    """Tuples for the block ``alpha`` (an index into ``block_sizes``)."""
    if any(s < 1 for s in block_sizes):
        raise ValueError("block sizes must be positive")
    others = [beta for beta in range(len(block_sizes)) if beta != alpha]
    total = sum(block_sizes)
    minima = (1,) + tuple(block_sizes[beta] for beta in others)
    return [IndexTupleB(comp[0], dict(zip(others, comp[1:]))) for comp in compositions(total, len(others) + 1, minima)]


def enumerate_Xi(c: Mapping[int, int]) -> list[dict[int, int]]:
    """All ``kappa`` with ``kappa = 0`` where ``c = 0`` and ``1 <= kappa <= c`` otherwise."""
    keys = sorted(c)
    ranges = [range(1, c[k] + 1) if c[k] > 0 else (0,) for k in keys]
    return [dict(zip(keys, combo)) for combo in itertools.product(*ranges)]


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (restricted-growth enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        yield [[first]] + smaller
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]


def pattern_labels(sigma: Partition) -> tuple[int, ...]:
    """Index map of a simple derivative realizing ``sigma``: label ``p`` repeated ``sigma[p]`` times."""
    return tuple(p for p, s in enumerate(sigma.parts) for _ in range(s))


def count_X(sigma: Partition, lam: Partition) -> int:
    """Set partitions of the derivative slots into blocks of sizes ``lam`` with distinct labels per block.

    Brute force over all set partitions; intended as an oracle, capped at weight 8.
    """
    if sigma.weight != lam.weight:
        raise ValueError("sigma and lambda must have equal weight")
    if sigma.weight > 8:
        raise ValueError("count_X is capped at weight 8")
    labels = pattern_labels(sigma)
    target = sorted(lam.parts)
    count = 0
    for blocks in set_partitions(range(len(labels))):
        if sorted(len(b) for b in blocks) != target:
            continue
        if all(len({labels[q] for q in b}) == len(b) for b in blocks):
            count += 1
    return count


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)
