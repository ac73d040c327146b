"""Finite unions of disjoint closed real intervals."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateSet, EmptyInput, InputError, ZeroScale


@dataclass(frozen=True)
class IntervalUnion:
    """A compact set ``K = E_1 u ... u E_p`` with ``E_j = [alpha_j, beta_j]``.

    Bands are sorted, non-degenerate and strictly separated. Instances are
    immutable; build them with :func:`normalize_union` when the input may
    overlap or be unsorted.
    """

    bands: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        bands = tuple((float(a), float(b)) for a, b in self.bands)
        object.__setattr__(self, "bands", bands)
        if not bands:
            raise EmptyInput("an interval union needs at least one band")
        for a, b in bands:
            if not (np.isfinite(a) and np.isfinite(b)):
                raise InputError(f"non-finite band endpoint in ({a}, {b})")
            if not a < b:
                raise DegenerateSet(f"band ({a}, {b}) has no interior")
        for (_, b0), (a1, _) in zip(bands, bands[1:]):
            if not b0 < a1:
                raise InputError(f"bands not sorted and disjoint near {b0}, {a1}")

    @property
    def p(self) -> int:
        return len(self.bands)

    @property
    def alpha(self) -> np.ndarray:
        return np.array([a for a, _ in self.bands])

    @property
    def beta(self) -> np.ndarray:
        return np.array([b for _, b in self.bands])

    @property
    def endpoints(self) -> np.ndarray:
        """All 2p endpoints in increasing order."""
        return np.array([e for band in self.bands for e in band])

    @property
    def gaps(self) -> tuple[tuple[float, float], ...]:
        return tuple((b0, a1) for (_, b0), (a1, _) in zip(self.bands, self.bands[1:]))

    @property
    def hull(self) -> tuple[float, float]:
        return self.bands[0][0], self.bands[-1][1]

    @property
    def length(self) -> float:
        return float(sum(b - a for a, b in self.bands))

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(a - tol <= x <= b + tol for a, b in self.bands)

    def band_index(self, x: float) -> int | None:
        """Index of the band whose open interior holds ``x``, else ``None``."""
        for j, (a, b) in enumerate(self.bands):
            if a < x < b:
                return j
        return None

    def issubset(self, other: "IntervalUnion", tol: float = 0.0) -> bool:
        return all(
            any(a0 - tol <= a and b <= b0 + tol for a0, b0 in other.bands)
            for a, b in self.bands
        )


def normalize_union(raw: Iterable[Sequence[float]]) -> IntervalUnion:
    """Sort, merge overlapping or touching pairs, and validate.

    Touching means exact equality ``b_j == a_{j+1}``; no tolerance is applied.

    >>> normalize_union([(2, 3), (0, 1), (0.5, 1.5)]).bands
    ((0.0, 1.5), (2.0, 3.0))
    """
    pairs = [(float(a), float(b)) for a, b in raw]
    if not pairs:
        raise EmptyInput("empty list of intervals")
    for a, b in pairs:
        if a > b:
            raise InputError(f"interval ({a}, {b}) has left endpoint > right endpoint")
    pairs.sort()
    merged = [list(pairs[0])]
    for a, b in pairs[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    for a, b in merged:
        if a == b:
            raise DegenerateSet(f"merged union contains the isolated point {a}")
    return IntervalUnion(tuple((a, b) for a, b in merged))


def affine_map(U: IntervalUnion, scale: float, shift: float) -> IntervalUnion:
    """Image of ``U`` under ``x -> scale * x + shift``."""
    if scale == 0:
        raise ZeroScale("affine scale must be nonzero")
    images = [(scale * a + shift, scale * b + shift) for a, b in U.bands]
    return normalize_union((min(u, v), max(u, v)) for u, v in images)


def parse_bands(text: str) -> IntervalUnion:
    """Parse the inline form ``"a b, c d, ..."``."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        fields = chunk.split()
        if len(fields) != 2:
            raise InputError(f"expected 'alpha beta', got {chunk!r}")
        try:
            pairs.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise InputError(f"could not parse band {chunk!r}") from None
    return normalize_union(pairs)


def parse_set_text(text: str) -> IntervalUnion:
    """Parse the set-file format: one ``alpha beta`` per line, ``#`` comments."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 2:
            raise InputError(f"line {lineno}: expected 'alpha beta', got {line!r}")
        try:
            pairs.append((float(fields[0]), float(fields[1])))
        except ValueError:
            raise InputError(f"line {lineno}: could not parse {line!r}") from None
    return normalize_union(pairs)


def format_set_text(U: IntervalUnion) -> str:
    # repr() round-trips doubles exactly
    lines = ["# alpha beta"]
    lines += [f"{a!r} {b!r}" for a, b in U.bands]
    return "\n".join(lines) + "\n"


def read_set_file(path: str | os.PathLike) -> IntervalUnion:
    with open(path, encoding="utf-8") as fh:
        return parse_set_text(fh.read())


def write_set_file(U: IntervalUnion, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_set_text(U))
