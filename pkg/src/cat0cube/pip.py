"""Posets with inconsistent pairs (PIPs) and their consistent order ideals.

A PIP is stored by element name; internally every element gets the index of
its position in the input, and subsets of elements are Python ``int``
bitmasks over those indices.  All enumeration orders are therefore
deterministic functions of the input order.
"""
from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, TooManyIdeals, ValidationError

MAX_ELEMENTS = 1 << 16
MAX_DRAWS = 1000


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, order=False)
class Ideal:
    """A subset of PIP elements, stored as a bitmask over element indices."""

    mask: int

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return _bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def sort_key(self):
        return (len(self), self.mask)

    def names(self, p: "Pip") -> list[str]:
        return [p.elements[i] for i in self]

    def __repr__(self):
        return f"Ideal({sorted(self)})"


EMPTY = Ideal(0)


class Pip:
    """Finite poset with inconsistent pairs.

    Parameters
    ----------
    elements : sequence of str
        Element names; their order fixes the internal indices.
    covers : iterable of (str, str)
        Pairs ``(lower, upper)`` of the order relation.  Non-cover pairs are
        accepted and simply absorbed by the transitive closure.
    inconsistent : iterable of (str, str)
        Inconsistent pairs; the full relation is the upward closure.

    Raises
    ------
    ValidationError
        Duplicate or unknown element, cycle in ``covers``, or an inconsistent
        pair (after closure) whose members are comparable.
    """

    def __init__(self, elements: Sequence[str], covers=(), inconsistent=()):
        elements = tuple(elements)
        if len(elements) > MAX_ELEMENTS:
            raise ValidationError(f"at most {MAX_ELEMENTS} elements are supported")
        index = {}
        for k, name in enumerate(elements):
            if name in index:
                raise ValidationError(f"duplicate element {name!r}")
            index[name] = k
        self.elements = elements
        self.index = index
        self.covers = tuple((self._idx(a), self._idx(b)) for a, b in covers)
        self.inconsistent_min = tuple(
            (self._idx(a), self._idx(b)) for a, b in inconsistent
        )
        m = len(elements)
        self.order = self._topological_order()

        # strict lower / upper sets as bitmasks
        self.below = [0] * m
        for j in self.order:
            for i in self._preds[j]:
                self.below[j] |= self.below[i] | (1 << i)
        self.above = [0] * m
        for i in range(m):
            for j in _bits(self.below[i]):
                self.above[j] |= 1 << i

        self.incons = [0] * m
        for a, b in self.inconsistent_min:
            up_a = self.above[a] | (1 << a)
            up_b = self.above[b] | (1 << b)
            for i in _bits(up_a):
                self.incons[i] |= up_b
            for i in _bits(up_b):
                self.incons[i] |= up_a
        for i in range(m):
            clash = self.incons[i] & (self.below[i] | self.above[i] | (1 << i))
            if clash:
                j = next(_bits(clash))
                raise ValidationError(
                    f"inconsistent pair ({elements[i]!r}, {elements[j]!r}) "
                    "is comparable"
                )

    def _idx(self, name) -> int:
        try:
            return self.index[name]
        except (KeyError, TypeError):
            raise ValidationError(f"unknown element {name!r}") from None

    def _topological_order(self) -> list[int]:
        m = len(self.elements)
        preds = [[] for _ in range(m)]
        indeg = [0] * m
        succs = [[] for _ in range(m)]
        for a, b in set(self.covers):
            preds[b].append(a)
            succs[a].append(b)
            indeg[b] += 1
        self._preds = preds
        heap = [i for i in range(m) if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)
            out.append(i)
            for j in succs[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        if len(out) != m:
            raise ValidationError("covers relation contains a cycle")
        return out

    # -- relations ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a: int, b: int) -> bool:
        return a == b or bool(self.below[b] >> a & 1)

    def inconsistent(self, a: int, b: int) -> bool:
        return bool(self.incons[a] >> b & 1)

    def ideal(self, names: Iterable[str]) -> Ideal:
        mask = 0
        for name in names:
            mask |= 1 << self._idx(name)
        return Ideal(mask)

    def is_down_closed(self, mask: int) -> bool:
        return all(self.below[i] & ~mask == 0 for i in _bits(mask))

    def is_consistent(self, mask: int) -> bool:
        return all(self.incons[i] & mask == 0 for i in _bits(mask))

    def maximal(self, mask: int) -> int:
        """Bitmask of the maximal elements of ``mask``."""
        return sum(1 << i for i in _bits(mask) if self.above[i] & mask == 0)

    def addable(self, mask: int) -> int:
        """Elements ``a`` outside the ideal ``mask`` with ``mask | {a}`` a consistent ideal."""
        out = 0
        for a in range(len(self.elements)):
            if mask >> a & 1:
                continue
            if self.below[a] & ~mask == 0 and self.incons[a] & mask == 0:
                out |= 1 << a
        return out

    def to_dict(self) -> dict:
        names = self.elements
        return {
            "elements": list(names),
            "covers": [[names[a], names[b]] for a, b in self.covers],
            "inconsistent": [[names[a], names[b]] for a, b in self.inconsistent_min],
        }

    def __repr__(self):
        return f"Pip({self.to_dict()})"


def _as_mask(p: Pip, s) -> int:
    if isinstance(s, Ideal):
        return s.mask
    if isinstance(s, int):
        return s
    return p.ideal(s).mask


def parse_pip(text: str) -> Pip:
    """Parse the JSON instance format ``{"elements", "covers", "inconsistent"}``."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError, UnicodeDecodeError) as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object")
    keys = {"elements", "covers", "inconsistent"}
    unknown = set(doc) - keys
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")
    missing = keys - set(doc)
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    elements = doc["elements"]
    if not isinstance(elements, list) or not all(isinstance(e, str) for e in elements):
        raise ParseError("'elements' must be an array of strings")
    pairs = {}
    for key in ("covers", "inconsistent"):
        val = doc[key]
        if not isinstance(val, list) or not all(
            isinstance(pr, list) and len(pr) == 2 and all(isinstance(e, str) for e in pr)
            for pr in val
        ):
            raise ParseError(f"{key!r} must be an array of 2-arrays of strings")
        pairs[key] = [tuple(pr) for pr in val]
    return Pip(elements, pairs["covers"], pairs["inconsistent"])


def dump_pip(p: Pip) -> str:
    return json.dumps(p.to_dict())


def is_consistent_ideal(p: Pip, s) -> bool:
    """True iff ``s`` is downward closed and free of inconsistent pairs."""
    mask = _as_mask(p, s)
    return p.is_down_closed(mask) and p.is_consistent(mask)


def enumerate_ideals(p: Pip, limit: int = 10_000) -> list[Ideal]:
    """All consistent order ideals, sorted by size then bitmask.

    Raises ``TooManyIdeals`` as soon as more than ``limit`` are found.
    """
    order = p.order
    found = []

    def rec(k, mask):
        if k == len(order):
            found.append(mask)
            if len(found) > limit:
                raise TooManyIdeals(f"more than {limit} consistent ideals")
            return
        i = order[k]
        rec(k + 1, mask)
        if p.below[i] & ~mask == 0 and p.incons[i] & mask == 0:
            rec(k + 1, mask | (1 << i))

    rec(0, 0)
    ideals = [Ideal(m) for m in found]
    ideals.sort(key=Ideal.sort_key)
    return ideals


def linear_extension(p: Pip, s) -> list[int]:
    """Order the members of ``s`` so that every prefix is downward closed.

    Ties go to the smaller element index.  Works for any subset: the order
    used is the one induced on ``s``.
    """
    mask = _as_mask(p, s)
    members = list(_bits(mask))
    pending = {i: bin(p.below[i] & mask).count("1") for i in members}
    heap = [i for i in members if pending[i] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        i = heapq.heappop(heap)
        out.append(i)
        for j in _bits(p.above[i] & mask):
            pending[j] -= 1
            if pending[j] == 0:
                heapq.heappush(heap, j)
    return out


def complex_dimension(p: Pip, limit: int = 10_000) -> int:
    """Largest cube dimension of the complex (max number of maximal elements of an ideal)."""
    return max(bin(p.maximal(I.mask)).count("1") for I in enumerate_ideals(p, limit))


def random_pip(
    m: int,
    density: float = 0.3,
    seed: int = 0,
    cover_density: float | None = None,
    max_dim: int | None = None,
) -> Pip:
    """Random PIP on ``m`` elements named ``e0 .. e{m-1}``.

    Order relations are drawn with probability ``cover_density`` (default
    ``density / 2``) along a random permutation and reduced to covers.
    Incomparable pairs are then visited in random order and made
    inconsistent with probability ``density`` whenever the upward closure
    stays valid.  With ``max_dim`` set, draws are repeated until the complex
    has no cube of larger dimension, giving up with ``ValueError`` after
    ``MAX_DRAWS`` attempts.
    """
    rng = random.Random(seed)
    if cover_density is None:
        cover_density = density / 2
    names = [f"e{i}" for i in range(m)]
    for _ in range(MAX_DRAWS):
        perm = list(range(m))
        rng.shuffle(perm)
        rel = set()
        for x in range(m):
            for y in range(x + 1, m):
                if rng.random() < cover_density:
                    rel.add((perm[x], perm[y]))
        base = Pip(names, [(names[a], names[b]) for a, b in rel])
        covers = [
            (a, b) for a, b in rel
            # keep (a, b) only if nothing sits strictly between a and b
            if not (base.above[a] & base.below[b])
        ]
        covers.sort()
        cover_names = [(names[a], names[b]) for a, b in covers]
        candidates = [
            (a, b) for a in range(m) for b in range(a + 1, m)
            if not base.leq(a, b) and not base.leq(b, a)
        ]
        rng.shuffle(candidates)
        chosen = []
        current = base
        for a, b in candidates:
            if current.inconsistent(a, b):
                continue
            if rng.random() >= density:
                continue
            trial = chosen + [(names[a], names[b])]
            try:
                current = Pip(names, cover_names, trial)
            except ValidationError:
                continue
            chosen = trial
        out = Pip(names, cover_names, chosen)
        if max_dim is None or complex_dimension(out) <= max_dim:
            return out
    raise ValueError(f"no PIP with dimension <= {max_dim} after {MAX_DRAWS} draws")
