"""Canonical hereditarily finite set values.

An ``HFValue`` stores its elements as a duplicate-free tuple sorted by
the global order (cardinality first, then lexicographically on the
sorted children, recursively).  Canonical form makes structural
equality coincide with extensional equality and gives deterministic
printing.  Values are immutable and hash-cached, so they are safe to
share between threads.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import NotAnOrdinalNumeral, NotAPair, ParseError


class HFValue:
    __slots__ = ("children", "_hash")

    def __init__(self, children=()):
        """Build a canonical value from an iterable of HFValue elements.
        Duplicates collapse; order of the input is irrelevant."""
        kids = sorted(set(children))
        object.__setattr__(self, "children", tuple(kids))
        object.__setattr__(self, "_hash", hash(self.children))

    def __setattr__(self, *_):
        raise AttributeError("HFValue is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, HFValue) and self.children == other.children

    def __lt__(self, other):
        return hf_compare(self, other) < 0

    def __le__(self, other):
        return hf_compare(self, other) <= 0

    def __gt__(self, other):
        return hf_compare(self, other) > 0

    def __ge__(self, other):
        return hf_compare(self, other) >= 0

    def __contains__(self, elem):
        return elem in self.children

    def __len__(self):
        return len(self.children)

    def __iter__(self):
        return iter(self.children)

    def __repr__(self):
        return format_hf(self)


EMPTY = HFValue()


def mk_set(elems=()) -> HFValue:
    """Canonical set with exactly the distinct given elements."""
    return HFValue(elems)


def hf_compare(a: HFValue, b: HFValue) -> int:
    """Total order: by cardinality, then lexicographically on the
    (already sorted) children.  Returns -1, 0 or 1."""
    if a is b or a.children == b.children:
        return 0
    if len(a) != len(b):
        return -1 if len(a) < len(b) else 1
    for x, y in zip(a.children, b.children):
        c = hf_compare(x, y)
        if c:
            return c
    return 0


def is_subset(a: HFValue, b: HFValue) -> bool:
    return set(a.children) <= set(b.children)


def union(a: HFValue, b: HFValue) -> HFValue:
    return HFValue(a.children + b.children)


def adjoin(a: HFValue, elem: HFValue) -> HFValue:
    return HFValue(a.children + (elem,))


def rank(v: HFValue) -> int:
    if not v.children:
        return 0
    return 1 + max(rank(c) for c in v.children)


def subsets(v: HFValue):
    """All subsets of ``v`` in a deterministic order (by bit mask over
    the sorted children).  2**len(v) values."""
    kids = v.children
    for mask in range(1 << len(kids)):
        yield HFValue(kids[i] for i in range(len(kids)) if mask >> i & 1)


def format_hf(v: HFValue) -> str:
    return "{" + ",".join(format_hf(c) for c in v.children) + "}"


def parse_hf(src: str) -> HFValue:
    """Inverse of ``format_hf``; accepts any whitespace-free nesting of
    braces and commas."""
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(src) or src[pos] != "{":
            raise ParseError(f"expected '{{' at offset {pos}")
        pos += 1
        elems = []
        if pos < len(src) and src[pos] == "}":
            pos += 1
            return HFValue(elems)
        while True:
            elems.append(parse())
            if pos >= len(src):
                raise ParseError("unterminated set literal")
            if src[pos] == ",":
                pos += 1
                continue
            if src[pos] == "}":
                pos += 1
                return HFValue(elems)
            raise ParseError(f"unexpected {src[pos]!r} at offset {pos}")

    src = "".join(src.split())
    v = parse()
    if pos != len(src):
        raise ParseError(f"trailing input at offset {pos}")
    return v


def nat_encode(n: int) -> HFValue:
    """Ordinal encoding: 0 is the empty set, n+1 adjoins n to itself."""
    if n < 0:
        raise ValueError("naturals only")
    v = EMPTY
    for _ in range(n):
        v = adjoin(v, v)
    return v


def nat_decode(v: HFValue) -> int:
    """Inverse of ``nat_encode``; rejects values that are not ordinals."""
    n = len(v)
    if v != nat_encode(n):
        raise NotAnOrdinalNumeral(format_hf(v))
    return n


def pair_encode(a: HFValue, b: HFValue) -> HFValue:
    """Ordered pair as {{a},{a,b}} (collapses to {{a}} when a = b)."""
    return HFValue((HFValue((a,)), HFValue((a, b))))


def pair_decode(v: HFValue):
    """Recover (a, b) from a pair encoding, or raise NotAPair."""
    kids = v.children
    if len(kids) == 1:
        (inner,) = kids
        if len(inner) == 1:
            return inner.children[0], inner.children[0]
        raise NotAPair(format_hf(v))
    if len(kids) == 2:
        # canonical order puts the singleton {a} first
        first, second = kids
        if len(first) == 1 and len(second) == 2:
            a = first.children[0]
            if a in second:
                (b,) = (c for c in second.children if c != a)
                return a, b
    raise NotAPair(format_hf(v))


def is_pair(v: HFValue) -> bool:
    try:
        pair_decode(v)
        return True
    except NotAPair:
        return False


@lru_cache(maxsize=8)
def universe(max_rank: int):
    """All values of rank at most ``max_rank``, sorted.  Grows as a
    tower of exponentials; ranks beyond 3 are impractical in full."""
    if max_rank == 0:
        return (EMPTY,)
    prev = universe(max_rank - 1)
    out = set()
    for mask in range(1 << len(prev)):
        out.add(HFValue(prev[i] for i in range(len(prev)) if mask >> i & 1))
    return tuple(sorted(out))
