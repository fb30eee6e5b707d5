"""Two-coloured partitions, their linear maps, and partition-level
closures used as a combinatorial cross-check of the tensor engine.

Points are numbered 1-based, upper row first, each row left to right.
Block structure never constrains colours; colours matter only for which
operations are allowed (contractions need opposite colours) and for the
word bookkeeping of the generated category.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .linalg import LinMap, ONE, Subspace, Vec
from .words import WHITE, validate_word, word_star


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    upper: str
    lower: str
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        validate_word(self.upper)
        validate_word(self.lower)
        total = len(self.upper) + len(self.lower)
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        seen = [p for b in blocks for p in b]
        if sorted(seen) != list(range(1, total + 1)):
            raise PartitionError(
                f"blocks {blocks} do not partition 1..{total}"
            )

    @property
    def n_upper(self) -> int:
        return len(self.upper)

    @property
    def n_lower(self) -> int:
        return len(self.lower)

    @property
    def size(self) -> int:
        return self.n_upper + self.n_lower


def identity_partition(word: str) -> Partition:
    m = len(word)
    return Partition(word, word, tuple((i + 1, m + i + 1) for i in range(m)))


def cup(word2: str) -> Partition:
    if len(word2) != 2:
        raise PartitionError("cup needs a two-letter word")
    return Partition("", word2, ((1, 2),))


def singleton(word1: str) -> Partition:
    if len(word1) != 1:
        raise PartitionError("singleton needs a one-letter word")
    return Partition("", word1, ((1,),))


def one_block(word: str) -> Partition:
    return Partition("", word, (tuple(range(1, len(word) + 1)),))


def partition_map(p: Partition, n: int) -> LinMap:
    """Delta map: entry (lower indices; upper indices) is 1 iff the
    combined assignment is constant on every block."""
    if n < 1:
        raise PartitionError("dimension must be positive")
    m, low = p.n_upper, p.n_lower
    data: Vec = {}
    assignment = [0] * (m + low)

    def rec(bi: int) -> None:
        if bi == len(p.blocks):
            col = 0
            for pos in range(m):
                col = col * n + assignment[pos]
            row = 0
            for pos in range(low):
                row = row * n + assignment[m + pos]
            data[row * n**m + col] = ONE
            return
        for v in range(n):
            for pt in p.blocks[bi]:
                assignment[pt - 1] = v
            rec(bi + 1)

    rec(0)
    return LinMap(n, m, low, data)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        self.parent[self.find(x)] = self.find(y)


def partition_compose(q: Partition, p: Partition) -> tuple[Partition, int]:
    """Stack q below p (q . p); counts closed middle components."""
    if q.upper != p.lower:
        raise PartitionError(
            f"cannot compose: interface {q.upper!r} != {p.lower!r}"
        )
    mp, np_ = p.n_upper, p.n_lower
    nq = q.n_lower
    # node ids: 0..mp-1 p-upper, mp..mp+np-1 interface, then q-lower
    uf = _UnionFind(mp + np_ + nq)
    for b in p.blocks:
        for a, c in zip(b, b[1:]):
            uf.union(a - 1, c - 1)
    for b in q.blocks:
        ids = []
        for pt in b:
            if pt <= q.n_upper:
                ids.append(mp + pt - 1)
            else:
                ids.append(mp + np_ + (pt - q.n_upper) - 1)
        for a, c in zip(ids, ids[1:]):
            uf.union(a, c)
    comps: dict[int, list[int]] = {}
    for node in range(mp + np_ + nq):
        comps.setdefault(uf.find(node), []).append(node)
    blocks = []
    loops = 0
    for nodes in comps.values():
        pts = []
        for node in nodes:
            if node < mp:
                pts.append(node + 1)
            elif node >= mp + np_:
                pts.append(mp + (node - mp - np_) + 1)
        if pts:
            blocks.append(tuple(sorted(pts)))
        else:
            loops += 1
    return Partition(p.upper, q.lower, tuple(blocks)), loops


def partition_tensor(p: Partition, q: Partition) -> Partition:
    mp, np_ = p.n_upper, p.n_lower
    mq, nq = q.n_upper, q.n_lower

    def relab_p(t: int) -> int:
        return t if t <= mp else t + mq

    def relab_q(t: int) -> int:
        return mp + t if t <= mq else t + mp + np_

    blocks = tuple(tuple(relab_p(t) for t in b) for b in p.blocks) + tuple(
        tuple(relab_q(t) for t in b) for b in q.blocks
    )
    return Partition(p.upper + q.upper, p.lower + q.lower, blocks)


def partition_involute(p: Partition) -> Partition:
    m, low = p.n_upper, p.n_lower

    def relab(t: int) -> int:
        return t - m if t > m else t + low

    blocks = tuple(tuple(relab(t) for t in b) for b in p.blocks)
    return Partition(p.lower, p.upper, blocks)


def partition_rotate(p: Partition) -> Partition:
    """Cyclic move of the last lower point to the first lower position."""
    m, low = p.n_upper, p.n_lower
    if low == 0:
        raise PartitionError("no lower points to rotate")

    def relab(t: int) -> int:
        if t <= m:
            return t
        return m + 1 if t == m + low else t + 1

    blocks = tuple(tuple(relab(t) for t in b) for b in p.blocks)
    return Partition(p.upper, p.lower[-1] + p.lower[:-1], blocks)


def partition_contract(p: Partition, i: int) -> Partition:
    """Cap the lower points i, i+1 (1-based); opposite colours required."""
    m, low = p.n_upper, p.n_lower
    if not 1 <= i < low:
        raise PartitionError("contraction position out of range")
    if p.lower[i - 1] == p.lower[i]:
        raise PartitionError("contraction needs opposite colours")
    a, b = m + i, m + i + 1
    uf_blocks = [set(blk) for blk in p.blocks]
    ia = next(k for k, blk in enumerate(uf_blocks) if a in blk)
    ib = next(k for k, blk in enumerate(uf_blocks) if b in blk)
    if ia != ib:
        uf_blocks[ia] |= uf_blocks[ib]
        del uf_blocks[ib]
    survivor = [blk - {a, b} for blk in uf_blocks]

    def relab(t: int) -> int:
        return t if t < a else t - 2

    blocks = tuple(tuple(sorted(relab(t) for t in blk)) for blk in survivor if blk)
    return Partition(p.upper, p.lower[: i - 1] + p.lower[i + 1 :], blocks)


def partition_reflect(p: Partition) -> Partition:
    """Reverse the lower row and star its colours (fix partitions only)."""
    if p.n_upper:
        raise PartitionError("reflection is defined on fix partitions")
    low = p.n_lower
    blocks = tuple(tuple(sorted(low + 1 - t for t in b)) for b in p.blocks)
    return Partition("", word_star(p.lower), blocks)


def partition_closure(
    generators: Iterable[Partition], max_points: int
) -> set[Partition]:
    """Least set containing the generators, the coloured cups, and the
    one-letter identities, closed under tensor, composition, involution,
    rotation, contraction, and reflection within the point bound."""
    seeds = [
        Partition("", "", ()),
        cup("wb"),
        cup("bw"),
        identity_partition("w"),
        identity_partition("b"),
    ]
    seeds.extend(generators)
    closed: set[Partition] = set()
    by_upper: dict[str, list[Partition]] = {}
    todo = [p for p in seeds if p.size <= max_points]

    def add(p: Partition) -> None:
        if p.size <= max_points and p not in closed:
            todo.append(p)

    while todo:
        p = todo.pop()
        if p in closed:
            continue
        closed.add(p)
        by_upper.setdefault(p.upper, []).append(p)
        add(partition_involute(p))
        if p.n_lower:
            add(partition_rotate(p))
        if p.n_upper == 0:
            add(partition_reflect(p))
        for i in range(1, p.n_lower):
            if p.lower[i - 1] != p.lower[i]:
                add(partition_contract(p, i))
        for q in list(closed):
            if p.size + q.size <= max_points:
                add(partition_tensor(p, q))
                add(partition_tensor(q, p))
            if q.upper == p.lower and p.n_upper + q.n_lower <= max_points:
                add(partition_compose(q, p)[0])
            if p.upper == q.lower and q.n_upper + p.n_lower <= max_points:
                add(partition_compose(p, q)[0])
    return closed


def closure_fix_span(closed: Iterable[Partition], word: str, n: int) -> Subspace:
    """Span of the maps of all fix partitions on the given word."""
    out = Subspace.zero(n, 0, len(word))
    for p in closed:
        if p.n_upper == 0 and p.lower == word:
            out, _ = out.inserted(partition_map(p, n).data)
    return out


# ---------------------------------------------------------------------------
# colour-blind fix shapes: the cheap oracle for orthogonal-type categories


Shape = tuple[tuple[int, ...], ...]  # blocks over 0-based points of one row


def shape_of(blocks: Iterable[Iterable[int]]) -> Shape:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


def shape_points(s: Shape) -> int:
    return sum(len(b) for b in s)


def shape_tensor(a: Shape, b: Shape) -> Shape:
    off = shape_points(a)
    return shape_of(list(a) + [tuple(p + off for p in blk) for blk in b])


def shape_rotate(s: Shape) -> Shape:
    k = shape_points(s)
    return shape_of(tuple((p + 1) % k for p in b) for b in s)


def shape_reflect(s: Shape) -> Shape:
    k = shape_points(s)
    return shape_of(tuple(k - 1 - p for p in b) for b in s)


def shape_contract(s: Shape, i: int) -> Shape:
    """Cap points i, i+1 (0-based); closed loops are dropped (the span
    oracle never needs the scalar factor)."""
    blocks = [set(b) for b in s]
    ia = next(k for k, b in enumerate(blocks) if i in b)
    ib = next(k for k, b in enumerate(blocks) if i + 1 in b)
    if ia != ib:
        merged = blocks[ia] | blocks[ib]
        blocks = [b for k, b in enumerate(blocks) if k not in (ia, ib)]
        blocks.append(merged)
    out = []
    for b in blocks:
        rest = {p if p < i else p - 2 for p in b if p not in (i, i + 1)}
        if rest:
            out.append(tuple(sorted(rest)))
    return shape_of(out)


def fix_shape_closure(generators: Iterable[Shape], max_points: int) -> set[Shape]:
    """Closure of colour-blind fix shapes under tensor, rotation,
    reflection, and contraction; always contains the cup."""
    todo = [shape_of([(0, 1)]), shape_of([])]
    todo.extend(generators)
    closed: set[Shape] = set()

    def add(s: Shape) -> None:
        if shape_points(s) <= max_points and s not in closed:
            todo.append(s)

    while todo:
        s = todo.pop()
        if s in closed:
            continue
        closed.add(s)
        k = shape_points(s)
        if k:
            add(shape_rotate(s))
            add(shape_reflect(s))
        for i in range(k - 1):
            add(shape_contract(s, i))
        for other in list(closed):
            if k + shape_points(other) <= max_points:
                add(shape_tensor(s, other))
                add(shape_tensor(other, s))
    return closed


def shape_map(s: Shape, n: int) -> LinMap:
    """The fix vector of a colour-blind shape."""
    k = shape_points(s)
    p = Partition("", WHITE * k, tuple(tuple(q + 1 for q in b) for b in s))
    return partition_map(p, n)


def shape_span(shapes: Iterable[Shape], length: int, n: int) -> Subspace:
    out = Subspace.zero(n, 0, length)
    for s in shapes:
        if shape_points(s) == length:
            out, _ = out.inserted(shape_map(s, n).data)
    return out
