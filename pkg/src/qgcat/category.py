"""Representation-category tables: the fixed-point-space saturation
engine, its cyclically extended variant, the free-product fixed point,
and gluing.

The engine computes a least fixed point by round-based chaotic
iteration.  All candidate emission happens on growth deltas only, and
both span insertion and the derived-vector operations are memoized on
object identity, so words whose spaces evolve identically (e.g. all
words of one length in an orthogonal-type table) share all work.  The
result is a lower bound of the true category at the given cutoffs; the
partition oracle certifies exactness on the easy inputs used in tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .frame import (
    Frame,
    SmallMat,
    morphism_from_fix,
    vec_contract,
    vec_reflect,
    vec_rotate,
    vec_rotate_inv,
)
from .linalg import LinMap, ONE, ShapeError, Subspace, Vec, intify, vec_key
from .words import (
    BLACK_SQ,
    ExtWord,
    WHITE_SQ,
    colour_sum,
    enumerate_words,
    ext_concat,
    ext_rotate_inv_word,
    ext_rotate_word,
    glue_word,
    validate_word,
    word_star,
)


class CutoffError(ValueError):
    """A request goes beyond the cutoffs a table was built with."""


class TableError(ValueError):
    """Incompatible tables or malformed generators."""


def _word_key(w: str) -> tuple[int, str]:
    return (len(w), w.replace("w", "0").replace("b", "1"))


# ---------------------------------------------------------------------------
# tables


@dataclass
class FixTable:
    """Fixed-point spaces per word up to the work cutoff."""

    frame: Frame
    report_cutoff: int
    work_cutoff: int
    spaces: dict[str, Subspace]
    semantics: str = "lower_bound"
    _mor_cache: dict = field(default_factory=dict, repr=False)

    def space(self, w: str) -> Subspace:
        validate_word(w)
        if len(w) > self.work_cutoff:
            raise CutoffError(f"word {w!r} beyond work cutoff {self.work_cutoff}")
        sp = self.spaces.get(w)
        if sp is None:
            sp = Subspace.zero(self.frame.n, 0, len(w))
            self.spaces[w] = sp
        return sp

    def words(self, upto: int | None = None) -> list[str]:
        upto = self.report_cutoff if upto is None else upto
        return list(enumerate_words(upto))

    def dims(self, upto: int | None = None) -> dict[str, int]:
        return {w: self.space(w).dim for w in self.words(upto)}

    def mor_space(self, w1: str, w2: str) -> Subspace:
        if len(w1) + len(w2) > self.report_cutoff:
            raise CutoffError(
                f"|{w1!r}| + |{w2!r}| exceeds report cutoff {self.report_cutoff}"
            )
        key = (w1, w2)
        cached = self._mor_cache.get(key)
        if cached is not None:
            return cached
        fix = self.space(w2 + word_star(w1))
        out = Subspace.zero(self.frame.n, len(w1), len(w2))
        for row in fix.rows():
            t = morphism_from_fix(
                self.frame, LinMap(self.frame.n, 0, fix.cod_len, dict(row)), w1, w2
            )
            out, _ = out.inserted(t.data)
        self._mor_cache[key] = out
        return out


@dataclass
class ExtFixTable:
    """Fixed-point spaces per extended word; zero spaces stay implicit."""

    frame: Frame
    modulus: int
    square_report: int
    square_work: int
    spaces: dict[ExtWord, Subspace]
    semantics: str = "lower_bound"
    exp_budget: int | None = None  # only consulted when modulus == 0

    def space(self, w: ExtWord) -> Subspace:
        if w.k != self.modulus:
            raise TableError(f"word modulus {w.k} != table modulus {self.modulus}")
        if len(w.body) > self.square_work:
            raise CutoffError(
                f"{w.text()!r} beyond square work cutoff {self.square_work}"
            )
        sp = self.spaces.get(w)
        if sp is None:
            return Subspace.zero(self.frame.n, 0, len(w.body))
        return sp

    def nonzero_words(self) -> list[ExtWord]:
        return sorted(
            (w for w, sp in self.spaces.items() if not sp.is_zero()),
            key=lambda w: (len(w.body), w.lead, w.body),
        )


def frames_compatible(a: Frame, b: Frame) -> bool:
    return a.n == b.n and a.f == b.f


def _require_compatible(a: FixTable, b: FixTable) -> None:
    if not frames_compatible(a.frame, b.frame):
        raise TableError("tables over different frames")
    if (a.report_cutoff, a.work_cutoff) != (b.report_cutoff, b.work_cutoff):
        raise TableError("tables with different cutoffs")


# ---------------------------------------------------------------------------
# the two-coloured saturation engine


class _Batch:
    __slots__ = ("vecs", "serial")
    _counter = itertools.count(1)

    def __init__(self, vecs: Sequence[Vec]):
        self.vecs = tuple(vecs)
        self.serial = next(_Batch._counter)


def _twist_sig(m: SmallMat) -> int:
    return 0 if m.is_identity else m.serial


class _Engine:
    """Shared machinery for the plain and the extended closure."""

    def __init__(self, frame: Frame):
        self.frame = frame
        self.n = frame.n
        self._insert_memo: dict = {}
        self._op_memo: dict = {}
        self._combine_memo: dict = {}

    def end_round(self) -> None:
        """Sharing only pays within one round; dropping the memo tables
        at round boundaries keeps superseded span versions collectable."""
        self._insert_memo.clear()
        self._op_memo.clear()
        self._combine_memo.clear()

    # -- memoized span growth -----------------------------------------
    def merge(self, space: Subspace, batch: _Batch) -> tuple[Subspace, _Batch | None]:
        key = (space.serial, batch.serial)
        hit = self._insert_memo.get(key)
        if hit is not None:
            return hit
        cur = space
        delta = []
        for v in batch.vecs:
            cur, row = cur.inserted(v)
            if row is not None:
                delta.append(row)
        result = (cur, _Batch(delta) if delta else None)
        self._insert_memo[key] = result
        return result

    def combine(self, batches: Sequence[_Batch]) -> _Batch:
        if len(batches) == 1:
            return batches[0]
        key = tuple(b.serial for b in batches)
        hit = self._combine_memo.get(key)
        if hit is None:
            hit = _Batch([v for b in batches for v in b.vecs])
            self._combine_memo[key] = hit
        return hit

    # -- memoized vector ops --------------------------------------------
    def rotate_batch(self, batch: _Batch, legs: int, twist: SmallMat) -> _Batch:
        key = ("rot", batch.serial, legs, _twist_sig(twist))
        hit = self._op_memo.get(key)
        if hit is None:
            hit = _Batch([vec_rotate(v, legs, self.n, twist) for v in batch.vecs])
            self._op_memo[key] = hit
        return hit

    def rotate_inv_batch(self, batch: _Batch, legs: int, twist: SmallMat) -> _Batch:
        key = ("roti", batch.serial, legs, _twist_sig(twist))
        hit = self._op_memo.get(key)
        if hit is None:
            hit = _Batch([vec_rotate_inv(v, legs, self.n, twist) for v in batch.vecs])
            self._op_memo[key] = hit
        return hit

    def reflect_batch(self, batch: _Batch, legs: int, twists: Sequence[SmallMat]) -> _Batch:
        key = ("refl", batch.serial, legs, tuple(_twist_sig(t) for t in twists))
        hit = self._op_memo.get(key)
        if hit is None:
            hit = _Batch([vec_reflect(v, legs, self.n, twists) for v in batch.vecs])
            self._op_memo[key] = hit
        return hit

    def contract_batch(self, batch: _Batch, legs: int, pos0: int, weight: SmallMat) -> _Batch:
        key = ("con", batch.serial, legs, pos0, _twist_sig(weight))
        hit = self._op_memo.get(key)
        if hit is None:
            hit = _Batch(
                [vec_contract(v, legs, self.n, pos0, weight) for v in batch.vecs]
            )
            self._op_memo[key] = hit
        return hit

    def tensor_left(self, batch: _Batch, other: Subspace) -> _Batch:
        """batch (x) basis(other)."""
        key = ("tl", batch.serial, other.serial)
        hit = self._op_memo.get(key)
        if hit is None:
            amb = other.ambient
            hit = _Batch(
                [
                    _vec_tensor(x, r, amb)
                    for x in batch.vecs
                    for r in other.rows()
                ]
            )
            self._op_memo[key] = hit
        return hit

    def tensor_right(self, other: Subspace, batch: _Batch, batch_ambient: int) -> _Batch:
        key = ("tr", other.serial, batch.serial)
        hit = self._op_memo.get(key)
        if hit is None:
            hit = _Batch(
                [
                    _vec_tensor(r, x, batch_ambient)
                    for r in other.rows()
                    for x in batch.vecs
                ]
            )
            self._op_memo[key] = hit
        return hit


def _vec_tensor(u: Vec, v: Vec, v_ambient: int) -> Vec:
    out: Vec = {}
    for iu, a in u.items():
        base = iu * v_ambient
        for iv, b in v.items():
            out[base + iv] = a * b
    return out


GeneratorSpec = tuple[str, object]


def _generator_vectors(n: int, word: str, payload) -> list[Vec]:
    legs = len(word)
    if isinstance(payload, Subspace):
        if payload.dom_len != 0 or payload.cod_len != legs or payload.n != n:
            raise TableError(f"generator subspace shape mismatch at {word!r}")
        return [dict(r) for r in payload.rows()]
    if isinstance(payload, LinMap):
        payload = [payload]
    vecs = []
    for item in payload:
        if isinstance(item, LinMap):
            if item.dom_len != 0 or item.cod_len != legs or item.n != n:
                raise TableError(f"generator map shape mismatch at {word!r}")
            vecs.append(dict(item.data))
        elif isinstance(item, dict):
            if any(not 0 <= i < n**legs for i in item):
                raise TableError(f"generator vector out of range at {word!r}")
            vecs.append(dict(item))
        else:
            raise TableError(f"unsupported generator payload at {word!r}")
    return [intify(v) for v in vecs]


def closure(
    frame: Frame,
    generators: Iterable[GeneratorSpec],
    report_cutoff: int,
    work_cutoff: int | None = None,
) -> FixTable:
    """Least table containing the duality seeds and the generators,
    stable under tensor products (within the work cutoff), contractions,
    both rotations, and reflection."""
    if work_cutoff is None:
        work_cutoff = report_cutoff + 2
    if report_cutoff > work_cutoff:
        raise CutoffError("report cutoff exceeds work cutoff")
    n = frame.n
    eng = _Engine(frame)
    spaces: dict[str, Subspace] = {}
    pending: dict[str, list[_Batch]] = {}

    def emit(word: str, batch: _Batch) -> None:
        if batch.vecs:
            pending.setdefault(word, []).append(batch)

    emit("", _Batch([{0: 1}]))
    if work_cutoff >= 2:
        emit("wb", _Batch([intify(frame.xi_wb.data)]))
        emit("bw", _Batch([intify(frame.xi_bw.data)]))
    seed_batches: dict[tuple, _Batch] = {}
    for word, payload in generators:
        validate_word(word)
        if len(word) > work_cutoff:
            raise CutoffError(f"generator word {word!r} beyond work cutoff")
        vecs = _generator_vectors(n, word, payload)
        if not vecs:
            continue
        key = tuple(sorted(vec_key(v) for v in vecs))
        batch = seed_batches.get(key)
        if batch is None:
            batch = _Batch(vecs)
            seed_batches[key] = batch
        emit(word, batch)

    while pending:
        current = pending
        pending = {}
        eng.end_round()
        for word in sorted(current, key=_word_key):
            space = spaces.get(word)
            if space is None:
                space = Subspace.zero(n, 0, len(word))
            deltas = []
            for batch in current[word]:
                space, delta = eng.merge(space, batch)
                if delta is not None:
                    deltas.append(delta)
            spaces[word] = space
            if not deltas:
                continue
            delta = eng.combine(deltas)
            legs = len(word)
            if legs:
                emit(
                    word[-1] + word[:-1],
                    eng.rotate_batch(delta, legs, frame.rotation_twist(word[-1])),
                )
                emit(
                    word[1:] + word[0],
                    eng.rotate_inv_batch(
                        delta, legs, frame.rotation_twist_inv(word[0])
                    ),
                )
                emit(
                    word_star(word),
                    eng.reflect_batch(
                        delta, legs, [frame.reflection_twist(a) for a in word]
                    ),
                )
            for i in range(1, legs):
                if word[i - 1] != word[i]:
                    emit(
                        word[: i - 1] + word[i + 1 :],
                        eng.contract_batch(
                            delta, legs, i - 1, frame.contraction_weight(word[i - 1])
                        ),
                    )
            if legs:
                partners = [
                    (u, sp)
                    for u, sp in spaces.items()
                    if u and not sp.is_zero() and len(u) + legs <= work_cutoff
                ]
                partners.sort(key=lambda t: _word_key(t[0]))
                for u, sp in partners:
                    emit(word + u, eng.tensor_left(delta, sp))
                    emit(u + word, eng.tensor_right(sp, delta, n ** legs))

    for w in enumerate_words(work_cutoff):
        spaces.setdefault(w, Subspace.zero(n, 0, len(w)))
    return FixTable(frame, report_cutoff, work_cutoff, spaces)


# ---------------------------------------------------------------------------
# table lattice operations


def table_leq(a: FixTable, b: FixTable, upto: int | None = None) -> bool:
    return table_leq_witness(a, b, upto)[0]


def table_leq_witness(
    a: FixTable, b: FixTable, upto: int | None = None
) -> tuple[bool, str | None]:
    _require_compatible(a, b)
    upto = a.report_cutoff if upto is None else upto
    for w in enumerate_words(upto):
        if not b.space(w).contains(a.space(w)):
            return False, w
    return True, None


def tables_equal(a: FixTable, b: FixTable, upto: int | None = None) -> bool:
    return tables_equal_witness(a, b, upto)[0]


def tables_equal_witness(
    a: FixTable, b: FixTable, upto: int | None = None
) -> tuple[bool, str | None]:
    _require_compatible(a, b)
    upto = a.report_cutoff if upto is None else upto
    for w in enumerate_words(upto):
        if a.space(w) != b.space(w):
            return False, w
    return True, None


def table_intersect(a: FixTable, b: FixTable) -> FixTable:
    """Pointwise intersection; categories are closed under it."""
    _require_compatible(a, b)
    spaces = {
        w: a.space(w).intersect(b.space(w)) for w in enumerate_words(a.work_cutoff)
    }
    sem = "exact" if a.semantics == b.semantics == "exact" else "lower_bound"
    return FixTable(a.frame, a.report_cutoff, a.work_cutoff, spaces, sem)


def table_join(a: FixTable, b: FixTable) -> FixTable:
    """Closure of the pointwise span union."""
    _require_compatible(a, b)
    gens: list[GeneratorSpec] = []
    for t in (a, b):
        for w in enumerate_words(t.work_cutoff):
            sp = t.space(w)
            if not sp.is_zero():
                gens.append((w, sp))
    return closure(a.frame, gens, a.report_cutoff, a.work_cutoff)


def full_table(
    frame: Frame, k: int, report_cutoff: int, work_cutoff: int | None = None
) -> FixTable:
    """Everything at words whose colour sum vanishes mod k, zero else."""
    if work_cutoff is None:
        work_cutoff = report_cutoff + 2
    n = frame.n
    spaces: dict[str, Subspace] = {}
    for w in enumerate_words(work_cutoff):
        c = colour_sum(w)
        hit = (c == 0) if k == 0 else (c % k == 0)
        spaces[w] = (
            Subspace.full(n, 0, len(w)) if hit else Subspace.zero(n, 0, len(w))
        )
    return FixTable(frame, report_cutoff, work_cutoff, spaces, "exact")


# ---------------------------------------------------------------------------
# the extended saturation engine


ExtGeneratorSpec = tuple[ExtWord, object]


def _ext_word_key(w: ExtWord) -> tuple:
    return (len(w.body), w.lead, w.body)


def ext_closure(
    frame: Frame,
    modulus: int,
    generators: Iterable[ExtGeneratorSpec],
    square_report: int,
    square_work: int | None = None,
    exp_budget: int | None = None,
) -> ExtFixTable:
    """Extended-table counterpart of ``closure``.

    Triangle moves act as the identity on vectors; only words with a
    non-zero space are ever stored.  For ``modulus == 0`` the triangle
    exponents are capped by ``exp_budget`` (total absolute size).
    """
    if square_work is None:
        square_work = square_report + 2
    if square_report > square_work:
        raise CutoffError("square report cutoff exceeds square work cutoff")
    if modulus == 0 and exp_budget is None:
        exp_budget = square_work + 2
    n = frame.n
    eng = _Engine(frame)
    spaces: dict[ExtWord, Subspace] = {}
    pending: dict[ExtWord, list[_Batch]] = {}

    def within_budget(w: ExtWord) -> bool:
        if len(w.body) > square_work:
            return False
        if modulus == 0:
            total = abs(w.lead) + sum(abs(e) for _, e in w.body)
            if total > exp_budget:
                return False
        return True

    def emit(word: ExtWord, batch: _Batch) -> None:
        if batch.vecs and within_budget(word):
            pending.setdefault(word, []).append(batch)

    emit(ExtWord(modulus), _Batch([{0: 1}]))
    if square_work >= 2:
        emit(
            ExtWord(modulus, 0, ((WHITE_SQ, 0), (BLACK_SQ, 0))),
            _Batch([intify(frame.xi_wb.data)]),
        )
        emit(
            ExtWord(modulus, 0, ((BLACK_SQ, 0), (WHITE_SQ, 0))),
            _Batch([intify(frame.xi_bw.data)]),
        )
    for word, payload in generators:
        if word.k != modulus:
            raise TableError("generator word modulus mismatch")
        if not within_budget(word):
            raise CutoffError(f"generator word {word.text()!r} beyond cutoffs")
        vecs = _generator_vectors(n, "w" * len(word.body), payload)
        if vecs:
            emit(word, _Batch(vecs))

    sq2circle = {"s": "w", "S": "b"}

    while pending:
        current = pending
        pending = {}
        eng.end_round()
        for word in sorted(current, key=_ext_word_key):
            space = spaces.get(word)
            if space is None:
                space = Subspace.zero(n, 0, len(word.body))
            deltas = []
            for batch in current[word]:
                space, delta = eng.merge(space, batch)
                if delta is not None:
                    deltas.append(delta)
            if space.is_zero():
                spaces.pop(word, None)
            else:
                spaces[word] = space
            if not deltas:
                continue
            delta = eng.combine(deltas)
            legs = len(word.body)
            rot_word, moved = ext_rotate_word(word)
            if rot_word != word:
                if moved:
                    colour = sq2circle[word.body[-1][0]]
                    emit(
                        rot_word,
                        eng.rotate_batch(delta, legs, frame.rotation_twist(colour)),
                    )
                else:
                    emit(rot_word, delta)
            elif moved and legs:
                colour = sq2circle[word.body[-1][0]]
                emit(
                    rot_word,
                    eng.rotate_batch(delta, legs, frame.rotation_twist(colour)),
                )
            roti_word, moved = ext_rotate_inv_word(word)
            if roti_word != word or moved:
                if moved:
                    colour = sq2circle[word.squares[0]]
                    emit(
                        roti_word,
                        eng.rotate_inv_batch(
                            delta, legs, frame.rotation_twist_inv(colour)
                        ),
                    )
                else:
                    emit(roti_word, delta)
            if legs:
                emit(
                    word.star(),
                    eng.reflect_batch(
                        delta,
                        legs,
                        [frame.reflection_twist(sq2circle[c]) for c in word.squares],
                    ),
                )
            for i in range(legs - 1):
                ci, ei = word.body[i]
                cj, _ = word.body[i + 1]
                if ei == 0 and ci != cj:
                    new_body = list(word.body)
                    _, e_next = new_body[i + 1]
                    del new_body[i + 1]
                    del new_body[i]
                    if i == 0:
                        target = ExtWord(modulus, word.lead + e_next, tuple(new_body))
                    else:
                        c_prev, e_prev = new_body[i - 1]
                        new_body[i - 1] = (c_prev, e_prev + e_next)
                        target = ExtWord(modulus, word.lead, tuple(new_body))
                    emit(
                        target,
                        eng.contract_batch(
                            delta,
                            legs,
                            i,
                            frame.contraction_weight(sq2circle[ci]),
                        ),
                    )
            partners = sorted(
                (
                    (u, sp)
                    for u, sp in spaces.items()
                    if len(u.body) + legs <= square_work
                    and not (u.is_empty())
                ),
                key=lambda t: _ext_word_key(t[0]),
            )
            for u, sp in partners:
                emit(ext_concat(word, u), eng.tensor_left(delta, sp))
                emit(ext_concat(u, word), eng.tensor_right(sp, delta, n ** legs))

    return ExtFixTable(frame, modulus, square_report, square_work, spaces,
                       exp_budget=exp_budget)


# ---------------------------------------------------------------------------
# gluing


def glue_table(g: ExtFixTable, report_cutoff: int | None = None) -> FixTable:
    """Restrict an extended table to the glued words."""
    if report_cutoff is None:
        report_cutoff = g.square_report
    work = min(g.square_work, report_cutoff + 2)
    if report_cutoff > g.square_work:
        raise CutoffError("circle cutoff exceeds the extended square cutoff")
    spaces: dict[str, Subspace] = {}
    for w in enumerate_words(work):
        spaces[w] = g.space(glue_word(w, g.modulus))
    return FixTable(g.frame, report_cutoff, work, spaces, g.semantics)


# ---------------------------------------------------------------------------
# the free-product fixed point


def free_product_table(
    h: FixTable,
    l: int,
    square_cutoff: int | None = None,
    targets: Iterable[ExtWord] | None = None,
) -> ExtFixTable:
    """Extended table of the free product of ``h`` with the cyclic dual
    of order ``l >= 2``, evaluated on the demand closure of ``targets``
    (default: all glued circle words within the square cutoff).

    Computed as a least fixed point of the factorization operator: a
    word with triangles is valued by the span of all rotated tensors
    over its factorizations into l-separated pieces whose inner parts
    are triangle-free.  Factorizations with a dead piece (zero base
    space, or a pure-triangle recursion word other than the identity)
    are pruned while the demand set is collected.
    """
    if l < 2:
        raise TableError("free products are computed for moduli >= 2")
    if square_cutoff is None:
        square_cutoff = h.report_cutoff
    if square_cutoff > h.work_cutoff:
        raise CutoffError("square cutoff exceeds the work cutoff of the base table")
    frame = h.frame
    n = frame.n
    if targets is None:
        targets = [glue_word(w, l) for w in enumerate_words(square_cutoff)]
    targets = list(targets)
    for t in targets:
        if t.k != l:
            raise TableError("target word modulus mismatch")
        if len(t.body) > square_cutoff:
            raise CutoffError(f"target {t.text()!r} beyond square cutoff")

    def dead(fac) -> bool:
        inner, _, rec_word = fac
        if any(h.space(circ).is_zero() for circ in inner):
            return True
        if not rec_word.body and not rec_word.is_empty():
            return True  # a pure triangle power never has fixed vectors
        return False

    factorizations: dict[ExtWord, list[tuple]] = {}
    todo = [t for t in targets if not t.is_triangle_free()]
    while todo:
        w = todo.pop()
        if w in factorizations:
            continue
        facs = [f for f in _enumerate_factorizations(w, l) if not dead(f)]
        factorizations[w] = facs
        for _, _, rec_word in facs:
            if not rec_word.is_triangle_free() and rec_word not in factorizations:
                todo.append(rec_word)

    values: dict[ExtWord, Subspace] = {}

    def value(w: ExtWord) -> Subspace:
        if w.is_triangle_free():
            return h.space(w.as_circles())
        return values.get(w, Subspace.zero(n, 0, len(w.body)))

    dependants: dict[ExtWord, set[ExtWord]] = {}
    for w, facs in factorizations.items():
        for _, _, rec_word in facs:
            if not rec_word.is_triangle_free():
                dependants.setdefault(rec_word, set()).add(w)

    dirty = set(factorizations)
    while dirty:
        batch = sorted(dirty, key=_ext_word_key)
        dirty = set()
        for w in batch:
            legs = len(w.body)
            cur = values.get(w, Subspace.zero(n, 0, legs))
            before = cur.dim
            for inner, rot_colours, rec_word in factorizations[w]:
                last = value(rec_word)
                if last.is_zero():
                    continue
                combos: list[Vec] = [{0: ONE}]
                for sp, piece_legs in zip(
                    [h.space(circ) for circ in inner] + [last],
                    [len(c) for c in inner] + [len(rec_word.body)],
                ):
                    amb = n**piece_legs
                    combos = [
                        _vec_tensor(base, dict(row), amb)
                        for base in combos
                        for row in sp.rows()
                    ]
                for v in combos:
                    for colour in rot_colours:
                        v = vec_rotate(v, legs, n, frame.rotation_twist(colour))
                    cur, _ = cur.inserted(v)
            if cur.dim != before:
                values[w] = cur
                dirty.update(dependants.get(w, ()))
                dirty.add(w)  # self-references may still grow

    spaces: dict[ExtWord, Subspace] = {}
    for w in set(targets) | set(factorizations):
        sp = value(w)
        if not sp.is_zero():
            spaces[w] = sp
    for w in enumerate_words(square_cutoff):
        tf = ExtWord(
            l, 0, tuple(((WHITE_SQ if a == "w" else BLACK_SQ), 0) for a in w)
        )
        sp = h.space(w)
        if not sp.is_zero():
            spaces[tf] = sp
    return ExtFixTable(frame, l, square_cutoff, square_cutoff, spaces)


def _enumerate_factorizations(w: ExtWord, l: int):
    """All ways to write w = w0 |> w1 |> ... |> wl (l single triangle
    separators) with triangle-free inner pieces w1..w_{l-1}.

    Yields ``(inner_circle_words, rotation_colours, recursion_word)``
    where the recursion word is ``wl . w0`` and the rotation colours
    drive the final ``[w0]`` square rotations.
    """
    s = len(w.body)
    gaps = [w.lead] + [e for _, e in w.body]
    cols = [c for c, _ in w.body]
    k = l

    for p in range(s + 1):
        # p == r: every separator inside gap p, all inner pieces empty
        for x in range(k):
            y = gaps[p] - l - x
            yield _build_fac(w, p, p, x, y, [""] * (l - 1), cols, gaps, k)
        for r in range(p + 1, s + 1):
            middle = list(range(p + 1, r))
            for mp in range(1, l):
                for mr in range(1, l - mp + 1):
                    rest = l - mp - mr
                    for mids in _middle_counts(middle, gaps, rest, k):
                        m_per_gap = {p: mp, r: mr}
                        m_per_gap.update(mids)
                        inner = _inner_pieces(p, r, m_per_gap, cols, l)
                        if inner is None:
                            continue
                        x = gaps[p] - mp
                        y = gaps[r] - mr
                        yield _build_fac(w, p, r, x, y, inner, cols, gaps, k)


def _middle_counts(middle, gaps, rest, k):
    """Separator counts over the middle gaps: congruent to each gap
    value mod k, summing to ``rest`` (gaps left untouched must vanish)."""
    if not middle:
        if rest == 0:
            yield {}
        return
    j, tail = middle[0], middle[1:]
    m = gaps[j] % k
    while m <= rest:
        for sub in _middle_counts(tail, gaps, rest - m, k):
            out = {j: m}
            out.update(sub)
            yield out
        m += k


def _inner_pieces(p, r, m_per_gap, cols, l):
    """Split squares p+1..r into the l-1 inner pieces dictated by the
    separator counts; None when the split is inconsistent."""
    pieces: list[str] = []
    current: list[str] = []
    pieces.extend([""] * (m_per_gap[p] - 1))
    for j in range(p + 1, r + 1):
        current.append("w" if cols[j - 1] == WHITE_SQ else "b")
        m = m_per_gap.get(j, 0)
        if j == r:
            pieces.append("".join(current))
            pieces.extend([""] * (m - 1))
        elif m:
            pieces.append("".join(current))
            current = []
            pieces.extend([""] * (m - 1))
    if len(pieces) != l - 1:
        return None
    return pieces


def _build_fac(w, p, r, x, y, inner, cols, gaps, k):
    s = len(w.body)
    if p == 0:
        w0 = ExtWord(k, x, ())
    else:
        body = [(cols[j - 1], gaps[j]) for j in range(1, p)]
        body.append((cols[p - 1], x))
        w0 = ExtWord(k, gaps[0], tuple(body))
    body = [(cols[j - 1], gaps[j]) for j in range(r + 1, s + 1)]
    wl = ExtWord(k, y, tuple(body))
    rec_word = ext_concat(wl, w0)
    rot_colours = tuple(
        "w" if c == WHITE_SQ else "b" for c in reversed(w0.squares)
    )
    return (tuple(inner), rot_colours, rec_word)


def ext_fix_from_morphism(
    frame: Frame, t: LinMap, w1: ExtWord, w2: ExtWord
) -> tuple[LinMap, ExtWord]:
    """Fix-vector form of an extended morphism: the vector is computed
    on the square skeleton (triangles carry no legs), the word is
    ``w2 . star(w1)``."""
    circ1 = w1.squares.translate(_SQ2CIRC)
    circ2 = w2.squares.translate(_SQ2CIRC)
    if t.dom_len != len(circ1) or t.cod_len != len(circ2) or t.n != frame.n:
        raise TableError("extended morphism shape does not match the words")
    from .frame import fix_from_morphism

    vec, _ = fix_from_morphism(frame, t, circ1, circ2)
    return vec, ext_concat(w2, w1.star())


_SQ2CIRC = str.maketrans({WHITE_SQ: "w", BLACK_SQ: "b"})
