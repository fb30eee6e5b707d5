"""Noncommutative *-polynomials: relation emission from intertwiners,
cyclic-grading decompositions, the gluing substitution, and the parser
inverting the order-two gluing on even monomials.

Monomials are tuples of symbols:

* ``("x", i, j, star)`` with ``star`` 0 or 1 (1-based indices),
* ``("z", e)`` with a non-zero integer exponent (``z`` is unitary, so
  runs merge and cancel),
* ``("r",)`` a self-adjoint involution (``r^2 = 1``).

Relations are emitted, never completed into an ideal; ideal-level
statements are verified at the category level instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .frame import Frame
from .linalg import LinMap, ONE, Scalar, ShapeError, scalar_of
from .words import WHITE, validate_word


class PolyError(ValueError):
    pass


class OddDegreeError(PolyError):
    """An ungluing parse met a monomial without a preimage."""


Symbol = tuple
Monomial = tuple


def x_sym(i: int, j: int, star: bool = False) -> Symbol:
    return ("x", i, j, 1 if star else 0)


def z_sym(e: int = 1) -> Symbol:
    return ("z", e)


R_SYM: Symbol = ("r",)


def normalize_monomial(syms: Iterable[Symbol]) -> Monomial:
    """Merge and cancel unitary runs; reduce the involution."""
    out: list[Symbol] = []
    for s in syms:
        kind = s[0]
        if kind == "z":
            if s[1] == 0:
                continue
            if out and out[-1][0] == "z":
                e = out[-1][1] + s[1]
                out.pop()
                if e:
                    out.append(("z", e))
            else:
                out.append(s)
        elif kind == "r":
            if out and out[-1][0] == "r":
                out.pop()
            else:
                out.append(s)
        elif kind == "x":
            out.append(s)
        else:
            raise PolyError(f"unknown symbol {s!r}")
    return tuple(out)


def monomial_degree(m: Monomial) -> int:
    """Cyclic degree: +1 per plain generator or unitary power, -1 per
    starred generator, +1 per involution letter."""
    deg = 0
    for s in m:
        if s[0] == "x":
            deg += -1 if s[3] else 1
        elif s[0] == "z":
            deg += s[1]
        else:
            deg += 1
    return deg


def _sym_text(s: Symbol) -> str:
    if s[0] == "x":
        star = "*" if s[3] else ""
        return f"x{star}[{s[1]},{s[2]}]"
    if s[0] == "z":
        return " ".join(["z" if s[1] > 0 else "z*"] * abs(s[1]))
    return "r"


def _sym_order_key(s: Symbol) -> tuple:
    if s[0] == "x":
        return (0, s[1], s[2], s[3])
    if s[0] == "z":
        return (1, s[1], 0, 0)
    return (2, 0, 0, 0)


class NCPoly:
    """A finite Scalar combination of normalized monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for m, c in terms.items():
                c = scalar_of(c)
                if c:
                    clean[m] = c
        self.terms = clean

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero() -> "NCPoly":
        return NCPoly()

    @staticmethod
    def constant(c: Scalar) -> "NCPoly":
        return NCPoly({(): scalar_of(c)})

    @staticmethod
    def generator(i: int, j: int, star: bool = False) -> "NCPoly":
        return NCPoly({(x_sym(i, j, star),): ONE})

    @staticmethod
    def monomial(syms: Iterable[Symbol], coeff: Scalar = ONE) -> "NCPoly":
        return NCPoly({normalize_monomial(syms): scalar_of(coeff)})

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((m, c.key()) for m, c in self.terms.items())))

    # -- algebra ----------------------------------------------------------
    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return NCPoly(out)

    def __neg__(self) -> "NCPoly":
        return NCPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def scale(self, c) -> "NCPoly":
        c = scalar_of(c)
        return NCPoly({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        out: dict[Monomial, Scalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = normalize_monomial(m1 + m2)
                c = c1 * c2
                s = out.get(m)
                s = c if s is None else s + c
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return NCPoly(out)

    def star(self) -> "NCPoly":
        out: dict[Monomial, Scalar] = {}
        for m, c in self.terms.items():
            syms = []
            for s in reversed(m):
                if s[0] == "x":
                    syms.append(("x", s[1], s[2], 1 - s[3]))
                elif s[0] == "z":
                    syms.append(("z", -s[1]))
                else:
                    syms.append(s)
            out[normalize_monomial(syms)] = c.conj()
        return NCPoly(out)

    # -- text ---------------------------------------------------------------
    def text(self) -> str:
        if not self.terms:
            return "0"
        keyed = sorted(
            self.terms.items(),
            key=lambda mc: (len(mc[0]), tuple(_sym_order_key(s) for s in mc[0])),
        )
        pieces = []
        for idx, (m, c) in enumerate(keyed):
            body = " ".join(_sym_text(s) for s in m) if m else "1"
            coeff = c
            sign = "+"
            if coeff.is_real() and coeff.a < 0:
                sign = "-"
                coeff = -coeff
            coeff_txt = coeff.text()
            part = body if coeff_txt == "1" and m else f"{coeff_txt} * {body}"
            if idx == 0:
                pieces.append(part if sign == "+" else f"-{part}")
            else:
                pieces.append(f"{sign} {part}")
        return " ".join(pieces)

    def __repr__(self):  # pragma: no cover
        return f"NCPoly({self.text()!r})"


# ---------------------------------------------------------------------------
# relation emission


def _generator_matrix_entries(frame: Frame, colour: str) -> list[list[NCPoly]]:
    """Entries of the fundamental matrix for one colour: plain
    generators for white, the conjugated matrix for black."""
    n = frame.n
    if colour == WHITE:
        return [[NCPoly.generator(i + 1, j + 1) for j in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = NCPoly.zero()
            for a in range(n):
                for b in range(n):
                    c = frame.f[i][a] * frame.f_inv[b][j]
                    if c:
                        acc = acc + NCPoly.generator(a + 1, b + 1, star=True).scale(c)
            row.append(acc)
        out.append(row)
    return out


def _word_matrix(frame: Frame, w: str) -> list[list[NCPoly]]:
    """Entries of the tensor-word matrix, indexed by flat multi-indices."""
    n = frame.n
    mats = {c: _generator_matrix_entries(frame, c) for c in set(w)}
    size = 1
    out = [[NCPoly.constant(ONE)]]
    for a in w:
        m = mats[a]
        new_size = size * n
        new = [[None] * new_size for _ in range(new_size)]
        for r in range(size):
            for c in range(size):
                base = out[r][c]
                if base.is_zero():
                    for i in range(n):
                        for j in range(n):
                            new[r * n + i][c * n + j] = NCPoly.zero()
                    continue
                for i in range(n):
                    for j in range(n):
                        new[r * n + i][c * n + j] = base * m[i][j]
        out = new
        size = new_size
    return out


def relations_from_intertwiner(
    t: LinMap, w1: str, w2: str, frame: Frame
) -> list[NCPoly]:
    """The polynomial family ``T x^{w1} - x^{w2} T`` entry by entry."""
    validate_word(w1)
    validate_word(w2)
    if t.dom_len != len(w1) or t.cod_len != len(w2) or t.n != frame.n:
        raise ShapeError("intertwiner shape does not match the words")
    m1 = _word_matrix(frame, w1)
    m2 = _word_matrix(frame, w2)
    rows, cols = t.n_rows, t.n_cols
    out = []
    for r in range(rows):
        for c in range(cols):
            acc = NCPoly.zero()
            for mid in range(cols):
                coeff = t.entry(r, mid)
                if coeff:
                    acc = acc + m1[mid][c].scale(coeff)
            for mid in range(rows):
                coeff = t.entry(mid, c)
                if coeff:
                    acc = acc - m2[r][mid].scale(coeff)
            out.append(acc)
    return out


# ---------------------------------------------------------------------------
# grading, alternation, gluing


def homogeneous_components(f: NCPoly, k: int) -> dict[int, NCPoly]:
    """Split by cyclic degree (classes mod k; plain integers for k=0)."""
    out: dict[int, dict] = {}
    for m, c in f.terms.items():
        d = monomial_degree(m)
        if k:
            d %= k
        out.setdefault(d, {})[m] = c
    return {d: NCPoly(terms) for d, terms in sorted(out.items())}


def is_alternating_poly(f: NCPoly) -> bool:
    """Even-length generator monomials with strictly alternating stars,
    all starting with the same kind."""
    if f.is_zero():
        return False
    first_star = None
    for m in f.terms:
        if len(m) % 2 != 0 or not m:
            return False
        if any(s[0] != "x" for s in m):
            return False
        start = m[0][3]
        if first_star is None:
            first_star = start
        elif start != first_star:
            return False
        for pos, s in enumerate(m):
            if s[3] != (start + pos) % 2:
                return False
    return True


def glue_substitute(f: NCPoly) -> NCPoly:
    """Image under generator -> generator . z, starred generator ->
    z* . starred generator, reduced by unitarity."""
    out: dict[Monomial, Scalar] = {}
    for m, c in f.terms.items():
        syms: list[Symbol] = []
        for s in m:
            if s[0] != "x":
                raise PolyError("gluing substitution expects a plain x-polynomial")
            if s[3]:
                syms.append(("z", -1))
                syms.append(s)
            else:
                syms.append(s)
                syms.append(("z", 1))
        out[normalize_monomial(syms)] = c
    return NCPoly(out)


def glue_substitute_involution(f: NCPoly) -> NCPoly:
    """Order-two variant: generator -> generator . r on both kinds."""
    out: dict[Monomial, Scalar] = {}
    for m, c in f.terms.items():
        syms: list[Symbol] = []
        for s in m:
            if s[0] != "x":
                raise PolyError("gluing substitution expects a plain x-polynomial")
            if s[3]:
                syms.append(R_SYM)
                syms.append(("x", s[1], s[2], 0))
            else:
                syms.append(("x", s[1], s[2], 0))
                syms.append(R_SYM)
        out[normalize_monomial(syms)] = c
    return NCPoly(out)


def unglue_parse(f: NCPoly) -> NCPoly:
    """Unique preimage of an even polynomial over generators and the
    involution: a leading generator consumes a following involution
    letter as unstarred, a leading involution letter consumes the
    following generator as starred."""
    out: dict[Monomial, Scalar] = {}
    for m, c in f.terms.items():
        parsed = _parse_monomial(list(m))
        s = out.get(parsed)
        s = c if s is None else s + c
        if s:
            out[parsed] = s
        else:
            out.pop(parsed, None)
    return NCPoly(out)


def _parse_monomial(syms: list[Symbol]) -> Monomial:
    out: list[Symbol] = []
    pos = 0
    while pos < len(syms):
        s = syms[pos]
        if s[0] == "x":
            if s[3]:
                raise PolyError("parser input carries starred generators")
            out.append(("x", s[1], s[2], 0))
            nxt = syms[pos + 1] if pos + 1 < len(syms) else None
            if nxt == R_SYM:
                pos += 2
            else:
                # an implicit r r sits here; consume one, leave one
                syms.insert(pos + 1, R_SYM)
                pos += 1
        elif s == R_SYM:
            if pos + 1 >= len(syms) or syms[pos + 1][0] != "x":
                raise OddDegreeError(
                    "monomial of odd degree has no glued preimage"
                )
            nxt = syms[pos + 1]
            out.append(("x", nxt[1], nxt[2], 1))
            pos += 2
        else:
            raise PolyError("parser expects generators and involution letters only")
    return tuple(out)
