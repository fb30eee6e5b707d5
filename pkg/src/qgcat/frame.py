"""Frame matrices, duality morphisms, and the fix-vector operations
(contraction, rotation, reflection) together with the four one-letter
morphism rotations.

Twist conventions (derived once from the compositional definitions, so
that rotating ``xi_wb`` gives exactly ``xi_bw`` for every invertible F):

* contraction weight at a white/black position:
  ``W_w[c][d] = conj(F)[d][c]``,  ``W_b[c][d] = inv(F)[d][c]``;
* rotation twist on the moved leg:
  white ``M_w = F^t . conj(F)``, black ``M_b = conj(F)^{-t} . inv(F)``;
* reflection twist per leg: white ``F``, black ``inv(conj(F))``.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import (
    LinMap,
    ONE,
    Scalar,
    ShapeError,
    Vec,
    ZERO,
    conj_value,
    vec_add_into,
)
from .words import BLACK, WHITE, colour_invert, validate_word, word_star


class FrameError(ValueError):
    """Singular frame matrix or an operation violating a precondition."""


class ColourClashError(FrameError):
    """Contraction requested at a same-coloured pair of letters."""


Matrix = tuple[tuple[Scalar, ...], ...]


def _mat(entries: Sequence[Sequence[Scalar]]) -> Matrix:
    return tuple(tuple(row) for row in entries)


def mat_identity(n: int) -> Matrix:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)
        )
        for i in range(n)
    )


def mat_conj(a: Matrix) -> Matrix:
    return tuple(tuple(v.conj() for v in row) for row in a)


def mat_transpose(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    work = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
        if pivot is None:
            raise FrameError("singular frame matrix")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * v for v in work[col]]
        for r in range(n):
            if r != col and not work[r][col].is_zero():
                c = work[r][col]
                work[r] = [v - c * w for v, w in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


class SmallMat:
    """Dense N x N matrix with precomputed sparse column views."""

    __slots__ = ("n", "rows", "cols", "is_identity", "serial")

    _serial_counter = 0

    def __init__(self, rows: Matrix):
        self.n = len(rows)
        self.rows = rows
        self.cols = tuple(
            tuple(
                (i, rows[i][c]) for i in range(self.n) if not rows[i][c].is_zero()
            )
            for c in range(self.n)
        )
        self.is_identity = all(
            rows[i][j] == (ONE if i == j else ZERO)
            for i in range(self.n)
            for j in range(self.n)
        )
        SmallMat._serial_counter += 1
        self.serial = SmallMat._serial_counter


def _scalar_multiple_of_identity(m: Matrix) -> Scalar | None:
    n = len(m)
    c = m[0][0]
    for i in range(n):
        for j in range(n):
            if i == j:
                if m[i][j] != c:
                    return None
            elif not m[i][j].is_zero():
                return None
    return c


class Frame:
    """An invertible frame matrix and everything derived from it."""

    def __init__(self, f: Matrix):
        n = len(f)
        if any(len(row) != n for row in f):
            raise FrameError("frame matrix must be square")
        self.n = n
        self.f = f
        self.f_inv = mat_inverse(f)
        self.f_bar = mat_conj(f)
        self.f_bar_inv = mat_conj(self.f_inv)
        self.c_opt = _scalar_multiple_of_identity(mat_mul(f, self.f_bar))

        self.xi_wb = LinMap(
            n,
            0,
            2,
            {
                i * n + j: f[j][i]
                for i in range(n)
                for j in range(n)
                if not f[j][i].is_zero()
            },
        )
        self.xi_bw = LinMap(
            n,
            0,
            2,
            {
                i * n + j: self.f_bar_inv[j][i]
                for i in range(n)
                for j in range(n)
                if not self.f_bar_inv[j][i].is_zero()
            },
        )

        ft = mat_transpose(f)
        # contraction weights: W[c][d] multiplies v[..., c, d, ...]
        self.w_white = SmallMat(mat_transpose(self.f_bar))
        self.w_black = SmallMat(mat_transpose(self.f_inv))
        # unconjugated pairings used by the inverse right rotation
        self.x_white = SmallMat(ft)
        self.x_black = SmallMat(mat_transpose(self.f_bar_inv))
        # left-rotation pairings
        self.y_white = SmallMat(mat_transpose(self.f_bar_inv))
        self.y_black = SmallMat(ft)
        # rotation twists
        self.m_white = SmallMat(mat_mul(ft, self.f_bar))
        self.m_black = SmallMat(
            mat_mul(mat_transpose(self.f_bar_inv), self.f_inv)
        )
        self.m_white_inv = SmallMat(mat_inverse(self.m_white.rows))
        self.m_black_inv = SmallMat(mat_inverse(self.m_black.rows))
        # reflection twists
        self.g_white = SmallMat(f)
        self.g_black = SmallMat(self.f_bar_inv)

    def xi(self, colour: str) -> LinMap:
        return self.xi_wb if colour == WHITE else self.xi_bw

    def contraction_weight(self, colour: str) -> SmallMat:
        return self.w_white if colour == WHITE else self.w_black

    def rotation_twist(self, colour: str) -> SmallMat:
        return self.m_white if colour == WHITE else self.m_black

    def rotation_twist_inv(self, colour: str) -> SmallMat:
        return self.m_white_inv if colour == WHITE else self.m_black_inv

    def reflection_twist(self, colour: str) -> SmallMat:
        return self.g_white if colour == WHITE else self.g_black

    def colour_sensitive(self) -> bool:
        """Whether white and black act differently on vectors."""
        return self.xi_wb != self.xi_bw

    def __repr__(self):  # pragma: no cover
        return f"Frame(N={self.n}, c={self.c_opt.text() if self.c_opt else None})"


def make_frame(entries: Sequence[Sequence[Scalar]]) -> Frame:
    return Frame(_mat(entries))


def identity_frame(n: int) -> Frame:
    return Frame(mat_identity(n))


# ---------------------------------------------------------------------------
# raw fix-vector operations (dict-level, used by the closure engines)


def vec_contract(v: Vec, legs: int, n: int, pos0: int, w: SmallMat) -> Vec:
    """Contract the (pos0, pos0+1) legs with the given weight matrix."""
    stride = n ** (legs - pos0 - 2)
    out: Vec = {}
    if w.is_identity:
        for f, val in v.items():
            q1, low = divmod(f, stride)
            q2, d = divmod(q1, n)
            hi, c = divmod(q2, n)
            if c == d:
                vec_add_into(out, hi * stride + low, val)
        return out
    rows = w.rows
    for f, val in v.items():
        q1, low = divmod(f, stride)
        q2, d = divmod(q1, n)
        hi, c = divmod(q2, n)
        wcd = rows[c][d]
        if not wcd.is_zero():
            vec_add_into(out, hi * stride + low, wcd * val)
    return out


def vec_rotate(v: Vec, legs: int, n: int, twist: SmallMat) -> Vec:
    """Move the last leg to the front, twisting it."""
    shift = n ** (legs - 1)
    out: Vec = {}
    if twist.is_identity:
        for f, val in v.items():
            q, c = divmod(f, n)
            vec_add_into(out, c * shift + q, val)
        return out
    cols = twist.cols
    for f, val in v.items():
        q, c = divmod(f, n)
        for i, m in cols[c]:
            vec_add_into(out, i * shift + q, m * val)
    return out


def vec_rotate_inv(v: Vec, legs: int, n: int, twist_inv: SmallMat) -> Vec:
    """Move the first leg to the end, untwisting it."""
    shift = n ** (legs - 1)
    out: Vec = {}
    if twist_inv.is_identity:
        for f, val in v.items():
            i0, rem = divmod(f, shift)
            vec_add_into(out, rem * n + i0, val)
        return out
    cols = twist_inv.cols
    for f, val in v.items():
        i0, rem = divmod(f, shift)
        base = rem * n
        for c, m in cols[i0]:
            vec_add_into(out, base + c, m * val)
    return out


def vec_reflect(v: Vec, legs: int, n: int, twists: Sequence[SmallMat]) -> Vec:
    """Reverse the legs, conjugate, and twist each leg.

    ``twists[p]`` belongs to the original leg ``p`` (0-based from the
    left); its column ``j`` redistributes the old digit ``j``.
    """
    out: Vec = {}
    plain = all(t.is_identity for t in twists)
    for f, val in v.items():
        digits = []
        rest = f
        for _ in range(legs):
            rest, d = divmod(rest, n)
            digits.append(d)
        digits.reverse()  # digits[p] = original leg p
        cval = conj_value(val)
        if plain:
            flat = 0
            for p, d in enumerate(digits):
                flat += d * n**p
            vec_add_into(out, flat, cval)
            continue
        combos: list[tuple[int, Scalar]] = [(0, cval)]
        for p, d in enumerate(digits):
            t = twists[p]
            if t.is_identity:
                combos = [(flat + d * n**p, s) for flat, s in combos]
            else:
                combos = [
                    (flat + i * n**p, s * m)
                    for flat, s in combos
                    for i, m in t.cols[d]
                ]
        for flat, s in combos:
            vec_add_into(out, flat, s)
    return out


# ---------------------------------------------------------------------------
# public fix-vector operations


def _require_fix(eta: LinMap, w: str) -> None:
    if eta.dom_len != 0 or eta.cod_len != len(w):
        raise ShapeError(f"map of shape {eta.cod_len}<-{eta.dom_len} is not a fix vector on {w!r}")


def word_duality(fr: Frame, w: str) -> LinMap:
    """Nested duality morphism in C(empty, w . star(w))."""
    validate_word(w)
    n = fr.n
    vec: Vec = {0: ONE}
    legs = 0
    for a in reversed(w):
        xi = fr.xi(a).data
        inner_size = n**legs
        out: Vec = {}
        for fij, vij in xi.items():
            i, j = divmod(fij, n)
            base = i * inner_size * n
            for fm, vm in vec.items():
                out[base + fm * n + j] = vij * vm
        vec = out
        legs += 2
    return LinMap(n, 0, legs, vec)


def contraction(fr: Frame, eta: LinMap, w: str, i: int) -> tuple[LinMap, str]:
    """Cap the letters i, i+1 (1-based) of opposite colours."""
    _require_fix(eta, w)
    if not 1 <= i < len(w):
        raise ShapeError(f"contraction position {i} out of range for {w!r}")
    if w[i - 1] == w[i]:
        raise ColourClashError(f"letters {i},{i + 1} of {w!r} have equal colours")
    weight = fr.contraction_weight(w[i - 1])
    vec = vec_contract(eta.data, len(w), fr.n, i - 1, weight)
    return LinMap(fr.n, 0, len(w) - 2, vec), w[: i - 1] + w[i + 1 :]


def rotate(fr: Frame, eta: LinMap, w: str) -> tuple[LinMap, str]:
    """Move the last letter to the front (colour preserved)."""
    _require_fix(eta, w)
    if not w:
        raise ShapeError("cannot rotate the empty word")
    twist = fr.rotation_twist(w[-1])
    vec = vec_rotate(eta.data, len(w), fr.n, twist)
    return LinMap(fr.n, 0, len(w), vec), w[-1] + w[:-1]


def rotate_inv(fr: Frame, eta: LinMap, w: str) -> tuple[LinMap, str]:
    """Move the first letter to the end; exact inverse of ``rotate``."""
    _require_fix(eta, w)
    if not w:
        raise ShapeError("cannot rotate the empty word")
    twist = fr.rotation_twist_inv(w[0])
    vec = vec_rotate_inv(eta.data, len(w), fr.n, twist)
    return LinMap(fr.n, 0, len(w), vec), w[1:] + w[0]


def reflect(fr: Frame, eta: LinMap, w: str) -> tuple[LinMap, str]:
    """The reflection; lands on the starred word."""
    _require_fix(eta, w)
    twists = [fr.reflection_twist(a) for a in w]
    vec = vec_reflect(eta.data, len(w), fr.n, twists)
    return LinMap(fr.n, 0, len(w), vec), word_star(w)


# ---------------------------------------------------------------------------
# one-letter rotations of general morphisms


def right_rotate(fr: Frame, t: LinMap, w1: str, w2: str) -> tuple[LinMap, str, str]:
    """C(w1, w2 a) -> C(w1 a-bar, w2)."""
    if not w2:
        raise ShapeError("right rotation needs a non-empty codomain word")
    if t.dom_len != len(w1) or t.cod_len != len(w2):
        raise ShapeError("morphism shape does not match the words")
    a = w2[-1]
    w = fr.contraction_weight(a)
    n = fr.n
    cols_in = t.n_cols
    out: Vec = {}
    new_cols = cols_in * n
    for f, val in t.data.items():
        r, i = divmod(f, cols_in)
        j, c = divmod(r, n)
        base = j * new_cols + i * n
        if w.is_identity:
            vec_add_into(out, base + c, val)
        else:
            for d in range(n):
                wcd = w.rows[c][d]
                if not wcd.is_zero():
                    vec_add_into(out, base + d, wcd * val)
    return (
        LinMap(n, len(w1) + 1, len(w2) - 1, out),
        w1 + colour_invert(a),
        w2[:-1],
    )


def right_rotate_inv(fr: Frame, t: LinMap, w1: str, w2: str) -> tuple[LinMap, str, str]:
    """C(w1 a, w2) -> C(w1, w2 a-bar)."""
    if not w1:
        raise ShapeError("inverse right rotation needs a non-empty domain word")
    if t.dom_len != len(w1) or t.cod_len != len(w2):
        raise ShapeError("morphism shape does not match the words")
    a = w1[-1]
    x = fr.x_white if a == WHITE else fr.x_black
    n = fr.n
    cols_in = t.n_cols
    new_cols = cols_in // n
    out: Vec = {}
    for f, val in t.data.items():
        r, col = divmod(f, cols_in)
        i, c = divmod(col, n)
        row = x.rows[c]
        for d in range(n):
            xcd = row[d]
            if not xcd.is_zero():
                vec_add_into(out, (r * n + d) * new_cols + i, xcd * val)
    return (
        LinMap(n, len(w1) - 1, len(w2) + 1, out),
        w1[:-1],
        w2 + colour_invert(a),
    )


def left_rotate(fr: Frame, t: LinMap, w1: str, w2: str) -> tuple[LinMap, str, str]:
    """C(a w1, w2) -> C(w1, a-bar w2)."""
    if not w1:
        raise ShapeError("left rotation needs a non-empty domain word")
    if t.dom_len != len(w1) or t.cod_len != len(w2):
        raise ShapeError("morphism shape does not match the words")
    a = w1[0]
    y = fr.y_white if a == WHITE else fr.y_black
    n = fr.n
    cols_in = t.n_cols
    new_cols = cols_in // n
    rows_out_base = t.n_rows
    out: Vec = {}
    for f, val in t.data.items():
        r, col = divmod(f, cols_in)
        c, i = divmod(col, new_cols)
        for d in range(n):
            ydc = y.rows[d][c]
            if not ydc.is_zero():
                vec_add_into(out, (d * rows_out_base + r) * new_cols + i, ydc * val)
    return (
        LinMap(n, len(w1) - 1, len(w2) + 1, out),
        w1[1:],
        colour_invert(a) + w2,
    )


def left_rotate_inv(fr: Frame, t: LinMap, w1: str, w2: str) -> tuple[LinMap, str, str]:
    """C(w1, a-bar w2) -> C(a w1, w2); ``a`` is the inverse of w2's head."""
    if not w2:
        raise ShapeError("inverse left rotation needs a non-empty codomain word")
    if t.dom_len != len(w1) or t.cod_len != len(w2):
        raise ShapeError("morphism shape does not match the words")
    a = colour_invert(w2[0])
    w = fr.contraction_weight(a)
    n = fr.n
    cols_in = t.n_cols
    rows_rest = t.n_rows // n
    out: Vec = {}
    for f, val in t.data.items():
        r, i = divmod(f, cols_in)
        d, j = divmod(r, rows_rest)
        for c, m in w.cols[d]:
            vec_add_into(out, j * (cols_in * n) + c * cols_in + i, m * val)
    return (
        LinMap(n, len(w1) + 1, len(w2) - 1, out),
        a + w1,
        w2[1:],
    )


# ---------------------------------------------------------------------------
# fix vectors <-> morphisms


def fix_from_morphism(fr: Frame, t: LinMap, w1: str, w2: str) -> tuple[LinMap, str]:
    """Iterate the inverse right rotation until the domain is empty."""
    cur, u1, u2 = t, w1, w2
    while u1:
        cur, u1, u2 = right_rotate_inv(fr, cur, u1, u2)
    return cur, u2


def morphism_from_fix(fr: Frame, eta: LinMap, w1: str, w2: str) -> LinMap:
    """Inverse of ``fix_from_morphism``: C(empty, w2 . star(w1)) -> C(w1, w2)."""
    cur, u1, u2 = eta, "", w2 + word_star(w1)
    for _ in range(len(w1)):
        cur, u1, u2 = right_rotate(fr, cur, u1, u2)
    if (u1, u2) != (w1, w2):
        raise ShapeError("rotation bookkeeping failed")
    return cur
