"""Exact Gaussian-rational scalars, sparse linear maps between tensor
powers of C^N, and canonical row-reduced subspaces.

Conventions fixed here and relied on everywhere else:

* a scalar is ``(a + b*i)/d`` with integers ``a, b, d``, ``d > 0`` and
  ``gcd(a, b, d) = 1``; equality is structural;
* a map ``(C^N)^{dom} -> (C^N)^{cod}`` is stored sparsely by the flat
  index ``row * N**dom + col`` where multi-indices are read in
  mixed-radix big-endian order (leftmost tensor leg most significant);
* a subspace is the canonical reduced row echelon form of its
  vectorized elements (leading entries 1, pivot columns cleared, rows
  ordered by pivot), so subspace equality is basis equality.

Sparse vectors may carry plain ``int`` values; integer data is row
reduced fraction-free (primitive integer rows with positive pivots, an
equivalent canonical form) which is what makes the saturation engine
affordable at N = 4.  Scalars and ints mix freely in arithmetic.
"""

from __future__ import annotations

import bisect
import itertools
from math import gcd
from typing import Iterable, Sequence


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


# ---------------------------------------------------------------------------
# scalars


class Scalar:
    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int = 0, d: int = 1):
        if d == 0:
            raise ZeroDivisionError("scalar with zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        if d != 1:
            g = gcd(gcd(a, b), d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        self.a = a
        self.b = b
        self.d = d

    @staticmethod
    def from_rational(num: int, den: int = 1) -> "Scalar":
        return Scalar(num, 0, den)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def is_real(self) -> bool:
        return self.b == 0

    def is_integer(self) -> bool:
        return self.b == 0 and self.d == 1

    def conj(self) -> "Scalar":
        if self.b == 0:
            return self
        return _raw(self.a, -self.b, self.d)

    def inverse(self) -> "Scalar":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero scalar")
        return Scalar(self.a * self.d, -self.b * self.d, n)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.d == other.d:
            if self.d == 1:
                return _raw(self.a + other.a, self.b + other.b, 1)
            return Scalar(self.a + other.a, self.b + other.b, self.d)
        return Scalar(
            self.a * other.d + other.a * self.d,
            self.b * other.d + other.b * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __neg__(self):
        return _raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__add__(_raw(-other.a, -other.b, other.d))

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__sub__(self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.b == 0 and other.b == 0:
            if self.d == 1 and other.d == 1:
                return _raw(self.a * other.a, 0, 1)
            return Scalar(self.a * other.a, 0, self.d * other.d)
        a = self.a * other.a - self.b * other.b
        b = self.a * other.b + self.b * other.a
        if self.d == 1 and other.d == 1:
            return _raw(a, b, 1)
        return Scalar(a, b, self.d * other.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.__mul__(other.inverse())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.__mul__(self.inverse())

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0 and self.d == 1:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.d)

    def text(self) -> str:
        """Canonical text form, e.g. ``-3/2``, ``1/2+1/3*i``, ``-1*i``."""
        re_part = _frac_text(self.a, self.d)
        if self.b == 0:
            return re_part
        im_part = f"{_frac_text(self.b, self.d)}*i"
        if self.a == 0:
            return im_part
        if self.b > 0:
            return f"{re_part}+{im_part}"
        return f"{re_part}{im_part}"

    @staticmethod
    def parse(text: str) -> "Scalar":
        return parse_scalar(text)

    def __repr__(self):
        return f"Scalar({self.text()!r})"


def _raw(a: int, b: int, d: int) -> Scalar:
    s = object.__new__(Scalar)
    s.a = a
    s.b = b
    s.d = d
    return s


def _coerce(x):
    if type(x) is Scalar:
        return x
    if isinstance(x, int):
        return _raw(x, 0, 1)
    return NotImplemented


def _frac_text(num: int, den: int) -> str:
    return str(num) if den == 1 else f"{num}/{den}"


ZERO = _raw(0, 0, 1)
ONE = _raw(1, 0, 1)
MINUS_ONE = _raw(-1, 0, 1)
I = _raw(0, 1, 1)


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical text form (also accepts ``i`` and ``-i``)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty scalar text")
    re_s, im_s = t, None
    if t.endswith("i"):
        core = t[:-1]
        if core.endswith("*"):
            core = core[:-1]
        cut = max(core.rfind("+", 1), core.rfind("-", 1))
        if cut == -1:
            re_s, im_s = None, core
        else:
            re_s, im_s = core[:cut], core[cut:]
    re_n, re_d = _parse_frac(re_s) if re_s else (0, 1)
    im_n, im_d = _parse_frac(im_s) if im_s is not None else (0, 1)
    return Scalar(re_n * im_d, im_n * re_d, re_d * im_d)


def _parse_frac(s: str) -> tuple[int, int]:
    if s in ("", "+"):
        return 1, 1
    if s == "-":
        return -1, 1
    if "/" in s:
        n, d = s.split("/")
        return int(n), int(d)
    return int(s), 1


# ---------------------------------------------------------------------------
# sparse vectors: dict flat-index -> int | Scalar, zero values never stored


Vec = dict


def scalar_of(v) -> Scalar:
    return _raw(v, 0, 1) if isinstance(v, int) else v


def conj_value(v):
    return v if isinstance(v, int) else v.conj()


def vec_add_into(acc: Vec, idx: int, val) -> None:
    cur = acc.get(idx)
    if cur is None:
        if val:
            acc[idx] = val
        return
    s = cur + val
    if s:
        acc[idx] = s
    else:
        del acc[idx]


def vec_scale(v: Vec, c) -> Vec:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_tensor(u: Vec, v: Vec, v_ambient: int) -> Vec:
    out: Vec = {}
    for iu, a in u.items():
        base = iu * v_ambient
        for iv, b in v.items():
            out[base + iv] = a * b
    return out


def vec_conj(v: Vec) -> Vec:
    return {i: conj_value(x) for i, x in v.items()}


def vec_is_integral(v: Vec) -> bool:
    return all(type(x) is int for x in v.values())


def intify(v: Vec) -> Vec:
    """Plain-int copy when every value is an integer, else a copy."""
    out: Vec = {}
    for i, x in v.items():
        if type(x) is int:
            out[i] = x
        elif x.is_integer():
            out[i] = x.a
        else:
            return dict(v)
    return out


def vec_key(v: Vec) -> tuple:
    return tuple(sorted((i, scalar_of(x).key()) for i, x in v.items()))


def _content(v: Vec) -> int:
    g = 0
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


# ---------------------------------------------------------------------------
# linear maps


class LinMap:
    """A linear map (C^N)^{dom_len} -> (C^N)^{cod_len}, stored sparsely.

    Entries are always Scalars at this level; raw int-valued dicts are
    an internal representation of the subspace machinery only.
    """

    __slots__ = ("n", "dom_len", "cod_len", "data")

    def __init__(self, n: int, dom_len: int, cod_len: int, data: Vec | None = None):
        if n < 1:
            raise ShapeError("N must be positive")
        self.n = n
        self.dom_len = dom_len
        self.cod_len = cod_len
        clean: Vec = {}
        if data:
            for i, v in data.items():
                s = scalar_of(v)
                if s.a or s.b:
                    clean[i] = s
        self.data = clean

    # -- constructors -------------------------------------------------
    @staticmethod
    def identity(n: int, legs: int) -> "LinMap":
        size = n**legs
        return LinMap(n, legs, legs, {i * size + i: ONE for i in range(size)})

    @staticmethod
    def zero(n: int, dom_len: int, cod_len: int) -> "LinMap":
        return LinMap(n, dom_len, cod_len, {})

    @staticmethod
    def scalar(n: int, value: Scalar) -> "LinMap":
        return LinMap(n, 0, 0, {0: value})

    @staticmethod
    def from_entries(
        n: int, dom_len: int, cod_len: int, entries: Sequence[Sequence[Scalar]]
    ) -> "LinMap":
        rows, cols = n**cod_len, n**dom_len
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ShapeError("entry grid does not match shape")
        data: Vec = {}
        for r in range(rows):
            for c in range(cols):
                v = entries[r][c]
                if v:
                    data[r * cols + c] = v
        return LinMap(n, dom_len, cod_len, data)

    @staticmethod
    def column_vector(n: int, legs: int, vec: Vec) -> "LinMap":
        return LinMap(n, 0, legs, vec)

    # -- basic queries ------------------------------------------------
    @property
    def n_rows(self) -> int:
        return self.n**self.cod_len

    @property
    def n_cols(self) -> int:
        return self.n**self.dom_len

    def entry(self, row: int, col: int) -> Scalar:
        return self.data.get(row * self.n_cols + col, ZERO)

    def is_zero(self) -> bool:
        return not self.data

    def same_shape(self, other: "LinMap") -> bool:
        return (
            self.n == other.n
            and self.dom_len == other.dom_len
            and self.cod_len == other.cod_len
        )

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return self.same_shape(other) and self.data == other.data

    def __hash__(self):
        return hash((self.n, self.dom_len, self.cod_len, vec_key(self.data)))

    def dense(self) -> list[list[Scalar]]:
        cols = self.n_cols
        out = [[ZERO] * cols for _ in range(self.n_rows)]
        for f, v in self.data.items():
            out[f // cols][f % cols] = v
        return out

    # -- algebra ------------------------------------------------------
    def __add__(self, other: "LinMap") -> "LinMap":
        if not self.same_shape(other):
            raise ShapeError("shape mismatch in addition")
        data = dict(self.data)
        for i, v in other.data.items():
            vec_add_into(data, i, v)
        return LinMap(self.n, self.dom_len, self.cod_len, data)

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + other.scale(MINUS_ONE)

    def scale(self, c: Scalar) -> "LinMap":
        return LinMap(self.n, self.dom_len, self.cod_len, vec_scale(self.data, c))

    def adjoint(self) -> "LinMap":
        cols = self.n_cols
        rows = self.n_rows
        data: Vec = {}
        for f, v in self.data.items():
            r, c = divmod(f, cols)
            data[c * rows + r] = v.conj()
        return LinMap(self.n, self.cod_len, self.dom_len, data)

    def vectorized(self) -> Vec:
        return self.data


def tensor_product(a: LinMap, b: LinMap) -> LinMap:
    """Kronecker product with a's legs before b's legs."""
    if a.n != b.n:
        raise ShapeError("tensor factors over different N")
    rb, cb = b.n_rows, b.n_cols
    cols = a.n_cols * cb
    data: Vec = {}
    for fa, va in a.data.items():
        ra_, ca_ = divmod(fa, a.n_cols)
        for fb, vb in b.data.items():
            rb_, cb_ = divmod(fb, cb)
            data[(ra_ * rb + rb_) * cols + (ca_ * cb + cb_)] = va * vb
    return LinMap(a.n, a.dom_len + b.dom_len, a.cod_len + b.cod_len, data)


def compose(s: LinMap, t: LinMap) -> LinMap:
    """Matrix product ``s . t`` (apply ``t`` first)."""
    if s.n != t.n or s.dom_len != t.cod_len:
        raise ShapeError(
            f"cannot compose ({s.cod_len}<-{s.dom_len}) with ({t.cod_len}<-{t.dom_len})"
        )
    by_row: dict[int, list[tuple[int, Scalar]]] = {}
    for f, v in t.data.items():
        r, c = divmod(f, t.n_cols)
        by_row.setdefault(r, []).append((c, v))
    data: Vec = {}
    for f, v in s.data.items():
        r, mid = divmod(f, s.n_cols)
        hits = by_row.get(mid)
        if not hits:
            continue
        base = r * t.n_cols
        for c, w in hits:
            vec_add_into(data, base + c, v * w)
    return LinMap(s.n, t.dom_len, s.cod_len, data)


def adjoint(t: LinMap) -> LinMap:
    return t.adjoint()


# ---------------------------------------------------------------------------
# canonical subspaces


_SERIAL = itertools.count(1)


class Subspace:
    """Canonical row space of vectorized maps of one fixed shape.

    Two internal representations share one canonical meaning:

    * ``int`` rows: primitive integer vectors, positive pivot values,
      pivot columns cleared elsewhere (fraction-free RREF);
    * ``Scalar`` rows: leading entries 1, pivot columns cleared.

    Both determine the textbook RREF uniquely; comparisons always go
    through the normalized form.  Instances are immutable; ``inserted``
    returns a new object sharing unchanged rows.
    """

    __slots__ = (
        "n",
        "dom_len",
        "cod_len",
        "_rows",
        "_pivots",
        "_pivvals",
        "_full",
        "_pivot_index",
        "_canon",
        "serial",
    )

    def __init__(
        self,
        n: int,
        dom_len: int,
        cod_len: int,
        rows: tuple[Vec, ...] = (),
        pivots: tuple[int, ...] = (),
        pivvals: tuple | None = None,
        full: bool = False,
    ):
        self.n = n
        self.dom_len = dom_len
        self.cod_len = cod_len
        self._rows = rows
        self._pivots = pivots
        self._pivvals = pivvals if pivvals is not None else (1,) * len(rows)
        self._full = full
        self._pivot_index = None
        self._canon = None
        self.serial = next(_SERIAL)

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero(n: int, dom_len: int, cod_len: int) -> "Subspace":
        return Subspace(n, dom_len, cod_len)

    @staticmethod
    def full(n: int, dom_len: int, cod_len: int) -> "Subspace":
        return Subspace(n, dom_len, cod_len, full=True)

    # -- queries --------------------------------------------------------
    @property
    def ambient(self) -> int:
        return self.n ** (self.dom_len + self.cod_len)

    @property
    def dim(self) -> int:
        return self.ambient if self._full else len(self._rows)

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self._full or len(self._rows) == self.ambient

    def rows(self) -> tuple[Vec, ...]:
        if self._full and not self._rows:
            self._rows = tuple({i: 1} for i in range(self.ambient))
            self._pivots = tuple(range(self.ambient))
            self._pivvals = (1,) * self.ambient
        return self._rows

    def pivots(self) -> tuple[int, ...]:
        self.rows()
        return self._pivots

    def _index(self) -> dict:
        if self._pivot_index is None:
            self._pivot_index = {p: i for i, p in enumerate(self._pivots)}
        return self._pivot_index

    def same_shape(self, other: "Subspace") -> bool:
        return (
            self.n == other.n
            and self.dom_len == other.dom_len
            and self.cod_len == other.cod_len
        )

    def _check_shape(self, other: "Subspace") -> None:
        if not self.same_shape(other):
            raise ShapeError("subspace shape mismatch")

    def canonical_rows(self) -> tuple:
        """Rows of the leading-1 RREF as hashable item tuples."""
        if self._canon is None:
            out = []
            for row, piv in zip(self.rows(), self._pivvals):
                if piv == 1:
                    out.append(vec_key(row))
                else:
                    out.append(
                        tuple(
                            sorted(
                                (i, (scalar_of(x) / piv).key())
                                for i, x in row.items()
                            )
                        )
                    )
            self._canon = tuple(out)
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if not self.same_shape(other):
            return False
        if self.dim != other.dim:
            return False
        if self.is_full() and other.is_full():
            return True
        if self._pivots != other._pivots:
            return False
        return self.canonical_rows() == other.canonical_rows()

    def __hash__(self):
        if self.is_full():
            return hash((self.n, self.dom_len, self.cod_len, "full", self.ambient))
        return hash((self.n, self.dom_len, self.cod_len) + self.canonical_rows())

    def basis_maps(self) -> list[LinMap]:
        out = []
        for row, piv in zip(self.rows(), self._pivvals):
            if piv == 1:
                out.append(LinMap(self.n, self.dom_len, self.cod_len, row))
            else:
                out.append(
                    LinMap(
                        self.n,
                        self.dom_len,
                        self.cod_len,
                        {i: scalar_of(x) / piv for i, x in row.items()},
                    )
                )
        return out

    # -- reduction ------------------------------------------------------
    def _is_int_mode(self) -> bool:
        return all(type(p) is int for p in self._pivvals)

    def reduce(self, vec: Vec) -> Vec:
        """Residual of ``vec`` after eliminating all pivot columns.

        The residual is zero iff ``vec`` lies in the subspace; nonzero
        residuals are only meaningful up to scale.
        """
        if self._full:
            return {}
        if not self._rows:
            return dict(vec)
        v = intify(vec)
        if self._is_int_mode() and vec_is_integral(v):
            return self._reduce_int(v)
        return self._reduce_general(v)

    def _reduce_int(self, v: Vec) -> Vec:
        index = self._index()
        rows = self._rows
        pivvals = self._pivvals
        for col in sorted(c for c in v if c in index):
            c = v.pop(col, 0)
            if not c:
                continue
            ri = index[col]
            row = rows[ri]
            piv = pivvals[ri]
            q, rem = divmod(c, piv)
            if rem == 0:
                for k, rv in row.items():
                    if k == col:
                        continue
                    nv = v.get(k, 0) - q * rv
                    if nv:
                        v[k] = nv
                    elif k in v:
                        del v[k]
            else:
                for k in list(v):
                    v[k] = v[k] * piv
                for k, rv in row.items():
                    if k == col:
                        continue
                    nv = v.get(k, 0) - c * rv
                    if nv:
                        v[k] = nv
                    elif k in v:
                        del v[k]
        return v

    def _reduce_general(self, v: Vec) -> Vec:
        index = self._index()
        rows = self._rows
        pivvals = self._pivvals
        for col in sorted(c for c in v if c in index):
            c = v.pop(col, 0)
            if not c:
                continue
            ri = index[col]
            row = rows[ri]
            factor = scalar_of(c) / pivvals[ri]
            for k, rv in row.items():
                if k == col:
                    continue
                vec_add_into(v, k, -(factor * rv))
        return v

    def member_vec(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def inserted(self, vec: Vec) -> tuple["Subspace", Vec | None]:
        """Canonical form after adjoining ``vec``.

        Returns ``(self, None)`` when nothing new, otherwise the new
        subspace and the reduced new row (a spanning witness).
        """
        if self._full:
            return self, None
        res = self.reduce(vec)
        if not res:
            return self, None
        if vec_is_integral(res) and self._is_int_mode():
            return self._inserted_int(res)
        return self._inserted_general(res)

    def _inserted_int(self, res: Vec) -> tuple["Subspace", Vec]:
        g = _content(res)
        pivot = min(res)
        if res[pivot] < 0:
            g = -g
        if g != 1:
            res = {k: x // g for k, x in res.items()}
        piv_val = res[pivot]
        rows = []
        pivvals = []
        for row, pv in zip(self._rows, self._pivvals):
            c = row.get(pivot)
            if c is None:
                rows.append(row)
                pivvals.append(pv)
                continue
            q, rem = divmod(c, piv_val)
            merged = dict(row)
            del merged[pivot]
            if rem == 0:
                for k, nv in res.items():
                    if k == pivot:
                        continue
                    x = merged.get(k, 0) - q * nv
                    if x:
                        merged[k] = x
                    elif k in merged:
                        del merged[k]
            else:
                for k in list(merged):
                    merged[k] = merged[k] * piv_val
                pv = pv * piv_val
                for k, nv in res.items():
                    if k == pivot:
                        continue
                    x = merged.get(k, 0) - c * nv
                    if x:
                        merged[k] = x
                    elif k in merged:
                        del merged[k]
                gg = gcd(_content(merged), pv)
                if gg > 1:
                    merged = {k: x // gg for k, x in merged.items()}
                    pv //= gg
            rows.append(merged)
            pivvals.append(pv)
        pos = bisect.bisect_left(self._pivots, pivot)
        rows.insert(pos, res)
        pivvals.insert(pos, piv_val)
        pivots = self._pivots[:pos] + (pivot,) + self._pivots[pos:]
        out = Subspace(
            self.n,
            self.dom_len,
            self.cod_len,
            tuple(rows),
            pivots,
            tuple(pivvals),
            full=(len(rows) == self.ambient),
        )
        return out, res

    def _inserted_general(self, res: Vec) -> tuple["Subspace", Vec]:
        pivot = min(res)
        inv = scalar_of(res[pivot]).inverse()
        new_row = {k: inv * v for k, v in res.items()}
        new_row[pivot] = ONE
        rows = []
        pivvals = []
        for row, pv in zip(self._rows, self._pivvals):
            c = row.get(pivot)
            if c is None:
                rows.append(row)
                pivvals.append(pv)
                continue
            factor = scalar_of(c)
            merged = dict(row)
            del merged[pivot]
            for k, nv in new_row.items():
                if k == pivot:
                    continue
                vec_add_into(merged, k, -(factor * nv))
            rows.append(merged)
            pivvals.append(pv)
        pos = bisect.bisect_left(self._pivots, pivot)
        rows.insert(pos, new_row)
        pivvals.insert(pos, ONE)
        pivots = self._pivots[:pos] + (pivot,) + self._pivots[pos:]
        out = Subspace(
            self.n,
            self.dom_len,
            self.cod_len,
            tuple(rows),
            pivots,
            tuple(pivvals),
            full=(len(rows) == self.ambient),
        )
        return out, new_row

    # -- lattice operations ----------------------------------------------
    def contains(self, other: "Subspace") -> bool:
        self._check_shape(other)
        if self.is_full():
            return True
        if other.dim > self.dim:
            return False
        return all(self.member_vec(r) for r in other.rows())

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_shape(other)
        if self.is_full():
            return self
        if other.is_full():
            return other
        out = self
        for r in other.rows():
            out, _ = out.inserted(r)
        return out

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: rows (v|v) for v in self, (w|0) for w in other;
        left-zero rows of the combined reduction carry the
        intersection."""
        self._check_shape(other)
        if self.is_full():
            return other
        if other.is_full():
            return self
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.n, self.dom_len, self.cod_len)
        amb = self.ambient
        scratch = Subspace(self.n, self.dom_len, self.cod_len + 1)
        for r in self.rows():
            doubled = dict(r)
            for k, v in r.items():
                doubled[k + amb] = v
            scratch, _ = scratch.inserted(doubled)
        for r in other.rows():
            scratch, _ = scratch.inserted(dict(r))
        out = Subspace.zero(self.n, self.dom_len, self.cod_len)
        for row, pivot in zip(scratch.rows(), scratch.pivots()):
            if pivot >= amb:
                out, _ = out.inserted({k - amb: v for k, v in row.items()})
        return out


def span(maps: Iterable[LinMap]) -> Subspace:
    """Canonical subspace spanned by the given maps (zero maps dropped)."""
    maps = list(maps)
    if not maps:
        raise ShapeError("span of an empty list has no shape")
    first = maps[0]
    out = Subspace.zero(first.n, first.dom_len, first.cod_len)
    for m in maps:
        if not first.same_shape(m):
            raise ShapeError("span over maps of mixed shapes")
        out, _ = out.inserted(m.data)
    return out


def member(v: Subspace, t: LinMap) -> bool:
    if v.n != t.n or v.dom_len != t.dom_len or v.cod_len != t.cod_len:
        raise ShapeError("membership test with mismatched shapes")
    return v.member_vec(t.data)


def intersect(v: Subspace, w: Subspace) -> Subspace:
    return v.intersect(w)
