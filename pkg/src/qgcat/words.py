"""Two-coloured words and their cyclically extended counterparts.

Plain words are strings over ``w`` (white circle) and ``b`` (black
circle); the empty string is the monoid identity.  Extended words mix
squares ``s``/``S`` with triangle exponents and live in the monoid with
relations ``t T = T t = empty`` and ``t^k = empty`` (``k = 0`` encodes
the infinite cyclic case, where exponents are unbounded integers).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

WHITE = "w"
BLACK = "b"

WHITE_SQ = "s"
BLACK_SQ = "S"


class WordError(ValueError):
    """Malformed word or incompatible moduli."""


def validate_word(w: str) -> str:
    for ch in w:
        if ch not in (WHITE, BLACK):
            raise WordError(f"invalid circle letter {ch!r} in {w!r}")
    return w


def colour_invert(w: str) -> str:
    """Flip the colour of every letter; involutive."""
    return w.translate(_INVERT)


_INVERT = str.maketrans({WHITE: BLACK, BLACK: WHITE})


def word_star(w: str) -> str:
    """Colour inversion composed with reversal (an anti-homomorphism)."""
    return colour_invert(w)[::-1]


def colour_sum(w: str) -> int:
    """Number of white letters minus number of black letters."""
    return 2 * w.count(WHITE) - len(w)


def enumerate_words(max_len: int) -> Iterator[str]:
    """All words of length <= max_len, shortest first, ``w`` before ``b``."""
    if max_len < 0:
        raise WordError("length bound must be non-negative")
    for length in range(max_len + 1):
        for letters in itertools.product((WHITE, BLACK), repeat=length):
            yield "".join(letters)


@dataclass(frozen=True)
class ExtWord:
    """Normal form ``t^lead  q_1 t^e_1  q_2 t^e_2 ...`` of an extended word.

    ``body`` holds one ``(square_colour, exponent_after_square)`` pair per
    square.  For ``k > 0`` every exponent is reduced into ``[0, k)``; for
    ``k = 0`` exponents are arbitrary integers.  The normal form is unique,
    so structural equality decides equality in the monoid.
    """

    k: int
    lead: int = 0
    body: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        if self.k < 0:
            raise WordError("modulus must be non-negative")
        object.__setattr__(self, "lead", _red(self.lead, self.k))
        object.__setattr__(
            self,
            "body",
            tuple((c, _red(e, self.k)) for c, e in self.body),
        )
        for c, _ in self.body:
            if c not in (WHITE_SQ, BLACK_SQ):
                raise WordError(f"invalid square letter {c!r}")

    @property
    def squares(self) -> str:
        return "".join(c for c, _ in self.body)

    def square_colour(self, i: int) -> str:
        return self.body[i][0]

    def is_empty(self) -> bool:
        return not self.body and self.lead == 0

    def is_triangle_free(self) -> bool:
        return self.lead == 0 and all(e == 0 for _, e in self.body)

    def as_circles(self) -> str:
        """Read squares as circles; only valid for triangle-free words."""
        if not self.is_triangle_free():
            raise WordError(f"{self} contains triangles")
        return self.squares.translate(_SQ2CIRCLE)

    def concat(self, other: "ExtWord") -> "ExtWord":
        return ext_concat(self, other)

    def invert(self) -> "ExtWord":
        body = tuple(
            (_SQ_FLIP[c], _red(-e, self.k)) for c, e in self.body
        )
        return ExtWord(self.k, -self.lead, body)

    def star(self) -> "ExtWord":
        """Reversal composed with colour/triangle inversion."""
        if not self.body:
            return ExtWord(self.k, -self.lead)
        exps = [self.lead] + [e for _, e in self.body]
        cols = [c for c, _ in self.body]
        rev_exps = [-e for e in reversed(exps)]
        rev_cols = [_SQ_FLIP[c] for c in reversed(cols)]
        body = tuple(zip(rev_cols, rev_exps[1:]))
        return ExtWord(self.k, rev_exps[0], body)

    def text(self) -> str:
        parts = [_exp_text(self.lead, self.k)]
        for c, e in self.body:
            parts.append(c)
            parts.append(_exp_text(e, self.k))
        return "".join(parts)

    def __str__(self) -> str:  # pragma: no cover - repr convenience
        return self.text() or "(empty)"


_SQ2CIRCLE = str.maketrans({WHITE_SQ: WHITE, BLACK_SQ: BLACK})
_SQ_FLIP = {WHITE_SQ: BLACK_SQ, BLACK_SQ: WHITE_SQ}


def _red(e: int, k: int) -> int:
    return e % k if k > 0 else e


def _exp_text(e: int, k: int) -> str:
    if e >= 0:
        return "t" * e
    return "T" * (-e)


def ext_empty(k: int) -> ExtWord:
    return ExtWord(k)


def ext_letters(k: int, letters: str) -> ExtWord:
    """Build an extended word from single-character tokens.

    ``t`` is one white triangle, ``T`` its inverse (``t^{k-1}`` for
    ``k > 0``), ``s``/``S`` are the squares.
    """
    lead = 0
    body: list[tuple[str, int]] = []
    for ch in letters:
        if ch in ("t", "T"):
            step = 1 if ch == "t" else -1
            if body:
                c, e = body[-1]
                body[-1] = (c, e + step)
            else:
                lead += step
        elif ch in (WHITE_SQ, BLACK_SQ):
            body.append((ch, 0))
        else:
            raise WordError(f"invalid extended letter {ch!r}")
    return ExtWord(k, lead, tuple(body))


def parse_ext_word(text: str, k: int) -> ExtWord:
    return ext_letters(k, text)


def ext_concat(u: ExtWord, v: ExtWord) -> ExtWord:
    if u.k != v.k:
        raise WordError(f"modulus mismatch: {u.k} vs {v.k}")
    if not u.body:
        return ExtWord(v.k, u.lead + v.lead, v.body)
    body = list(u.body)
    c, e = body[-1]
    body[-1] = (c, e + v.lead)
    body.extend(v.body)
    return ExtWord(u.k, u.lead, tuple(body))


def square_count(w: ExtWord) -> int:
    """Number of squares; invariant under the triangle relations."""
    return len(w.body)


def ext_colour_sum(w: ExtWord) -> int:
    sq = w.squares
    return 2 * sq.count(WHITE_SQ) - len(sq)


def triangle_sum(w: ExtWord) -> int:
    """Total triangle exponent (an element of Z_k)."""
    return _red(w.lead + sum(e for _, e in w.body), w.k)


def glue_word(w: str, k: int) -> ExtWord:
    """Image of a circle word under white -> s t, black -> T S."""
    validate_word(w)
    out = ExtWord(k)
    for ch in w:
        piece = (
            ExtWord(k, 0, ((WHITE_SQ, 1),))
            if ch == WHITE
            else ExtWord(k, -1, ((BLACK_SQ, 0),))
        )
        out = ext_concat(out, piece)
    return out


def ext_rotate_word(w: ExtWord) -> tuple[ExtWord, bool]:
    """One rotation step: move the trailing letter run to the front.

    Returns the rotated word and a flag telling whether a square was
    moved (triangle moves act as the identity on fix vectors).
    """
    if not w.body:
        return w, False
    last_c, last_e = w.body[-1]
    if last_e != 0:
        body = w.body[:-1] + ((last_c, 0),)
        return ExtWord(w.k, w.lead + last_e, body), False
    body = ((last_c, w.lead),) + w.body[:-1]
    return ExtWord(w.k, 0, body), True


def ext_rotate_inv_word(w: ExtWord) -> tuple[ExtWord, bool]:
    """One inverse rotation step: move the leading letter run to the end."""
    if not w.body:
        return w, False
    if w.lead != 0:
        c, e = w.body[-1]
        body = w.body[:-1] + ((c, e + w.lead),)
        return ExtWord(w.k, 0, body), False
    first_c, first_e = w.body[0]
    return ExtWord(w.k, first_e, w.body[1:] + ((first_c, 0),)), True
