"""Quantum-group invariants and constructions at the table level:
degree of reflection, global colourization, colour-inversion
invariance, alternating-ness, the two complexifications, ungluings, and
the verification drivers behind the CLI's ``verify`` command.

Every predicate is decided up to the cutoffs its table was built with;
verdicts say so explicitly instead of claiming global statements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm

from .category import (
    CutoffError,
    ExtFixTable,
    FixTable,
    TableError,
    closure,
    ext_closure,
    free_product_table,
    full_table,
    glue_table,
    table_intersect,
    table_join,
    tables_equal_witness,
)
from .frame import fix_from_morphism
from .linalg import LinMap, Subspace, tensor_product
from .words import (
    BLACK_SQ,
    ExtWord,
    WHITE_SQ,
    colour_invert,
    colour_sum,
    enumerate_words,
    glue_word,
)


class NotApplicableError(ValueError):
    """The requested construction is outside its stated hypotheses."""


# ---------------------------------------------------------------------------
# degree of reflection


@dataclass(frozen=True)
class DegreeCertificate:
    """The non-negative generator of the observed colour-sum subgroup.

    The true degree of reflection always divides ``value``; enlarging
    the cutoff can only refine (divide) the certified value.
    """

    value: int
    witnesses: tuple[tuple[str, int], ...]
    report_cutoff: int
    work_cutoff: int


def degree_of_reflection(table: FixTable, upto: int | None = None) -> DegreeCertificate:
    upto = table.report_cutoff if upto is None else upto
    value = 0
    witnesses: list[tuple[str, int]] = []
    for w in enumerate_words(upto):
        if table.space(w).is_zero():
            continue
        c = colour_sum(w)
        refined = gcd(value, c)
        if refined != value:
            witnesses.append((w, c))
            value = refined
    return DegreeCertificate(value, tuple(witnesses), upto, table.work_cutoff)


# ---------------------------------------------------------------------------
# predicates


def is_globally_colourized(table: FixTable) -> bool:
    """Identity map intertwines the two-letter words of mixed colouring."""
    if table.report_cutoff < 4:
        raise CutoffError("global colourization needs report cutoff >= 4")
    ident = LinMap.identity(table.frame.n, 2)
    return table.mor_space("wb", "bw").member_vec(ident.data)


def globally_colourized_witnesses(table: FixTable, upto: int | None = None):
    """Pairs of equal-length, equal-colour-sum words whose spaces differ
    (empty when the permutation invariance holds on the stored words)."""
    upto = table.report_cutoff if upto is None else upto
    bad = []
    by_key: dict[tuple[int, int], str] = {}
    for w in enumerate_words(upto):
        key = (len(w), colour_sum(w))
        other = by_key.setdefault(key, w)
        if other != w and table.space(w) != table.space(other):
            bad.append((other, w))
    return bad


def is_colour_inversion_invariant(table: FixTable) -> tuple[bool, str | None]:
    """Spaces agree at colour-inverted words; needs F.conj(F) scalar."""
    if table.frame.c_opt is None:
        raise NotApplicableError(
            "colour-inversion invariance is defined for frames with F.conj(F) scalar"
        )
    for w in enumerate_words(table.report_cutoff):
        if table.space(w) != table.space(colour_invert(w)):
            return False, w
    return True, None


def alternating_generators(table: FixTable) -> list[tuple[str, Subspace]]:
    gens = []
    for j in range(1, table.report_cutoff // 2 + 1):
        for w in ("wb" * j, "bw" * j):
            sp = table.space(w)
            if not sp.is_zero():
                gens.append((w, sp))
    return gens


def is_alternating_category(table: FixTable) -> tuple[bool, str | None]:
    """The table is generated by its alternating-pattern fix spaces."""
    regen = closure(
        table.frame,
        alternating_generators(table),
        table.report_cutoff,
        table.work_cutoff,
    )
    return tables_equal_witness(regen, table)


# ---------------------------------------------------------------------------
# complexifications


def tensor_complexify(table: FixTable, k: int) -> FixTable:
    """Keep the spaces at words whose colour sum vanishes mod k."""
    spaces = {}
    for w in enumerate_words(table.work_cutoff):
        c = colour_sum(w)
        keep = (c == 0) if k == 0 else (c % k == 0)
        spaces[w] = (
            table.space(w)
            if keep
            else Subspace.zero(table.frame.n, 0, len(w))
        )
    return FixTable(
        table.frame, table.report_cutoff, table.work_cutoff, spaces, table.semantics
    )


def free_complexify(
    table: FixTable,
    l: int,
    odd_witness: tuple[str, LinMap] | None = None,
) -> FixTable:
    """Closure of the alternating-pattern spaces; independent of ``l``
    whenever the degree certificate differs from one (or ``l = 0``).

    A degree-one input with finite ``l >= 2`` depends on an extra
    generator choice; pass ``odd_witness`` (an odd-length fix vector)
    to adjoin its alternating recolouring, or the call is refused.
    """
    if l == 1:
        return FixTable(
            table.frame,
            table.report_cutoff,
            table.work_cutoff,
            dict(table.spaces),
            table.semantics,
        )
    gens = alternating_generators(table)
    if l >= 2:
        cert = degree_of_reflection(table)
        if cert.value == 1 and odd_witness is None:
            raise NotApplicableError(
                "free complexification with a degree-one base and finite "
                "modulus needs an explicit odd witness generator"
            )
        if odd_witness is not None:
            gens = gens + [_alternating_witness_power(table, odd_witness, l)]
    return closure(table.frame, gens, table.report_cutoff, table.work_cutoff)


def _alternating_witness_power(
    table: FixTable, odd_witness: tuple[str, LinMap], l: int
) -> tuple[str, LinMap]:
    word, vec = odd_witness
    if len(word) % 2 == 0:
        raise NotApplicableError("the odd witness must live on an odd-length word")
    if not table.space(word).member_vec(vec.data):
        raise NotApplicableError("the odd witness is not a stored fix vector")
    m = len(word)
    target = ("wb" * m)[:m]
    out = vec
    out_word = target
    for _ in range(l - 1):
        out = tensor_product(out, vec)
        out_word += target
    if len(out_word) > table.work_cutoff:
        raise CutoffError("witness power escapes the work cutoff")
    return (out_word, out)


# ---------------------------------------------------------------------------
# ungluings


def max_unglue(
    table: FixTable,
    k: int,
    square_report: int | None = None,
    square_work: int | None = None,
) -> ExtFixTable:
    """Extended closure of the glued generators of the table."""
    if square_report is None:
        square_report = table.report_cutoff
    if square_work is None:
        square_work = min(table.work_cutoff, square_report + 2)
    gens = []
    for w in enumerate_words(min(table.work_cutoff, square_work)):
        sp = table.space(w)
        if not sp.is_zero():
            gens.append((glue_word(w, k), sp))
    return ext_closure(table.frame, k, gens, square_report, square_work)


def square_identification_generator(frame) -> tuple[ExtWord, LinMap]:
    """Fix-vector form of the identity between the two square colours."""
    vec = LinMap(frame.n, 0, 2, dict(frame.xi_wb.data))
    word = ExtWord(2, 0, ((BLACK_SQ, 0), (BLACK_SQ, 0)))
    return (word, vec)


def canonical_unglue_z2(
    table: FixTable,
    square_report: int | None = None,
    square_work: int | None = None,
) -> ExtFixTable:
    """Maximal ungluing intersected with the orthogonal free product,
    realized by adjoining the square identification generator."""
    if table.frame.c_opt is None:
        raise NotApplicableError(
            "the canonical ungluing needs F.conj(F) to be a scalar"
        )
    invariant, witness = is_colour_inversion_invariant(table)
    if not invariant:
        raise NotApplicableError(
            f"table is not colour-inversion invariant (witness {witness!r})"
        )
    if square_report is None:
        square_report = table.report_cutoff
    if square_work is None:
        square_work = min(table.work_cutoff, square_report + 2)
    gens: list[tuple[ExtWord, object]] = [square_identification_generator(table.frame)]
    for w in enumerate_words(min(table.work_cutoff, square_work)):
        sp = table.space(w)
        if not sp.is_zero():
            gens.append((glue_word(w, 2), sp))
    return ext_closure(table.frame, 2, gens, square_report, square_work)


# ---------------------------------------------------------------------------
# auxiliary tables used by the verification drivers


def orthogonal_identification_generator(frame) -> tuple[str, LinMap]:
    """Fix-vector form of the identity between the two circle colours
    (the vector sits at the doubled black word)."""
    return ("bb", LinMap(frame.n, 0, 2, dict(frame.xi_wb.data)))


def orthogonal_part(table: FixTable) -> FixTable:
    """Join with the colour identification: the largest orthogonal
    quantum subgroup's table."""
    gen_table = closure(
        table.frame,
        [orthogonal_identification_generator(table.frame)],
        table.report_cutoff,
        table.work_cutoff,
    )
    return table_join(table, gen_table)


def times_product_relation_generator(frame, k: int) -> tuple[ExtWord, LinMap]:
    """Identity intertwiner between (square triangle)^k and
    (triangle square)^k, in fix-vector form on the extended monoid of
    modulus 2: the defining relation of the interpolating product."""
    n = frame.n
    t = LinMap.identity(n, k)
    left = ExtWord(2)
    right = ExtWord(2)
    sq_t = ExtWord(2, 0, ((WHITE_SQ, 1),))
    t_sq = ExtWord(2, 1, ((WHITE_SQ, 0),))
    for _ in range(k):
        left = left.concat(sq_t)
        right = right.concat(t_sq)
    # rotate the domain squares away: C(left, right) = R^{[left]} of
    # C(empty, right . star(left)); triangles ride along for free.
    vec, circ_word = fix_from_morphism(frame, t, "w" * k, "w" * k)
    # rebuild the extended word: right . star(left)
    word = right.concat(left.star())
    return (word, LinMap(n, 0, 2 * k, vec.data))


def times_product_table(
    h: FixTable,
    two_k: int,
    square_report: int | None = None,
    square_work: int | None = None,
) -> ExtFixTable:
    """The interpolating product of an orthogonal-type table with the
    order-two cyclic dual, built from its defining relations."""
    if two_k % 2 != 0:
        raise NotApplicableError("the interpolating product needs an even order")
    k = two_k // 2
    if square_report is None:
        square_report = h.report_cutoff
    if square_work is None:
        square_work = min(h.work_cutoff, square_report + 2)
    gens: list[tuple[ExtWord, object]] = []
    for w in enumerate_words(min(h.work_cutoff, square_work)):
        sp = h.space(w)
        if sp.is_zero():
            continue
        word = ExtWord(
            2, 0, tuple(((WHITE_SQ if a == "w" else BLACK_SQ), 0) for a in w)
        )
        gens.append((word, sp))
    if k == 0:
        gens.append(_commutation_relation_generator(h.frame))
    else:
        gens.append(times_product_relation_generator(h.frame, k))
    return ext_closure(h.frame, 2, gens, square_report, square_work)


def _commutation_relation_generator(frame) -> tuple[ExtWord, LinMap]:
    """Relation of the fully commuting interpolating product: mixed
    square pairs commute past the cyclic generator, i.e. the identity
    intertwines (white-sq black-sq triangle) and (triangle white-sq
    black-sq)."""
    n = frame.n
    vec, _ = fix_from_morphism(frame, LinMap.identity(n, 2), "wb", "wb")
    left = ExtWord(2, 0, ((WHITE_SQ, 0), (BLACK_SQ, 1)))
    right = ExtWord(2, 1, ((WHITE_SQ, 0), (BLACK_SQ, 0)))
    word = right.concat(left.star())
    return (word, LinMap(n, 0, 4, vec.data))


# ---------------------------------------------------------------------------
# verification drivers


@dataclass
class Clause:
    name: str
    holds: bool
    counterexample: str | None = None


@dataclass
class Verdict:
    check_id: str
    clauses: list[Clause] = field(default_factory=list)
    evidence_only: bool = False

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.clauses)


def verify_tensor_identity(table: FixTable, k: int) -> Verdict:
    """Check A: the tensor complexification equals the intersection
    with the colour-sum filter table."""
    filtered = tensor_complexify(table, k)
    inter = table_intersect(
        table, full_table(table.frame, k, table.report_cutoff, table.work_cutoff)
    )
    ok, wit = tables_equal_witness(filtered, inter, upto=table.work_cutoff)
    v = Verdict("A")
    v.clauses.append(Clause(f"filter(k={k}) == intersect with full table", ok, wit))
    return v


def verify_global_colourization(table: FixTable, modulus: int = 0) -> Verdict:
    """Check B: zero-degree tensor complexifications are globally
    colourized, and the orthogonal reconstruction returns them.  For a
    positive modulus the same equations are only evidence."""
    v = Verdict("B", evidence_only=(modulus != 0))
    base_cert = degree_of_reflection(table)
    t0 = tensor_complexify(table, modulus)
    v.clauses.append(
        Clause("complexification is globally colourized", is_globally_colourized(t0))
    )
    cert = degree_of_reflection(t0)
    expect = lcm(base_cert.value, modulus)
    v.clauses.append(
        Clause(
            f"degree certificate == {expect}",
            cert.value == expect,
            None if cert.value == expect else f"value {cert.value}",
        )
    )
    recon = tensor_complexify(orthogonal_part(t0), modulus)
    ok, wit = tables_equal_witness(recon, t0)
    v.clauses.append(Clause("orthogonal reconstruction round trip", ok, wit))
    return v


def verify_free_identity(table: FixTable, moduli=(2, 3)) -> Verdict:
    """Check C: glued free products agree with the free
    complexification for every listed modulus."""
    cert = degree_of_reflection(table)
    if cert.value == 1:
        raise NotApplicableError(
            "free complexification comparisons need a base of degree != 1"
        )
    v = Verdict("C")
    fc = free_complexify(table, 0)
    for l in moduli:
        glued = glue_table(free_product_table(table, l), table.report_cutoff)
        fc_l = free_complexify(table, l)
        ok, wit = tables_equal_witness(fc_l, fc)
        v.clauses.append(Clause(f"free complexification at l={l} matches l=0", ok, wit))
        ok, wit = _tables_equal_loose(glued, fc, table.report_cutoff)
        v.clauses.append(
            Clause(f"glued free product at l={l} matches the closure", ok, wit)
        )
    return v


def _tables_equal_loose(a: FixTable, b: FixTable, upto: int) -> tuple[bool, str | None]:
    for w in enumerate_words(upto):
        if a.space(w) != b.space(w):
            return False, w
    return True, None


def verify_alternating_characterization(table: FixTable) -> Verdict:
    """Check D: the zero-modulus free complexification is alternating
    and inversion invariant, and reconstruction recovers it."""
    v = Verdict("D")
    cert = degree_of_reflection(table)
    if cert.value == 1:
        raise NotApplicableError(
            "the characterization is checked on bases of degree != 1"
        )
    ft = free_complexify(table, 0)
    ok, wit = is_alternating_category(ft)
    v.clauses.append(Clause("free complexification is alternating", ok, wit))
    ok, wit = is_colour_inversion_invariant(ft)
    v.clauses.append(Clause("free complexification is inversion invariant", ok, wit))
    recon = free_complexify(orthogonal_part(ft), 0)
    ok, wit = tables_equal_witness(recon, ft)
    v.clauses.append(Clause("orthogonal reconstruction round trip", ok, wit))
    return v


def verify_ungluing_correspondence(table: FixTable) -> Verdict:
    """Check E: gluing after the canonical order-two ungluing returns
    the table."""
    v = Verdict("E")
    unglued = canonical_unglue_z2(table)
    back = glue_table(unglued, table.report_cutoff)
    ok, wit = _tables_equal_loose(back, table, table.report_cutoff)
    v.clauses.append(Clause("glue(canonical unglue) round trip", ok, wit))
    return v


VERIFIERS = {
    "A": verify_tensor_identity,
    "B": verify_global_colourization,
    "C": verify_free_identity,
    "D": verify_alternating_characterization,
    "E": verify_ungluing_correspondence,
}
