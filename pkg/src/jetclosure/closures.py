"""Jet closures of ideals and submodules, arc-closedness certificates,
jet-support membership, and the Gorenstein/Matlis reduction pipeline.

All computations happen at a finite jet level.  An ideal a of the local
algebra S/I is first replaced by a' = a + I + m^(level+1); the closure
at that level is then read off as the kernel of an exact linear system
over the coefficient field, with normal forms taken modulo the fiber
ideal of a' in the jet ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InfiniteDimensionalError,
    NotArtinianError,
    NotGorensteinError,
    NotProperError,
    PowersNotContainedError,
    RingMismatchError,
)
from .groebner import (
    DEGREVLEX,
    FreeModuleElement,
    Ideal,
    SubmodulePresentation,
    colon_ideal,
    ideal_sum,
    ideals_equal,
    intersect_ideals,
    module_standard_monomials,
    radical_member,
    standard_monomial_basis,
)
from .jets import fiber_ideal, hs_derivations
from .linalg import nullspace_basis
from .poly import Polynomial, RingContext


class LocalAlgebraPresentation:
    """A local algebra presented as (polynomial ring at the origin)/I."""

    def __init__(self, ring: RingContext, modulus: Ideal = None):
        if modulus is None:
            modulus = Ideal(ring, [])
        if modulus.ring != ring:
            raise RingMismatchError("modulus does not live in the presentation ring")
        for g in modulus.generators:
            if not ring.field_spec.is_zero(g.constant_term()):
                raise NotProperError("modulus generator has a nonzero constant term")
        self.ring = ring
        self.modulus = modulus

    def __repr__(self):
        return f"LocalAlgebraPresentation(vars={self.ring.variables}, modulus={self.modulus!r})"


def _monomials_of_degree(n: int, d: int):
    if n == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in _monomials_of_degree(n - 1, d - e):
            yield (e,) + rest


def maximal_ideal_power(ring: RingContext, d: int) -> list:
    """All monomials of total degree d, the generators of m^d."""
    return [ring.monomial(u) for u in _monomials_of_degree(ring.nvars, d)]


def _artinian_standard_basis(I: Ideal):
    """Standard monomials of an m-primary ideal; NotArtinian otherwise."""
    try:
        return standard_monomial_basis(I)
    except InfiniteDimensionalError as exc:
        raise NotArtinianError("the modulus is not m-primary") from exc


def _check_proper(P: LocalAlgebraPresentation, a: Ideal) -> None:
    if a.ring != P.ring:
        raise RingMismatchError("ideal does not live in the presentation ring")
    for g in a.generators:
        if not P.ring.field_spec.is_zero(g.constant_term()):
            raise NotProperError("ideal plus modulus contains a unit")


def _primary_replacement(P: LocalAlgebraPresentation, a: Ideal, level: int) -> Ideal:
    """a + I + m^(level+1); jet closure at this level is unchanged."""
    extra = maximal_ideal_power(P.ring, level + 1)
    return Ideal(P.ring, a.generators + P.modulus.generators + tuple(extra))


@dataclass
class ClosureReport:
    """The level-``level`` jet closure of ``ideal`` in the presentation."""

    presentation: LocalAlgebraPresentation
    ideal: Ideal
    level: int
    replacement: Ideal  # a' = a + I + m^(level+1)
    closure: Ideal  # generated by replacement plus kernel elements
    closure_generators: list  # reduced degrevlex basis of the closure
    kernel_basis: list  # k-basis of closure/replacement, as polynomials
    dim_quotient: int  # colength of a'
    dim_closure: int  # k-dimension of the closure's image mod a'


def jet_closure(P: LocalAlgebraPresentation, a: Ideal, level: int) -> ClosureReport:
    """Compute the level-``level`` jet closure of a (with the modulus folded in).

    The kernel condition is linear over the coefficient field: f (taken
    modulo a') lies in the closure iff every derivation D_i(f), i up to
    the level, reduces to zero against the fiber ideal of a'.
    """
    _check_proper(P, a)
    ring = P.ring
    fld = ring.field_spec
    aprime = _primary_replacement(P, a, level)
    sm = standard_monomial_basis(aprime)
    basis = fiber_ideal(aprime, level).groebner_basis(DEGREVLEX)

    columns = sorted(sm.monomials, key=DEGREVLEX.key, reverse=True)
    images = []
    row_keys = set()
    for u in columns:
        entry = {}
        for i, d in enumerate(hs_derivations(ring.monomial(u), level)):
            nf = basis.normal_form(d)
            for w, c in nf.terms.items():
                entry[(i, w)] = c
                row_keys.add((i, w))
        images.append(entry)
    ordered_rows = sorted(row_keys, key=lambda iw: (iw[0], DEGREVLEX.key(iw[1])))
    matrix = [[img.get(rk, fld.zero()) for img in images] for rk in ordered_rows]
    kernel_vectors = nullspace_basis(matrix, len(columns), fld)

    kernel_polys = []
    for vec in kernel_vectors:
        p = ring.zero()
        for coeff, u in zip(vec, columns):
            if not fld.is_zero(coeff):
                p = p + ring.monomial(u, coeff)
        kernel_polys.append(p)

    closure = Ideal(ring, aprime.generators + tuple(kernel_polys))
    return ClosureReport(
        presentation=P,
        ideal=a,
        level=level,
        replacement=aprime,
        closure=closure,
        closure_generators=list(closure.groebner_basis(DEGREVLEX)),
        kernel_basis=kernel_polys,
        dim_quotient=sm.colength,
        dim_closure=len(kernel_polys),
    )


def cumulative_closure_chain(P: LocalAlgebraPresentation, a: Ideal, max_level: int) -> list:
    """C_0, ..., C_max_level with C_l the intersection of closures up to l."""
    chain = []
    current = None
    for level in range(max_level + 1):
        closure = jet_closure(P, a, level).closure
        current = closure if current is None else intersect_ideals(current, closure)
        chain.append(current)
    return chain


@dataclass
class CertificateResult:
    """Outcome of the finite-level arc-closedness certificate.

    ``certified`` soundly implies the arc closure equals the ideal; a
    negative answer implies nothing (non-m-primary ideals typically
    never certify at a finite level).
    """

    certified: bool
    level: int  # least certifying level, or None
    max_level: int
    chain: list  # cumulative closures, one Ideal per level computed

    def __bool__(self):
        return self.certified


def certify_arc_closed(P: LocalAlgebraPresentation, a: Ideal, max_level: int) -> CertificateResult:
    _check_proper(P, a)
    target = ideal_sum(a, P.modulus)
    chain = []
    current = None
    for level in range(max_level + 1):
        closure = jet_closure(P, a, level).closure
        current = closure if current is None else intersect_ideals(current, closure)
        chain.append(current)
        if ideals_equal(current, target):
            return CertificateResult(True, level, max_level, chain)
    return CertificateResult(False, None, max_level, chain)


def jsc_membership(P: LocalAlgebraPresentation, a: Ideal, f: Polynomial, level: int) -> bool:
    """Membership of f in the level-``level`` jet support closure of a.

    Decided per element: every derivation of f must lie in the radical
    of the fiber ideal of a + I + m^(level+1).
    """
    _check_proper(P, a)
    if f.ring != P.ring:
        raise RingMismatchError("element does not live in the presentation ring")
    J = fiber_ideal(_primary_replacement(P, a, level), level)
    return all(radical_member(d, J) for d in hs_derivations(f, level))


# ---------------------------------------------------------------------
# socle, Gorenstein detection, Matlis embedding
# ---------------------------------------------------------------------


@dataclass
class SocleReport:
    basis: list  # polynomials spanning the socle, smallest leading term first
    gorenstein: bool
    colength: int


def socle_and_gorenstein(P: LocalAlgebraPresentation) -> SocleReport:
    """Socle of the Artinian quotient and the Gorenstein flag.

    The socle is the kernel of v -> (x_1 v, ..., x_n v) on the standard
    monomial basis; the quotient is Gorenstein exactly when it is
    one-dimensional.
    """
    ring = P.ring
    fld = ring.field_spec
    sm = _artinian_standard_basis(P.modulus)
    basis = P.modulus.groebner_basis(DEGREVLEX)
    columns = sorted(sm.monomials, key=DEGREVLEX.key, reverse=True)
    images = []
    row_keys = set()
    for u in columns:
        entry = {}
        for j in range(ring.nvars):
            nf = basis.normal_form(ring.variable(j) * ring.monomial(u))
            for w, c in nf.terms.items():
                entry[(j, w)] = c
                row_keys.add((j, w))
        images.append(entry)
    ordered_rows = sorted(row_keys, key=lambda jw: (jw[0], DEGREVLEX.key(jw[1])))
    matrix = [[img.get(rk, fld.zero()) for img in images] for rk in ordered_rows]
    kernel = nullspace_basis(matrix, len(columns), fld)
    polys = []
    for vec in kernel:
        p = ring.zero()
        for coeff, u in zip(vec, columns):
            if not fld.is_zero(coeff):
                p = p + ring.monomial(u, coeff)
        polys.append(p)
    polys.sort(key=lambda p: DEGREVLEX.key(p.leading_term(DEGREVLEX)[0]))
    return SocleReport(basis=polys, gorenstein=len(polys) == 1, colength=sm.colength)


@dataclass
class MatlisEmbedding:
    """A verified module embedding of S/I into S/m_N, 1 -> witness."""

    power: int
    witness: Polynomial
    colon: Ideal  # (m_N : I)
    quotient_colength: int  # length of S/I
    colon_quotient_dim: int  # dim of (m_N : I)/m_N, must match
    images: list  # (standard monomial, its image in S/m_N) pairs


def matlis_embedding(P: LocalAlgebraPresentation, power: int) -> MatlisEmbedding:
    """Embed the Gorenstein quotient S/I into S/(x_1^N, ..., x_n^N).

    The witness w generates (m_N : I) modulo m_N; the embedding sends
    the class of f to the class of f*w.  Injectivity is certified by
    the exact count colength(I) = dim (m_N : I)/m_N.
    """
    ring = P.ring
    I = P.modulus
    soc = socle_and_gorenstein(P)
    if not soc.gorenstein:
        raise NotGorensteinError("the quotient is not Gorenstein")
    I_basis = I.groebner_basis(DEGREVLEX)
    for j, name in enumerate(ring.variables):
        if not I_basis.contains(ring.variable(j) ** power):
            raise PowersNotContainedError(f"{name}^{power} does not lie in the modulus")
    m_n = Ideal(ring, [ring.variable(j) ** power for j in range(ring.nvars)])
    colon = colon_ideal(m_n, I)
    m_n_basis = m_n.groebner_basis(DEGREVLEX)
    candidates = [g for g in colon.groebner_basis(DEGREVLEX) if not m_n_basis.contains(g)]
    witness = None
    for w in candidates:
        if ideals_equal(Ideal(ring, (w,) + m_n.generators), colon):
            witness = w
            break
    if witness is None:
        raise ArithmeticError("no single witness generates the colon ideal modulo the powers")
    colon_dim = standard_monomial_basis(m_n).colength - standard_monomial_basis(colon).colength
    if colon_dim != soc.colength:
        raise ArithmeticError("witness verification failed: dimension mismatch")
    images = []
    for u in standard_monomial_basis(I).monomials:
        b = ring.monomial(u)
        images.append((b, m_n_basis.normal_form(b * witness)))
    return MatlisEmbedding(
        power=power,
        witness=witness,
        colon=colon,
        quotient_colength=soc.colength,
        colon_quotient_dim=colon_dim,
        images=images,
    )


def smallest_containing_power(P: LocalAlgebraPresentation) -> int:
    """Least N with every pure power x_j^N inside the modulus."""
    basis = P.modulus.groebner_basis(DEGREVLEX)
    bound = _artinian_standard_basis(P.modulus).colength + 1
    for n in range(1, bound + 1):
        if all(basis.contains(P.ring.variable(j) ** n) for j in range(P.ring.nvars)):
            return n
    raise ArithmeticError("no pure power bound found below the length bound")


@dataclass
class WalkthroughStage:
    modulus: Ideal
    colength: int
    socle_basis: list
    gorenstein: bool
    socle_generator_used: Polynomial  # None at the Gorenstein stage
    certificate: CertificateResult


@dataclass
class GorensteinWalkthrough:
    stages: list
    embedding: MatlisEmbedding


def gorenstein_walkthrough(P: LocalAlgebraPresentation, max_level: int) -> GorensteinWalkthrough:
    """Reduce an Artinian quotient to a Gorenstein one by socle quotients.

    Each step quotients by a one-dimensional socle ideal (g), dropping
    the length by exactly one, until the socle is one-dimensional; the
    Gorenstein stage gets its Matlis embedding.  Every stage carries an
    arc-closedness certificate for the zero ideal up to ``max_level``.
    """
    ring = P.ring
    stages = []
    current = P
    while True:
        soc = socle_and_gorenstein(current)
        cert = certify_arc_closed(current, Ideal(ring, []), max_level)
        if soc.gorenstein:
            stages.append(
                WalkthroughStage(current.modulus, soc.colength, soc.basis, True, None, cert)
            )
            break
        g = soc.basis[0]  # smallest leading term: the canonical reduction step
        stages.append(
            WalkthroughStage(current.modulus, soc.colength, soc.basis, False, g, cert)
        )
        next_modulus = Ideal(ring, current.modulus.generators + (g,))
        next_pres = LocalAlgebraPresentation(ring, next_modulus)
        if standard_monomial_basis(next_modulus).colength != soc.colength - 1:
            raise ArithmeticError("socle quotient did not drop the length by one")
        current = next_pres
    embedding = matlis_embedding(current, smallest_containing_power(current))
    return GorensteinWalkthrough(stages=stages, embedding=embedding)


# ---------------------------------------------------------------------
# module jet closures
# ---------------------------------------------------------------------


class ModulePresentation:
    """A finite module over an Artinian base: B^rank modulo relations.

    Relations are given over the ambient polynomial ring; the base
    modulus automatically annihilates every component.  An optional
    submodule is a list of elements to be closed (the closure of N is
    computed in M/N).
    """

    def __init__(
        self,
        base: LocalAlgebraPresentation,
        rank: int,
        relations=(),
        submodule=None,
    ):
        if rank < 1:
            raise ValueError("module rank must be at least 1")
        self.base = base
        self.rank = rank
        rels = []
        for v in relations:
            if v.ring != base.ring or v.rank != rank:
                raise RingMismatchError("relation does not match the module")
            rels.append(v)
        self.relations = tuple(rels)
        subs = []
        for v in submodule or ():
            if v.ring != base.ring or v.rank != rank:
                raise RingMismatchError("submodule element does not match the module")
            subs.append(v)
        self.submodule = tuple(subs)

    def working_relations(self) -> list:
        """Relations of M/N over the ambient ring, base ideal included."""
        ring = self.base.ring
        rels = list(self.relations) + list(self.submodule)
        for g in self.base.modulus.generators:
            for c in range(self.rank):
                comps = [ring.zero()] * self.rank
                comps[c] = g
                rels.append(FreeModuleElement(ring, comps))
        return rels


@dataclass
class ModuleClosureReport:
    presentation: ModulePresentation
    level: int
    standard_basis: list  # (component, exponents) k-basis of M/N
    kernel_basis: list  # FreeModuleElements spanning the closure of 0 in M/N
    dim_module: int
    dim_kernel: int


def module_jet_closure(MP: ModulePresentation, level: int) -> ModuleClosureReport:
    """Level-``level`` jet closure of the submodule N inside M.

    Works in M/N: the module is tensored with the level-``level`` jet
    fiber of the base, presented over the jet ring with one block of
    coordinates per t-power, and the kernel of the induced k-linear map
    on a monomial basis of M/N is returned.
    """
    ring = MP.base.ring
    fld = ring.field_spec
    rank = MP.rank
    _artinian_standard_basis(MP.base.modulus)  # NotArtinian check on the base

    rels = MP.working_relations()
    pres = SubmodulePresentation(ring, rank, rels)
    sm = module_standard_monomials(pres)

    J = fiber_ideal(MP.base.modulus, level)
    jet_ctx = J.ring
    big_rank = rank * (level + 1)

    def big_index(component: int, t_power: int) -> int:
        return t_power * rank + component

    zero_vec = [jet_ctx.zero()] * big_rank
    big_rels = []
    for g in J.groebner_basis(DEGREVLEX):
        for idx in range(big_rank):
            comps = list(zero_vec)
            comps[idx] = g
            big_rels.append(FreeModuleElement(jet_ctx, comps))
    module_rels = list(MP.relations) + list(MP.submodule)
    for v in module_rels:
        jets = [hs_derivations(comp, level) for comp in v.components]
        for shift in range(level + 1):
            comps = list(zero_vec)
            for c in range(rank):
                for j in range(shift, level + 1):
                    comps[big_index(c, j)] = comps[big_index(c, j)] + jets[c][j - shift]
            vec = FreeModuleElement(jet_ctx, comps)
            if not vec.is_zero():
                big_rels.append(vec)
    big_gb = SubmodulePresentation(jet_ctx, big_rank, big_rels).groebner_basis(DEGREVLEX)

    columns = sorted(sm, key=lambda cu: (cu[0], DEGREVLEX.key(cu[1])), reverse=True)
    images = []
    row_keys = set()
    for comp, u in columns:
        jets = hs_derivations(ring.monomial(u), level)
        comps = list(zero_vec)
        for j in range(level + 1):
            comps[big_index(comp, j)] = jets[j]
        nf = big_gb.normal_form(FreeModuleElement(jet_ctx, comps))
        entry = {}
        for key, c in nf._terms().items():
            entry[key] = c
            row_keys.add(key)
        images.append(entry)
    ordered_rows = sorted(row_keys, key=lambda cu: (cu[0], DEGREVLEX.key(cu[1])))
    matrix = [[img.get(rk, fld.zero()) for img in images] for rk in ordered_rows]
    kernel_vectors = nullspace_basis(matrix, len(columns), fld)

    kernel = []
    for vec in kernel_vectors:
        comps = [ring.zero()] * rank
        for coeff, (comp, u) in zip(vec, columns):
            if not fld.is_zero(coeff):
                comps[comp] = comps[comp] + ring.monomial(u, coeff)
        kernel.append(FreeModuleElement(ring, comps))
    return ModuleClosureReport(
        presentation=MP,
        level=level,
        standard_basis=sm,
        kernel_basis=kernel,
        dim_module=len(sm),
        dim_kernel=len(kernel),
    )
