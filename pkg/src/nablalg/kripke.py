"""Kripke frames and the two functors linking them to distributive algebras.

A frame is a poset of worlds with a second relation R compatible with the
order (le ; R ; le stays inside R).  A frame is normal when R is
represented by an order-preserving witness pi via (x, y) in R iff
x <= pi(y); since that forces pi(y) to be the maximum of the R-column of
y, column maxima are the only candidates and witness detection is exact.

``upset_algebra`` sends a frame to the algebra of its upsets with

    nabla(U) = {x : some y in U has (y, x) in R}
    arrow(U, V) = {x : every R-successor of x inside U lies in V}

and ``prime_frame`` sends a distributive algebra to its prime filters
ordered by inclusion, with (P, Q) in R iff the nabla image of P lands in
Q; the characterization is cross-checked on every call against the
definitional form (arrow(a, b) in P and a in Q force b in Q).  The two
directions compose into the finite representation: the membership map
``canonical_frame_embedding`` is an isomorphism on finite distributive
carriers.  Pullbacks of surjective frame morphisms implement the
amalgamation of embedding spans.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraMorphism,
    NablaAlgebra,
    build_algebra,
    check_morphism,
    classify,
    compose_morphisms,
    tables_equal,
)
from .errors import (
    FlagMismatch,
    InvalidMorphism,
    NotCompatible,
    NotDistributive,
    NotKripkeMorphism,
    NotNormal,
    NotSurjective,
    ShapeError,
    ensure,
)
from .lattice import all_upsets, prime_filters, upset_lattice, validate_partial_order

FRAME_FLAGS = ("N", "R", "L", "Fa", "Fu")


class KripkeFrame:
    """Worlds 0..n-1 with order ``leq`` and compatible relation ``r``."""

    __slots__ = ("n", "leq", "r", "pi", "pi_failure", "_profile")

    def __init__(self, leq, r, pi, pi_failure):
        self.n = int(leq.shape[0])
        leq.setflags(write=False)
        r.setflags(write=False)
        self.leq = leq
        self.r = r
        self.pi = pi
        self.pi_failure = pi_failure
        self._profile = None

    def __repr__(self):
        return f"KripkeFrame(n={self.n})"


def build_frame(leq, r) -> KripkeFrame:
    """Validate compatibility and detect the normality witness when it exists."""
    order = validate_partial_order(leq)
    rel = np.asarray(r, dtype=bool)
    if rel.shape != order.shape:
        raise ShapeError("order and relation must have the same shape")
    n = order.shape[0]
    closed = (order.astype(np.int64) @ rel.astype(np.int64) @ order.astype(np.int64)) > 0
    bad = closed & ~rel
    if bad.any():
        kp, lp = (int(v) for v in np.argwhere(bad)[0])
        # recover a concrete witness chain k' <= k, (k, l) in R, l <= l'
        witness = None
        for k in range(n):
            if not order[kp, k]:
                continue
            for l in range(n):
                if rel[k, l] and order[l, lp]:
                    witness = (kp, k, l, lp)
                    break
            if witness:
                break
        raise NotCompatible(f"relation not compatible with order at {witness}",
                            witness=witness)
    pi, failure = _detect_pi(order, rel)
    return KripkeFrame(order.copy(), rel.copy(), pi, failure)


def _detect_pi(order: np.ndarray, rel: np.ndarray):
    n = order.shape[0]
    pi = np.zeros(n, dtype=np.int64)
    for y in range(n):
        col = np.flatnonzero(rel[:, y])
        if len(col) == 0:
            return None, ("empty-column", (y,))
        maxes = [m for m in col if order[col, m].all()]
        if not maxes:
            return None, ("no-column-maximum", (y,))
        pi[y] = maxes[0]
    mono = ~order | order[pi][:, pi]
    if not mono.all():
        u, v = (int(w) for w in np.argwhere(~mono)[0])
        return None, ("witness-not-order-preserving", (u, v))
    repro = rel == order[:, pi]
    if not repro.all():
        x, y = (int(w) for w in np.argwhere(~repro)[0])
        return None, ("witness-does-not-reproduce-relation", (x, y))
    pi.setflags(write=False)
    return pi, None


@dataclass(frozen=True)
class FrameProfile:
    N: bool
    R: bool
    L: bool
    Fa: bool
    Fu: bool
    pi: object = field(compare=False, default=None)
    witnesses: dict = field(compare=False, default_factory=dict)

    def flags(self) -> frozenset:
        return frozenset(f for f in FRAME_FLAGS if getattr(self, f))

    def has(self, *names) -> bool:
        return all(getattr(self, f) for f in names)

    def to_json(self) -> dict:
        return {
            "kind": "frame-profile",
            "flags": {f: bool(getattr(self, f)) for f in FRAME_FLAGS},
            "pi": None if self.pi is None else [int(v) for v in self.pi],
        }


def frame_profile(frame: KripkeFrame) -> FrameProfile:
    """Flags by their defining clauses; on normal frames the witness-based
    restatements are evaluated too and must agree."""
    if frame._profile is not None:
        return frame._profile
    n, leq, r = frame.n, frame.leq, frame.r
    witnesses = {}

    n_flag = frame.pi is not None
    if not n_flag:
        witnesses["N"] = frame.pi_failure

    r_mask = ~leq | r
    r_flag = bool(r_mask.all())
    if not r_flag:
        witnesses["R"] = tuple(int(v) for v in np.argwhere(~r_mask)[0])

    l_mask = ~r | leq
    l_flag = bool(l_mask.all())
    if not l_flag:
        witnesses["L"] = tuple(int(v) for v in np.argwhere(~l_mask)[0])

    fa_flag = True
    for x in range(n):
        ok = any(
            r[y, x] and all(not r[y, z] or leq[x, z] for z in range(n))
            for y in range(n)
        )
        if not ok:
            fa_flag = False
            witnesses["Fa"] = (x,)
            break

    fu_flag = True
    for x in range(n):
        ok = any(
            r[x, y] and all(not r[z, y] or leq[z, x] for z in range(n))
            for y in range(n)
        )
        if not ok:
            fu_flag = False
            witnesses["Fu"] = (x,)
            break

    profile = FrameProfile(N=n_flag, R=r_flag, L=l_flag, Fa=fa_flag, Fu=fu_flag,
                           pi=frame.pi, witnesses=witnesses)
    if n_flag:
        pi = frame.pi
        idx = np.arange(n)
        ensure(r_flag == bool(leq[idx, pi].all()),
               "reflexivity must match w <= pi(w) on normal frames")
        ensure(l_flag == bool(leq[pi, idx].all()),
               "sub-order must match pi(w) <= w on normal frames")
        emb = bool((~leq[pi][:, pi] | leq).all())
        ensure(fa_flag == emb, "faithfulness must match pi being an order embedding")
        ensure(fu_flag == (len(set(int(v) for v in pi)) == n),
               "fullness must match pi being surjective")
    frame._profile = profile
    return profile


@dataclass(frozen=True)
class FrameMorphism:
    """World map between frames; ``heyting`` claims the order-lifting clause."""

    source: KripkeFrame = field(compare=False, repr=False)
    target: KripkeFrame = field(compare=False, repr=False)
    map: tuple = ()
    heyting: bool = False


@dataclass(frozen=True)
class FrameMorphismReport:
    ok: bool
    violations: tuple
    surjective: bool
    heyting_ok: bool

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "surjective": self.surjective,
            "heyting_ok": self.heyting_ok,
        }


def check_frame_morphism(m: FrameMorphism) -> FrameMorphismReport:
    """Direct quantifier evaluation of the morphism clauses.

    When both frames are normal and the map is order-preserving, the
    witness characterization (pi commutes with the map and successor
    preimages match) is evaluated independently and required to agree with
    the clause-by-clause verdict.
    """
    from .algebra import Violation

    src, tgt = m.source, m.target
    f = np.asarray(m.map, dtype=np.int64)
    if f.shape != (src.n,):
        raise ShapeError(f"map must have length {src.n}")
    if src.n and (f.min() < 0 or f.max() >= tgt.n):
        raise ShapeError("map entries out of range")
    violations = []

    mono = ~src.leq | tgt.leq[f][:, f]
    monotone = bool(mono.all())
    if not monotone:
        violations.append(Violation("monotone", tuple(int(v) for v in np.argwhere(~mono)[0])))

    fwd = ~src.r | tgt.r[f][:, f]
    forward = bool(fwd.all())
    if not forward:
        violations.append(Violation("preserves-relation",
                                    tuple(int(v) for v in np.argwhere(~fwd)[0])))

    succ = True
    for k in range(src.n):
        for lp in range(tgt.n):
            if tgt.r[f[k], lp] and not any(
                src.r[k, l] and f[l] == lp for l in range(src.n)
            ):
                succ = False
                violations.append(Violation("lift-successors", (k, lp)))
                break
        if not succ:
            break

    pred = True
    for k in range(src.n):
        for lp in range(tgt.n):
            if tgt.r[lp, f[k]] and not any(
                src.r[l, k] and tgt.leq[lp, f[l]] for l in range(src.n)
            ):
                pred = False
                violations.append(Violation("lift-predecessors", (k, lp)))
                break
        if not pred:
            break

    clauses_ok = monotone and forward and succ and pred

    heyting_ok = True
    if m.heyting:
        for k in range(src.n):
            for lp in range(tgt.n):
                if tgt.leq[f[k], lp] and not any(
                    src.leq[k, l] and f[l] == lp for l in range(src.n)
                ):
                    heyting_ok = False
                    violations.append(Violation("lift-order", (k, lp)))
                    break
            if not heyting_ok:
                break

    if monotone and src.pi is not None and tgt.pi is not None:
        commutes = bool((f[src.pi] == tgt.pi[f]).all())
        preimages = all(
            {lp for lp in range(tgt.n) if tgt.leq[f[k], tgt.pi[lp]]}
            == {int(f[l]) for l in range(src.n) if src.leq[k, src.pi[l]]}
            for k in range(src.n)
        )
        ensure((commutes and preimages) == (forward and succ and pred),
               "witness characterization of frame morphisms disagrees with the clauses")

    surjective = len(set(int(v) for v in f)) == tgt.n
    ok = clauses_ok and (heyting_ok or not m.heyting)
    return FrameMorphismReport(ok=ok, violations=tuple(violations),
                               surjective=surjective, heyting_ok=heyting_ok)


def compose_frame_morphisms(outer: FrameMorphism, inner: FrameMorphism) -> FrameMorphism:
    ensure(frames_equal(inner.target, outer.source),
           "composition needs matching middle frame")
    comp = tuple(int(outer.map[v]) for v in inner.map)
    return FrameMorphism(source=inner.source, target=outer.target, map=comp,
                         heyting=inner.heyting and outer.heyting)


def frames_equal(a: KripkeFrame, b: KripkeFrame) -> bool:
    return a.n == b.n and (a.leq == b.leq).all() and (a.r == b.r).all()


# --- frames to algebras -------------------------------------------------------


def upset_algebra(frame: KripkeFrame) -> NablaAlgebra:
    """Algebra of upsets; always carries the Heyting table, and every frame
    flag transfers to the corresponding algebra flag (checked)."""
    fam = upset_lattice(frame.leq)
    ups = fam.upsets
    index = {u: i for i, u in enumerate(ups)}
    k = len(ups)
    nabla = np.zeros(k, dtype=np.int64)
    arrow = np.zeros((k, k), dtype=np.int64)
    for i, u in enumerate(ups):
        img = frozenset(
            x for x in range(frame.n) if any(frame.r[y, x] for y in u)
        )
        ensure(img in index, "relation image of an upset must be an upset")
        nabla[i] = index[img]
    for i, u in enumerate(ups):
        for j, v in enumerate(ups):
            guard = frozenset(
                x for x in range(frame.n)
                if all(not frame.r[x, y] or y not in u or y in v
                       for y in range(frame.n))
            )
            ensure(guard in index, "arrow of upsets must be an upset")
            arrow[i, j] = index[guard]
    alg = build_algebra(fam.lattice, nabla, arrow)
    profile = classify(alg)
    ensure(profile.H, "upset algebras always carry the Heyting structure")
    fprof = frame_profile(frame)
    for flag in FRAME_FLAGS:
        if getattr(fprof, flag):
            ensure(getattr(profile, flag),
                   f"frame flag {flag} must transfer to the upset algebra")
    return alg


def inverse_image_morphism(f: FrameMorphism) -> AlgebraMorphism:
    """Preimage map on upsets; contravariant, embedding when f is onto."""
    rep = check_frame_morphism(f)
    if not rep.ok:
        raise NotKripkeMorphism("preimages only respect the pair along a frame morphism",
                                witness=rep.violations[0].witness if rep.violations else None)
    src_alg = upset_algebra(f.target)
    tgt_alg = upset_algebra(f.source)
    ups_target = all_upsets(f.target.leq)
    ups_source = all_upsets(f.source.leq)
    index = {u: i for i, u in enumerate(ups_source)}
    fmap = np.asarray(f.map)
    out = []
    for u in ups_target:
        pre = frozenset(int(x) for x in range(f.source.n) if int(fmap[x]) in u)
        ensure(pre in index, "preimage of an upset must be an upset")
        out.append(index[pre])
    morphism = AlgebraMorphism(source=src_alg, target=tgt_alg, map=tuple(out),
                               preserves_heyting=bool(f.heyting and rep.heyting_ok))
    mrep = check_morphism(morphism)
    ensure(mrep.ok, "preimage map must be an algebra morphism")
    if rep.surjective:
        ensure(mrep.injective, "preimages along a surjection must be injective")
    return morphism


# --- algebras to frames -------------------------------------------------------


def prime_frame(alg: NablaAlgebra) -> KripkeFrame:
    """Prime filters under inclusion with the image-containment relation.

    The relation is computed as "nabla image of P inside Q" and
    cross-checked against the definitional detachment form; a mismatch is a
    hard failure, not a report.
    """
    if not classify(alg).D:
        raise NotDistributive("prime filter frames need a distributive carrier")
    primes = prime_filters(alg.lat)
    k = len(primes)
    leq = np.zeros((k, k), dtype=bool)
    rel = np.zeros((k, k), dtype=bool)
    for i, p in enumerate(primes):
        for j, q in enumerate(primes):
            leq[i, j] = p <= q
            rel[i, j] = all(int(alg.nabla[x]) in q for x in p)
            definitional = all(
                b in q
                for a in range(alg.n) for b in range(alg.n)
                if int(alg.arrow[a, b]) in p and a in q
            )
            ensure(bool(rel[i, j]) == definitional,
                   "relation characterizations disagree on prime filters")
    frame = build_frame(leq, rel)
    aprof = classify(alg)
    fprof = frame_profile(frame)
    for flag in FRAME_FLAGS:
        if getattr(aprof, flag):
            ensure(getattr(fprof, flag),
                   f"algebra flag {flag} must transfer to the prime frame")
    return frame


def canonical_frame_embedding(alg: NablaAlgebra) -> AlgebraMorphism:
    """Membership map into the upsets of the prime frame; an isomorphism here
    because every carrier is finite."""
    frame = prime_frame(alg)
    target = upset_algebra(frame)
    primes = prime_filters(alg.lat)
    ups = all_upsets(frame.leq)
    index = {u: i for i, u in enumerate(ups)}
    out = []
    for a in range(alg.n):
        u = frozenset(i for i, p in enumerate(primes) if a in p)
        ensure(u in index, "membership image must be an upset of the prime frame")
        out.append(index[u])
    morphism = AlgebraMorphism(source=alg, target=target, map=tuple(out),
                               preserves_heyting=classify(alg).H)
    rep = check_morphism(morphism)
    ensure(rep.ok and rep.injective, "membership map must be an embedding")
    ensure(alg.n == target.n, "membership map must be onto for finite carriers")
    return morphism


def prime_inverse_morphism(f: AlgebraMorphism) -> FrameMorphism:
    """Preimage map on prime filters; onto when f is injective."""
    for side in (f.source, f.target):
        if not classify(side).D:
            raise NotDistributive("prime preimages need distributive carriers")
    rep = check_morphism(f)
    if not rep.ok:
        raise InvalidMorphism("prime preimages need a validated algebra morphism")
    src_frame = prime_frame(f.target)
    tgt_frame = prime_frame(f.source)
    primes_b = prime_filters(f.target.lat)
    primes_a = prime_filters(f.source.lat)
    index = {p: i for i, p in enumerate(primes_a)}
    out = []
    for q in primes_b:
        pre = frozenset(x for x in range(f.source.n) if int(f.map[x]) in q)
        ensure(pre in index, "preimage of a prime filter must be prime")
        out.append(index[pre])
    fm = FrameMorphism(source=src_frame, target=tgt_frame, map=tuple(out),
                       heyting=bool(f.preserves_heyting))
    frep = check_frame_morphism(fm)
    ensure(frep.ok, "prime preimage map must be a frame morphism")
    if rep.injective:
        ensure(frep.surjective, "prime preimages along an embedding must be onto")
    return fm


# --- amalgamation -------------------------------------------------------------


AMALGAMATION_FLAGS = frozenset({"R", "L", "Fa"})


def amalgamate_frames(k0: KripkeFrame, k1: KripkeFrame, k2: KripkeFrame,
                      f: FrameMorphism, g: FrameMorphism, flags=None):
    """Pullback of two surjective frame morphisms onto a shared base.

    Worlds are the pairs agreeing on the base, order and relation are
    componentwise, and the normality witness is the pair of witnesses.
    Flags in the requested class (a subset of {R, L, Fa}; fullness is
    rejected up front) transfer to the pullback, and both projections are
    surjective frame morphisms.
    """
    profiles = [frame_profile(k) for k in (k0, k1, k2)]
    for p in profiles:
        if not p.N:
            raise NotNormal("amalgamation needs normal frames")
    if flags is None:
        shared = profiles[0].flags() & profiles[1].flags() & profiles[2].flags()
        cls = frozenset(shared) & AMALGAMATION_FLAGS
    else:
        cls = frozenset(flags)
        if not cls <= AMALGAMATION_FLAGS:
            raise FlagMismatch(
                f"flag class must lie inside {sorted(AMALGAMATION_FLAGS)}, got {sorted(cls)}")
        for p in profiles:
            if not cls <= p.flags():
                raise FlagMismatch("every frame must carry the requested flag class")
    for name, m, tgt in (("first", f, k1), ("second", g, k2)):
        if not frames_equal(m.target, k0):
            raise InvalidMorphism(f"{name} leg must land in the shared base")
        if not frames_equal(m.source, tgt):
            raise InvalidMorphism(f"{name} leg has the wrong source")
        rep = check_frame_morphism(m)
        if not rep.ok:
            raise InvalidMorphism(f"{name} leg is not a frame morphism")
        if not rep.surjective:
            raise NotSurjective(f"{name} leg must be surjective")

    worlds = [(y, z) for y in range(k1.n) for z in range(k2.n)
              if f.map[y] == g.map[z]]
    k = len(worlds)
    leq = np.zeros((k, k), dtype=bool)
    rel = np.zeros((k, k), dtype=bool)
    for i, (y, z) in enumerate(worlds):
        for j, (yp, zp) in enumerate(worlds):
            leq[i, j] = k1.leq[y, yp] and k2.leq[z, zp]
            rel[i, j] = k1.r[y, yp] and k2.r[z, zp]
    pullback = build_frame(leq, rel)
    pprof = frame_profile(pullback)
    ensure(pprof.N, "pullback of normal frames must be normal")
    windex = {w: i for i, w in enumerate(worlds)}
    expected_pi = [windex[(int(k1.pi[y]), int(k2.pi[z]))] for (y, z) in worlds]
    ensure(list(pullback.pi) == expected_pi,
           "pullback witness must be the componentwise witness pair")
    ensure(cls <= pprof.flags(), "pullback must inherit the shared flag class")

    heyting = f.heyting and g.heyting
    p = FrameMorphism(source=pullback, target=k1,
                      map=tuple(y for y, _ in worlds), heyting=heyting)
    q = FrameMorphism(source=pullback, target=k2,
                      map=tuple(z for _, z in worlds), heyting=heyting)
    for name, proj in (("first", p), ("second", q)):
        rep = check_frame_morphism(proj)
        ensure(rep.ok, f"{name} projection must be a frame morphism")
        ensure(rep.surjective, f"{name} projection must be surjective")
    ensure(tuple(f.map[v] for v in p.map) == tuple(g.map[v] for v in q.map),
           "projections must commute over the base")
    return pullback, p, q


@dataclass(frozen=True)
class AmalgamationResult:
    b: NablaAlgebra
    g1: AlgebraMorphism
    g2: AlgebraMorphism
    frames: dict = field(compare=False, default_factory=dict)
    projections: tuple = field(compare=False, default=())


def amalgamate_algebras(a0: NablaAlgebra, a1: NablaAlgebra, a2: NablaAlgebra,
                        f1: AlgebraMorphism, f2: AlgebraMorphism,
                        flags=None, heyting: bool = False) -> AmalgamationResult:
    """Complete a span of embeddings to a commuting square of embeddings.

    Pipeline: prime frames of the three algebras, preimage morphisms of the
    two embeddings (surjective by the embedding/surjection exchange), frame
    pullback, upsets of the pullback, and composition with the membership
    embeddings.  Every stage re-validates its output; the final square is
    checked to commute exactly and to carry the shared flag class.
    """
    from .errors import NotEmbedding

    profiles = {}
    for name, alg in (("a0", a0), ("a1", a1), ("a2", a2)):
        profile = classify(alg)
        profiles[name] = profile
        if not profile.N:
            raise NotNormal(f"{name} must be normal")
        if not profile.D:
            raise NotDistributive(f"{name} must be distributive")
        if heyting and not profile.H:
            raise FlagMismatch(f"{name} must carry the Heyting structure")
    if flags is None:
        shared = profiles["a0"].flags() & profiles["a1"].flags() & profiles["a2"].flags()
        cls = frozenset(shared) & AMALGAMATION_FLAGS
    else:
        cls = frozenset(flags)
        if not cls <= AMALGAMATION_FLAGS:
            raise FlagMismatch(
                f"flag class must lie inside {sorted(AMALGAMATION_FLAGS)}, got {sorted(cls)}")
        for name, profile in profiles.items():
            if not cls <= profile.flags():
                raise FlagMismatch(f"{name} must carry the requested flag class")
    for name, m, tgt in (("f1", f1, a1), ("f2", f2, a2)):
        if not (tables_equal(m.source, a0) and tables_equal(m.target, tgt)):
            raise InvalidMorphism(f"{name} must map the shared algebra into its leg")
        rep = check_morphism(m)
        if not (rep.ok and rep.injective):
            raise NotEmbedding(f"{name} must be a validated embedding")
        if heyting and not (m.preserves_heyting and rep.heyting_checked):
            raise NotEmbedding(f"{name} must preserve the Heyting table")

    k0, k1, k2 = prime_frame(a0), prime_frame(a1), prime_frame(a2)
    pf1 = prime_inverse_morphism(f1)
    pf2 = prime_inverse_morphism(f2)
    pullback, p, q = amalgamate_frames(k0, k1, k2, pf1, pf2, flags=cls)

    up = inverse_image_morphism(p)
    uq = inverse_image_morphism(q)
    i1 = canonical_frame_embedding(a1)
    i2 = canonical_frame_embedding(a2)
    ensure(tables_equal(i1.target, up.source), "pipeline stage mismatch on the first leg")
    ensure(tables_equal(i2.target, uq.source), "pipeline stage mismatch on the second leg")
    g1 = compose_morphisms(up, i1)
    g2 = compose_morphisms(uq, i2)
    b = up.target

    for name, gm in (("g1", g1), ("g2", g2)):
        rep = check_morphism(gm)
        ensure(rep.ok and rep.injective, f"{name} must be an embedding")
        if heyting:
            ensure(rep.heyting_checked, f"{name} must preserve the Heyting table")
    ensure(tuple(g1.map[v] for v in f1.map) == tuple(g2.map[v] for v in f2.map),
           "the amalgamation square must commute")
    bprof = classify(b)
    ensure(bprof.has("N", "D"), "the amalgam must stay normal and distributive")
    ensure(cls <= bprof.flags(), "the amalgam must carry the shared flag class")
    return AmalgamationResult(
        b=b, g1=g1, g2=g2,
        frames={"k0": k0, "k1": k1, "k2": k2, "pullback": pullback},
        projections=(p, q),
    )
