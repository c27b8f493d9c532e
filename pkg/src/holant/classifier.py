"""Decision procedures for the tractability dichotomies.

Each ``check_*`` function evaluates the exceptional (tractable) conditions
of one dichotomy statement over a finite signature set and returns a
``Verdict``.  Conditions are evaluated in a fixed order with a short
circuit on the first one that holds; every condition that was evaluated
is kept in the verdict's ledger, so a refuted run shows the full audit
trail.

Outcome algebra.  A holding condition yields ``TractableFP`` or
``TractableFPNP`` together with a certificate that can be replayed from
scratch (``replay_certificate``).  When everything failed, the verdict is
``SharpPHard`` only if every condition was refuted by a decidable
predicate; if any condition rests on a basis-change search that merely
exhausted its candidate registry, the verdict is ``HardModuloSearch``
with those conditions listed as unresolved.  The searches are sound but
not complete, so exhaustion is never treated as a refutation.

The batteries shared by several checks live here as private helpers:
``_eo_battery`` (uniform triple-sum closure plus uniform pairing family
over balanced-support signatures) and the flip-world profile scans.
"""

from __future__ import annotations

from . import scalar as _sc
from .errors import NotEOSet, NotSingleWeighted, ParseError, UnsupportedD
from .scalar import DEFAULT_EPS
from .signature import Signature, delta, equality
from .transforms import Mat2, apply_holographic, hat
from .classes import (
    ClassReport, affine_basis_changes, candidate_matrices, class_membership,
    eo_pairing_class, eo_profile, exists3_class, in_A, in_A_d_r,
    in_L_local_affine, in_M_closure, in_P, in_T_closure, in_XM_closure,
    is_rebalancing, is_single_weighted, restrict_to_eo, to_eo_padding,
    transformable_search,
)

OUTCOMES = ("TractableFP", "TractableFPNP", "SharpPHard",
            "HardModuloSearch", "NotApplicable")


class ConditionReport:
    """One evaluated tractability condition.

    status is "holds", "refuted" or "exhausted"; the last one marks a
    sound-but-incomplete search that ran out of candidates.
    """

    __slots__ = ("label", "status", "detail", "certificate")

    def __init__(self, label: str, status: str, detail: str = "",
                 certificate: dict | None = None):
        if status not in ("holds", "refuted", "exhausted"):
            raise ParseError("unknown condition status %r" % status)
        self.label = label
        self.status = status
        self.detail = detail
        self.certificate = certificate

    def __bool__(self):
        return self.status == "holds"

    def __repr__(self):
        return "ConditionReport(%s: %s%s)" % (
            self.label, self.status,
            ", " + self.detail if self.detail else "")

    def to_json(self) -> dict:
        return {"label": self.label, "status": self.status,
                "detail": self.detail, "certificate": self.certificate}


class Verdict:
    """Outcome of a dichotomy check plus the per-condition ledger."""

    __slots__ = ("outcome", "case", "certificate", "conditions", "notes",
                 "reason")

    def __init__(self, outcome: str, case: str | None = None,
                 certificate: dict | None = None, conditions=(),
                 notes=(), reason: str = ""):
        if outcome not in OUTCOMES:
            raise ParseError("unknown outcome %r" % outcome)
        self.outcome = outcome
        self.case = case
        self.certificate = certificate
        self.conditions = list(conditions)
        self.notes = list(notes)
        self.reason = reason

    @property
    def tractable(self) -> bool:
        return self.outcome in ("TractableFP", "TractableFPNP")

    def __repr__(self):
        tail = self.case if self.case else self.reason
        return "Verdict(%s%s)" % (self.outcome,
                                  ", " + tail if tail else "")

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "case": self.case,
                "certificate": self.certificate,
                "conditions": [c.to_json() for c in self.conditions],
                "notes": self.notes, "reason": self.reason}


def _prepare(F):
    """Drop zero signatures; they belong to every family by convention."""
    sigs, notes = [], []
    for i, f in enumerate(F):
        if f.is_zero():
            notes.append("dropped zero signature at position %d" % i)
        else:
            sigs.append(f)
    return sigs, notes


def _backend_of(sigs):
    if sigs:
        return sigs[0].backend, sigs[0].eps
    return "cyclo24", DEFAULT_EPS


def _matrix_json(name: str, m: Mat2) -> dict:
    return {"name": name,
            "entries": [_sc.format_literal(v)
                        for v in (m.a, m.b, m.c, m.d)]}


def _matrix_from_json(data: dict, field: str, eps: float) -> Mat2:
    a, b, c, d = (_sc.parse_literal(s, field, eps)
                  for s in data["entries"])
    return Mat2(a, b, c, d, field, eps)


# -- shared batteries ------------------------------------------------------------


def _eo_battery(members) -> tuple:
    """Uniform closure direction plus uniform pairing family.

    members: balanced-support signatures.  Returns (ok, detail) where
    detail records the surviving direction/family or the first offender.
    An empty list passes vacuously.
    """
    live = [s for s in members if not s.is_zero()]
    flags = [exists3_class(s) for s in live]
    up = all(fl["closed_up"] for fl in flags)
    down = all(fl["closed_down"] for fl in flags)
    if not (up or down):
        bad_up = next(i for i, fl in enumerate(flags) if not fl["closed_up"])
        bad_dn = next(i for i, fl in enumerate(flags)
                      if not fl["closed_down"])
        return False, {
            "failed": "triple-sum closure",
            "why": "member %d escapes upward and member %d escapes "
                   "downward or off the support" % (bad_dn, bad_up)}
    fam_a = all(eo_pairing_class(s, "A") for s in live)
    fam_p = fam_a or all(eo_pairing_class(s, "P") for s in live)
    if not (fam_a or fam_p):
        rep = next(r for r in (eo_pairing_class(s, "A") for s in live)
                   if not r)
        return False, {"failed": "pairing family", "why": rep.reason}
    closure = "both" if (up and down) else ("up" if up else "down")
    family = "A" if fam_a else "P"
    return True, {"closure": closure, "family": family, "count": len(live)}


def _battery_certificate(kind: str, detail: dict, **extra) -> dict:
    cert = {"kind": kind, "closure": detail["closure"],
            "family": detail["family"]}
    cert.update(extra)
    return cert


def _balanced_slices(hats):
    """Nonzero restrictions to the balanced slice; odd arity has none."""
    out = []
    for h in hats:
        if h.arity % 2:
            continue
        s, _ = restrict_to_eo(h)
        if not s.is_zero():
            out.append(s)
    return out


# -- individual conditions -------------------------------------------------------


def _cond_vanishing(label, hats):
    profiles = [eo_profile(h) for h in hats]
    for side in ("EO>", "EO<"):
        if profiles and all(p == side for p in profiles):
            return ConditionReport(
                label, "holds",
                "every flip-world support is strictly %s balance"
                % ("above" if side == "EO>" else "below"),
                {"kind": "vanishing", "side": side})
    return ConditionReport(label, "refuted",
                           "flip-world profiles %s are not uniformly "
                           "one-sided strict" % profiles)


def _cond_one_sided_battery(label, hats):
    profiles = [eo_profile(h) for h in hats]
    ge = all(p in ("EO=", "EO>", "EO>=") for p in profiles)
    le = all(p in ("EO=", "EO<", "EO<=") for p in profiles)
    if not (ge or le):
        return ConditionReport(label, "refuted",
                               "flip-world supports cross the balanced "
                               "slice in both directions")
    ok, detail = _eo_battery(_balanced_slices(hats))
    if not ok:
        return ConditionReport(label, "refuted",
                               "%s failed: %s" % (detail["failed"],
                                                  detail["why"]))
    side = "EO>=" if ge else "EO<="
    return ConditionReport(
        label, "holds",
        "one-sided flip supports (%s); balanced slices pass the %s/%s "
        "battery" % (side, detail["closure"], detail["family"]),
        _battery_certificate("sliced-eo-battery", detail, side=side))


def _cond_single_weighted_battery(label, hats):
    if not all(is_single_weighted(h) for h in hats):
        bad = next(i for i, h in enumerate(hats)
                   if not is_single_weighted(h))
        return ConditionReport(label, "refuted",
                               "flip image %d carries two support weights"
                               % bad)
    profiles = [eo_profile(h) for h in hats]
    if not (any(p == "EO<" for p in profiles)
            and any(p == "EO>" for p in profiles)):
        return ConditionReport(label, "refuted",
                               "single-weighted flip supports do not sit "
                               "strictly on both sides of balance")
    padded = [to_eo_padding(h)[0] for h in hats]
    ok, detail = _eo_battery(padded)
    if not ok:
        return ConditionReport(label, "refuted",
                               "%s failed on the padded set: %s"
                               % (detail["failed"], detail["why"]))
    return ConditionReport(
        label, "holds",
        "single-weighted flip images; padded set passes the %s/%s battery"
        % (detail["closure"], detail["family"]),
        _battery_certificate("padded-eo-battery", detail))


def _cond_tensor_small(label, sigs):
    reports = [in_T_closure(f) for f in sigs]
    for i, rep in enumerate(reports):
        if not rep:
            return ConditionReport(label, "refuted",
                                   "signature %d %s" % (i, rep.reason))
    return ConditionReport(label, "holds",
                           "every member splits into factors of arity "
                           "at most 2", {"kind": "binary-closure"})


def _cond_matching_closure(label, hats):
    offenders = []
    for variant, test in (("M", in_M_closure), ("XM", in_XM_closure)):
        bad = next((i for i, h in enumerate(hats) if not test(h)), None)
        if bad is None:
            return ConditionReport(
                label, "holds",
                "all flip images factor into matching-support pieces "
                "(variant %s)" % variant,
                {"kind": "matching-closure", "variant": variant})
        offenders.append("flip image %d blocks variant %s" % (bad, variant))
    return ConditionReport(label, "refuted", "; ".join(offenders))


_SEARCH_POOLS: dict = {}
_EXTRA_CANDIDATES: list = []


def register_search_candidates(named) -> int:
    """Extend every transformability search with caller-supplied bases.

    named: iterable of (name, Mat2).  Returns how many were added.  The
    searches stay sound; extra candidates only widen what they can find.
    """
    added = [(str(name), m) for name, m in named]
    _EXTRA_CANDIDATES.extend(added)
    _SEARCH_POOLS.clear()
    return len(added)


def _search_pool(family, backend, eps):
    """Basis-change registry closed under left products with the
    orthogonal candidates.  A hit M for a set then maps to the hit O@M
    for the O-image of the set, so the searches commute with
    scaled-orthogonal changes instead of missing on one side."""
    key = (family, backend, eps)
    if key not in _SEARCH_POOLS:
        base = candidate_matrices(backend, eps,
                                  include_affine_pool=(family == "A"))
        base = base + [(n, m) for n, m in _EXTRA_CANDIDATES
                       if m.backend == backend]
        pool = list(base)
        for oname, o in orthogonal_candidates(backend, eps):
            if oname == "I":
                continue
            for bname, m in base:
                pool.append(("%s*%s" % (oname, bname), o @ m))
        _SEARCH_POOLS[key] = pool
    return _SEARCH_POOLS[key]


def _cond_transformable(label, sigs, family, extra=()):
    pool = list(sigs) + list(extra)
    backend, eps = _backend_of(pool)
    found = transformable_search(
        pool, family, candidates=_search_pool(family, backend, eps))
    if found is None:
        return ConditionReport(
            label, "exhausted",
            "no candidate basis change carries the set into family %s; "
            "the registry is sound but not complete" % family)
    name, m = found
    cert = {"kind": "transformable", "family": family,
            "matrix": _matrix_json(name, m)}
    if extra:
        cert["augmented"] = ["delta%d" % _delta_bit(x) for x in extra]
    return ConditionReport(
        label, "holds",
        "basis change %s carries the set (and the edge) into family %s"
        % (name, family), cert)


def _delta_bit(sig: Signature) -> int:
    supp = sig.support()
    if sig.arity == 1 and len(supp) == 1:
        return supp[0]
    raise ParseError("augmentation must be a pin signature")


def _cond_uniform(label, sigs, family, detail_name=None):
    name = detail_name or family
    for i, f in enumerate(sigs):
        rep = class_membership(f, family)
        if not rep:
            return ConditionReport(label, "refuted",
                                   "signature %d outside %s: %s"
                                   % (i, name, rep.reason))
    return ConditionReport(label, "holds",
                           "all members lie in %s" % name,
                           {"kind": "uniform-membership", "family": family})


def _cond_phase_membership(label, sigs, d, r):
    for i, f in enumerate(sigs):
        rep = in_A_d_r(f, d, r)
        if not rep:
            return ConditionReport(
                label, "refuted",
                "signature %d not affine after undoing %d of %d phase "
                "steps: %s" % (i, r, d, rep.reason))
    return ConditionReport(label, "holds",
                           "all members affine after undoing %d of %d "
                           "phase steps" % (r, d),
                           {"kind": "phase-membership", "d": d, "r": r})


# -- verdict assembly ------------------------------------------------------------


def _run(thunks, notes, fpnp_labels=()):
    conditions = []
    for thunk in thunks:
        rep = thunk()
        conditions.append(rep)
        if rep.status == "holds":
            outcome = ("TractableFPNP" if rep.label in fpnp_labels
                       else "TractableFP")
            return Verdict(outcome, case=rep.label,
                           certificate=rep.certificate,
                           conditions=conditions, notes=notes)
    exhausted = [c.label for c in conditions if c.status == "exhausted"]
    if exhausted:
        return Verdict("HardModuloSearch", conditions=conditions,
                       notes=notes,
                       reason="conditions %s rest on exhausted searches"
                              % ", ".join(exhausted))
    return Verdict("SharpPHard", conditions=conditions, notes=notes,
                   reason="every tractability condition refuted")


# -- dichotomy checks ------------------------------------------------------------


def check_pc(F) -> Verdict:
    """Seven-case battery for sets with a non-trivial odd-arity member.

    Condition order: the all-vanishing fast path, then the one-sided
    battery, the single-weighted battery, binary tensor closure,
    flip-world matching closure, and the three basis-change searches
    (affine-phase, product, local-affine families).  The first two
    non-fast-path cases label the problem TractableFPNP, the rest
    TractableFP.
    """
    sigs, notes = _prepare(F)
    if not any(f.arity % 2 for f in sigs):
        return Verdict("NotApplicable", notes=notes,
                       reason="NoOddAritySignature: no non-trivial member "
                              "of odd arity, so the seven-case statement "
                              "does not apply")
    hats = [hat(f) for f in sigs]
    thunks = [
        lambda: _cond_vanishing("vanishing", hats),
        lambda: _cond_one_sided_battery("case 1", hats),
        lambda: _cond_single_weighted_battery("case 2", hats),
        lambda: _cond_tensor_small("case 3", sigs),
        lambda: _cond_matching_closure("case 4", hats),
        lambda: _cond_transformable("case 5", sigs, "A"),
        lambda: _cond_transformable("case 6", sigs, "P"),
        lambda: _cond_transformable("case 7", sigs, "L"),
    ]
    return _run(thunks, notes, fpnp_labels=("case 1", "case 2"))


def check_delta0(F) -> Verdict:
    """Five-case battery for sets with the 0-pin freely available."""
    sigs, notes = _prepare(F)
    backend, eps = _backend_of(sigs)
    hats = [hat(f) for f in sigs]
    d0 = delta(0, backend, eps)
    thunks = [
        lambda: _cond_tensor_small("case 1", sigs),
        lambda: _cond_matching_closure("case 2", hats),
        lambda: _cond_transformable("case 3", sigs, "A", extra=(d0,)),
        lambda: _cond_transformable("case 4", sigs, "P"),
        lambda: _cond_transformable("case 5", sigs, "L", extra=(d0,)),
    ]
    return _run(thunks, notes)


def check_eo(F) -> Verdict:
    """Battery for balanced-support sets, with the FP refinement.

    Tractable iff the closure direction is uniform and one pairing family
    covers every member; the verdict upgrades to TractableFP when the set
    is additionally 0- or 1-rebalancing, else stays TractableFPNP.
    """
    sigs, notes = _prepare(F)
    for i, f in enumerate(sigs):
        if eo_profile(f) != "EO=":
            raise NotEOSet("signature %d has profile %s"
                           % (i, eo_profile(f)))
    ok, detail = _eo_battery(sigs)
    if not ok:
        rep = ConditionReport("battery", "refuted",
                              "%s failed: %s" % (detail["failed"],
                                                 detail["why"]))
        return Verdict("SharpPHard", conditions=[rep], notes=notes,
                       reason="the balanced battery is refuted")
    battery = ConditionReport(
        "battery", "holds",
        "closure %s, family %s over %d members"
        % (detail["closure"], detail["family"], detail["count"]),
        _battery_certificate("plain-eo-battery", detail))
    reb0 = all(is_rebalancing(f, 0) for f in sigs)
    reb1 = all(is_rebalancing(f, 1) for f in sigs)
    if reb0 or reb1:
        which = "both" if (reb0 and reb1) else ("0" if reb0 else "1")
        reb = ConditionReport("rebalancing", "holds",
                              "set is %s-rebalancing" % which,
                              {"kind": "rebalancing", "direction": which})
        cert = dict(battery.certificate)
        cert["rebalancing"] = which
        return Verdict("TractableFP", case="battery", certificate=cert,
                       conditions=[battery, reb], notes=notes)
    reb = ConditionReport("rebalancing", "refuted",
                          "set is neither 0- nor 1-rebalancing")
    return Verdict("TractableFPNP", case="battery",
                   certificate=battery.certificate,
                   conditions=[battery, reb], notes=notes)


def check_single_weighted(F) -> Verdict:
    """Battery for sets whose members each live on one Hamming weight."""
    sigs, notes = _prepare(F)
    for i, f in enumerate(sigs):
        if not is_single_weighted(f):
            raise NotSingleWeighted("signature %d has several support "
                                    "weights" % i)
    profiles = [eo_profile(f) for f in sigs]
    mixed = (any(p == "EO<" for p in profiles)
             and any(p == "EO>" for p in profiles))
    if mixed:
        label = "case 2"
        members = [to_eo_padding(f)[0] for f in sigs]
        kind = "padded-eo-battery"
        how = "two-sided set, padded to balance"
    else:
        label = "case 1"
        members = [f for f, p in zip(sigs, profiles) if p == "EO="]
        kind = "sliced-eo-battery"
        how = "one-sided set, balanced members only"
    ok, detail = _eo_battery(members)
    if not ok:
        rep = ConditionReport(label, "refuted",
                              "%s; %s failed: %s"
                              % (how, detail["failed"], detail["why"]))
        return Verdict("SharpPHard", conditions=[rep], notes=notes,
                       reason="the %s battery is refuted" % label)
    rep = ConditionReport(
        label, "holds",
        "%s; closure %s, family %s" % (how, detail["closure"],
                                       detail["family"]),
        _battery_certificate(kind, detail,
                             side=("mixed" if mixed else "one-sided")))
    return Verdict("TractableFPNP", case=label, certificate=rep.certificate,
                   conditions=[rep], notes=notes)


def check_csp(F) -> Verdict:
    """All-equalities world: affine-phase family or product family."""
    sigs, notes = _prepare(F)
    thunks = [
        lambda: _cond_uniform("A", sigs, "A", "the affine-phase family"),
        lambda: _cond_uniform("P", sigs, "P", "the product family"),
    ]
    return _run(thunks, notes)


def check_csp2(F) -> Verdict:
    """Even-occurrence world: affine, product, phased-affine, local-affine."""
    sigs, notes = _prepare(F)
    thunks = [
        lambda: _cond_uniform("A", sigs, "A", "the affine-phase family"),
        lambda: _cond_uniform("P", sigs, "P", "the product family"),
        lambda: _cond_phase_membership("A_2^1", sigs, 2, 1),
        lambda: _cond_uniform("L", sigs, "L", "the local-affine family"),
    ]
    return _run(thunks, notes)


def check_cspd_neq(F, d: int) -> Verdict:
    """d-divisible occurrences with the flip edge available.

    Tractable iff the set lies in the product family or in one phased
    image of the affine family.  Exact evaluation needs the order-4d
    phase inside the scalar field, which restricts d on the cyclotomic
    backend.
    """
    if d < 1:
        raise UnsupportedD("occurrence modulus must be positive, got %d"
                           % d)
    sigs, notes = _prepare(F)
    backend, _ = _backend_of(sigs)
    if backend == "cyclo24" and 24 % (4 * d):
        raise UnsupportedD("order-%d phase is outside the exact field; "
                           "use the approx backend" % (4 * d))
    thunks = [lambda: _cond_uniform("P", sigs, "P", "the product family")]

    def phase_thunk(r):
        return lambda: _cond_phase_membership("A_%d^%d" % (d, r), sigs,
                                              d, r)
    for r in range(1, d + 1):
        thunks.append(phase_thunk(r))
    return _run(thunks, notes)


def orthogonal_candidates(field: str = "cyclo24",
                          eps: float = DEFAULT_EPS) -> list:
    """Named candidates M with M M^T a nonzero multiple of the identity."""
    out = []
    for name, m in candidate_matrices(field, eps):
        p = m @ m.transpose()
        if p.b.is_zero() and p.c.is_zero() and p.a == p.d \
                and not p.a.is_zero():
            out.append((name, m))
    return out


def check_holantc_conditions(F) -> Verdict:
    """Battery for the both-pins-available world.

    Case 2 tries the decidable flip-product containment first and then a
    search over scaled-orthogonal basis changes; case 4 searches the
    affine-compatible basis registry.  Both searches are incomplete, so
    their misses are labeled exhausted rather than refuted.
    """
    sigs, notes = _prepare(F)
    backend, eps = _backend_of(sigs)
    hats = [hat(f) for f in sigs]

    def cond_products():
        label = "case 2"
        if all(in_P(h) for h in hats):
            return ConditionReport(
                label, "holds",
                "all flip images are products of pair supports",
                {"kind": "flip-product"})
        for name, m in orthogonal_candidates(backend, eps):
            minv = m.inverse()
            if all(in_P(apply_holographic(f, minv)) for f in sigs):
                return ConditionReport(
                    label, "holds",
                    "orthogonal change %s carries the set into the "
                    "product family" % name,
                    {"kind": "orthogonal-product",
                     "matrix": _matrix_json(name, m)})
        return ConditionReport(
            label, "exhausted",
            "neither the flip images nor any scaled-orthogonal candidate "
            "lands in the product family; the search is not complete")

    def cond_affine_basis():
        label = "case 4"
        for i, m in enumerate(affine_basis_changes(backend, eps)):
            minv = m.inverse()
            if all(in_A(apply_holographic(f, minv)) for f in sigs):
                return ConditionReport(
                    label, "holds",
                    "affine-compatible basis change %d carries the set "
                    "into the affine-phase family" % i,
                    {"kind": "affine-basis",
                     "matrix": _matrix_json("affine-pool:%d" % i, m)})
        return ConditionReport(
            label, "exhausted",
            "no affine-compatible basis change in the registry works; "
            "the registry is sound but not complete")

    thunks = [
        lambda: _cond_tensor_small("case 1", sigs),
        cond_products,
        lambda: _cond_matching_closure("case 3", hats),
        cond_affine_basis,
        lambda: _cond_uniform("case 5", sigs, "L",
                              "the local-affine family"),
    ]
    return _run(thunks, notes)


# -- certificate replay ----------------------------------------------------------


def replay_certificate(F, certificate: dict, d: int | None = None) -> bool:
    """Re-verify a tractability certificate from scratch.

    Recomputes the claimed containments and battery outcomes through the
    classes module.  Returns False on any drift; never trusts cached
    fields beyond the claim being replayed.
    """
    sigs, _ = _prepare(F)
    backend, eps = _backend_of(sigs)
    kind = certificate["kind"]
    if kind == "vanishing":
        side = certificate["side"]
        hats = [hat(f) for f in sigs]
        return bool(hats) and all(eo_profile(h) == side for h in hats)
    if kind == "sliced-eo-battery":
        if certificate.get("side") in ("EO>=", "EO<="):
            want = certificate["side"]
            hats = [hat(f) for f in sigs]
            allowed = (("EO=", "EO>", "EO>=") if want == "EO>="
                       else ("EO=", "EO<", "EO<="))
            if not all(eo_profile(h) in allowed for h in hats):
                return False
            members = _balanced_slices(hats)
        else:
            # plain-world single-weighted delegate: one-sided set
            if not all(is_single_weighted(f) for f in sigs):
                return False
            profiles = [eo_profile(f) for f in sigs]
            if not (all(p in ("EO=", "EO>") for p in profiles)
                    or all(p in ("EO=", "EO<") for p in profiles)):
                return False
            members = [f for f, p in zip(sigs, profiles) if p == "EO="]
        return _replay_battery(members, certificate)
    if kind == "padded-eo-battery":
        base = sigs
        if "side" not in certificate:
            base = [hat(f) for f in sigs]
        if not all(is_single_weighted(h) for h in base):
            return False
        return _replay_battery([to_eo_padding(h)[0] for h in base],
                               certificate)
    if kind == "plain-eo-battery":
        if not _replay_battery(sigs, certificate):
            return False
        want = certificate.get("rebalancing")
        if want is None:
            return True
        dirs = {"0": (0,), "1": (1,), "both": (0, 1)}[want]
        return all(is_rebalancing(f, c) for c in dirs for f in sigs)
    if kind == "binary-closure":
        return all(in_T_closure(f) for f in sigs)
    if kind == "matching-closure":
        test = in_M_closure if certificate["variant"] == "M" \
            else in_XM_closure
        return all(test(hat(f)) for f in sigs)
    if kind == "transformable":
        m = _matrix_from_json(certificate["matrix"], backend, eps)
        fam = certificate["family"]
        pool = list(sigs)
        for tag in certificate.get("augmented", ()):
            pool.append(delta(int(tag[-1]), backend, eps))
        if not class_membership(
                apply_holographic(equality(2, backend, eps), m,
                                  side="row"), fam):
            return False
        minv = m.inverse()
        return all(class_membership(apply_holographic(f, minv), fam)
                   for f in pool)
    if kind == "uniform-membership":
        fam = certificate["family"]
        return all(class_membership(f, fam) for f in sigs)
    if kind == "phase-membership":
        dd = certificate["d"] if d is None else d
        return all(in_A_d_r(f, dd, certificate["r"]) for f in sigs)
    if kind == "flip-product":
        return all(in_P(hat(f)) for f in sigs)
    if kind == "orthogonal-product":
        m = _matrix_from_json(certificate["matrix"], backend, eps)
        minv = m.inverse()
        return all(in_P(apply_holographic(f, minv)) for f in sigs)
    if kind == "affine-basis":
        m = _matrix_from_json(certificate["matrix"], backend, eps)
        minv = m.inverse()
        return all(in_A(apply_holographic(f, minv)) for f in sigs)
    raise ParseError("unknown certificate kind %r" % kind)


def _replay_battery(members, certificate: dict) -> bool:
    live = [s for s in members if not s.is_zero()]
    closure = certificate["closure"]
    flags = [exists3_class(s) for s in live]
    if closure in ("up", "both"):
        if not all(fl["closed_up"] for fl in flags):
            return False
    if closure in ("down", "both"):
        if not all(fl["closed_down"] for fl in flags):
            return False
    family = certificate["family"]
    return all(eo_pairing_class(s, family) for s in live)
