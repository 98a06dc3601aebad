"""Seeded generators for the model families and their JSON interchange form.

Every instance is reproducible from (family, genus, prime, seed): generators
draw from a PCG64 stream in a documented order, and the payload they emit is
self-contained, so a saved instance file rebuilds the identical ring.  Draws
that fail structural checks (dependent linear sections, wrong Hilbert
function) are rejected, never repaired in place.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb

import numpy as np

from .gfp import DEFAULT_PRIME, FieldContext, MatrixGF
from .gradedring import (
    BigradedParametrization,
    GradedAlgebra,
    IdealPresentation,
    hilbert_check,
    ring_from_ideal,
    ring_from_parametrization,
)
from .multilinear import enumerate_monomials, grevlex_key

SCHEMA_VERSION = 1

RNC_TORUS = (0, 1, 0, 0)
TANDEV_TORUS = (0, 1, 0, 1)


class DegenerateDrawError(RuntimeError):
    """A random draw produced a degenerate instance; use another seed."""


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    genus: int
    prime: int
    seed: int
    payload: IdealPresentation | BigradedParametrization


FAMILIES = {
    "rnc": {"kind": "rnc", "genus": range(2, 10), "seeded": False},
    "curve-ci23-g4": {"kind": "curve", "genus": 4, "seeded": True},
    "k3-ci23-g4": {"kind": "k3", "genus": 4, "seeded": True},
    "curve-grass-g6": {"kind": "curve", "genus": 6, "seeded": True},
    "k3-grass-g6": {"kind": "k3", "genus": 6, "seeded": True},
    "curve-grass-g8": {"kind": "curve", "genus": 8, "seeded": True},
    "k3-grass-g8": {"kind": "k3", "genus": 8, "seeded": True},
    "tandev": {"kind": "tandev", "genus": range(4, 13, 2), "seeded": False},
}

SECTION_FAMILY = {
    "k3-ci23-g4": "curve-ci23-g4",
    "k3-grass-g6": "curve-grass-g6",
    "k3-grass-g8": "curve-grass-g8",
}


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# ---------------------------------------------------------------------------
# generators

def gen_rnc(n: int, prime: int = DEFAULT_PRIME, seed: int = 0) -> InstanceSpec:
    """Rational normal curve of degree n: coordinates s^(n-i) u^i."""
    if not 2 <= n <= 9:
        raise ValueError(f"rational normal curve degree {n} outside [2, 9]")
    FieldContext(prime)
    forms = tuple(((1, (n - i, i, 0, 0)),) for i in range(n + 1))
    payload = BigradedParametrization(bidegree=(n, 0), forms=forms)
    return InstanceSpec("rnc", n, prime, seed, payload)


def gen_tandev(g: int, prime: int = DEFAULT_PRIME, seed: int = 0) -> InstanceSpec:
    """Tangent developable of the degree-g rational normal curve.

    Coordinates are a d(nu_i)/ds + b d(nu_i)/du for nu_i = s^(g-i) u^i, of
    bidegree (g-1, 1); the i-th form has torus weight i.
    """
    if g < 4 or g > 12 or g % 2:
        raise ValueError(f"tangent developable genus {g} outside even [4, 12]")
    ctx = FieldContext(prime)
    forms = []
    for i in range(g + 1):
        terms = []
        if g - i:
            terms.append(((g - i) % ctx.p, (g - 1 - i, i, 1, 0)))
        if i:
            terms.append((i % ctx.p, (g - i, i - 1, 0, 1)))
        forms.append(tuple(terms))
    payload = BigradedParametrization(bidegree=(g - 1, 1), forms=tuple(forms))
    return InstanceSpec("tandev", g, prime, seed, payload)


def _dense_form(rng: np.random.Generator, nvars: int, degree: int, p: int):
    """A random form with one drawn coefficient per monomial, grevlex order."""
    monos = enumerate_monomials(nvars, degree)
    coeffs = rng.integers(0, p, size=len(monos))
    terms = tuple((int(c), e) for c, e in zip(coeffs, monos) if int(c))
    return (degree, terms)


def gen_ci23(kind: str, prime: int = DEFAULT_PRIME, seed: int = 1) -> InstanceSpec:
    """Genus-4 complete intersection of a quadric and a cubic.

    kind 'curve' lives in 4 variables, kind 'k3' in 5.  Draw order: quadric
    coefficients then cubic coefficients, one per monomial.
    """
    if kind not in ("curve", "k3"):
        raise ValueError(f"kind must be curve or k3, got {kind!r}")
    ctx = FieldContext(prime)
    nv = 4 if kind == "curve" else 5
    rng = _rng(seed)
    gens = (_dense_form(rng, nv, 2, ctx.p), _dense_form(rng, nv, 3, ctx.p))
    payload = IdealPresentation(num_vars=nv, generators=gens)
    return InstanceSpec(f"{kind}-ci23-g4", 4, prime, seed, payload)


def _pluecker_generators(n: int):
    """Quadric relations of the Grassmannian of lines in n variables, over
    pair coordinates p_(i,j), i < j, in lexicographic pair order."""
    pairs = list(itertools.combinations(range(n), 2))
    pair_index = {pr: i for i, pr in enumerate(pairs)}
    gens = []
    for a, b, c, d in itertools.combinations(range(n), 4):
        terms = []
        for (i1, j1), (i2, j2), sgn in (
            ((a, b), (c, d), 1),
            ((a, c), (b, d), -1),
            ((a, d), (b, c), 1),
        ):
            e = [0] * len(pairs)
            e[pair_index[(i1, j1)]] += 1
            e[pair_index[(i2, j2)]] += 1
            terms.append((sgn, tuple(e)))
        gens.append((2, tuple(terms)))
    return len(pairs), tuple(gens)


def _substitute_linear(generators, lam: np.ndarray, nv_out: int, p: int):
    """Rewrite generators under x_i -> sum_j lam[i, j] y_j."""
    out = []
    for degree, terms in generators:
        acc: dict[tuple[int, ...], int] = {}
        for coeff, exps in terms:
            poly = {(0,) * nv_out: int(coeff) % p}
            for var, mult in enumerate(exps):
                for _ in range(mult):
                    nxt: dict[tuple[int, ...], int] = {}
                    row = lam[var]
                    for mono, c in poly.items():
                        for j in range(nv_out):
                            lj = int(row[j])
                            if not lj:
                                continue
                            m2 = list(mono)
                            m2[j] += 1
                            key = tuple(m2)
                            nxt[key] = (nxt.get(key, 0) + c * lj) % p
                    poly = nxt
            for mono, c in poly.items():
                acc[mono] = (acc.get(mono, 0) + c) % p
        live = tuple(
            (c, e) for e, c in sorted(acc.items(), key=lambda t: grevlex_key(t[0])) if c
        )
        if live:
            out.append((degree, live))
    return tuple(out)


def gen_grass(g: int, kind: str, prime: int = DEFAULT_PRIME, seed: int = 1) -> InstanceSpec:
    """Linear section of a Grassmannian of lines.

    Genus 6 cuts the Grassmannian in 5 ambient points down to 6 (curve) or 7
    (k3) variables and adds one drawn quadric; genus 8 cuts the Grassmannian
    in 6 ambient points down to 8 or 9 variables.  Draw order: the
    substitution matrix row-major, then the extra quadric if any.
    """
    if g not in (6, 8):
        raise ValueError(f"Grassmannian families exist for genus 6 and 8, not {g}")
    if kind not in ("curve", "k3"):
        raise ValueError(f"kind must be curve or k3, got {kind!r}")
    ctx = FieldContext(prime)
    n = 5 if g == 6 else 6
    m = g if kind == "curve" else g + 1
    n_pluecker, gens = _pluecker_generators(n)
    rng = _rng(seed)
    lam = rng.integers(0, ctx.p, size=(n_pluecker, m)).astype(np.int64)
    if MatrixGF(lam, ctx, reduce=False).rank() != m:
        raise DegenerateDrawError("degenerate draw; reseed (dependent linear section)")
    cut = _substitute_linear(gens, lam, m, ctx.p)
    if g == 6:
        cut = cut + (_dense_form(rng, m, 2, ctx.p),)
    payload = IdealPresentation(num_vars=m, generators=cut)
    return InstanceSpec(f"{kind}-grass-g{g}", g, prime, seed, payload)


def hyperplane_section(spec: InstanceSpec, seed: int) -> InstanceSpec:
    """Cut a K3 model by a seeded linear change onto one fewer variable.

    The result is a canonical-curve instance of the matching curve family;
    its payload is authoritative (it does not equal the curve generator's
    output for the same seed).
    """
    if spec.family not in SECTION_FAMILY:
        raise ValueError(f"hyperplane sections need a K3 ideal family, got {spec.family!r}")
    ctx = FieldContext(spec.prime)
    nv = spec.payload.num_vars
    rng = _rng(seed)
    lam = rng.integers(0, ctx.p, size=(nv, nv - 1)).astype(np.int64)
    if MatrixGF(lam, ctx, reduce=False).rank() != nv - 1:
        raise DegenerateDrawError("degenerate draw; reseed (dependent linear section)")
    cut = _substitute_linear(spec.payload.generators, lam, nv - 1, ctx.p)
    payload = IdealPresentation(num_vars=nv - 1, generators=cut)
    return InstanceSpec(SECTION_FAMILY[spec.family], spec.genus, spec.prime, seed, payload)


def generate(
    family: str,
    genus: int | None = None,
    prime: int = DEFAULT_PRIME,
    seed: int = 1,
) -> InstanceSpec:
    """Dispatch to the family generators with argument validation."""
    info = FAMILIES.get(family)
    if info is None:
        raise ValueError(f"unknown family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    fixed = info["genus"]
    if isinstance(fixed, range):
        if genus is None:
            raise ValueError(f"family {family!r} needs --genus in {fixed}")
        if genus not in fixed:
            raise ValueError(f"family {family!r} supports genus {fixed}, got {genus}")
    else:
        if genus is not None and genus != fixed:
            raise ValueError(f"family {family!r} has genus {fixed}, got {genus}")
        genus = fixed
    if family == "rnc":
        return gen_rnc(genus, prime, seed)
    if family == "tandev":
        return gen_tandev(genus, prime, seed)
    kind, construction = family.split("-")[0], family.split("-")[1]
    if construction == "ci23":
        return gen_ci23(kind, prime, seed)
    return gen_grass(genus, kind, prime, seed)


# ---------------------------------------------------------------------------
# ring construction with the family's structural guard

def build_ring(spec: InstanceSpec, qmax: int = 4, check: bool = True) -> GradedAlgebra:
    """Construct the instance's graded ring and verify its Hilbert function."""
    ctx = FieldContext(spec.prime)
    info = FAMILIES.get(spec.family)
    if info is None:
        raise ValueError(f"unknown family {spec.family!r}")
    kind = info["kind"]
    meta = {
        "family": spec.family,
        "kind": kind,
        "genus": spec.genus,
        "prime": spec.prime,
        "seed": spec.seed,
    }
    if isinstance(spec.payload, BigradedParametrization):
        torus = RNC_TORUS if kind == "rnc" else TANDEV_TORUS
        ring = ring_from_parametrization(
            spec.payload, ctx, qmax=qmax, meta=meta, torus_weights=torus
        )
    else:
        ring = ring_from_ideal(spec.payload, ctx, qmax=qmax, meta=meta)
    if check:
        report = hilbert_check(ring, kind, spec.genus)
        if not report.ok:
            detail = f"expected {report.expected}, got {report.actual}"
            if info["seeded"]:
                raise DegenerateDrawError(f"degenerate draw; reseed ({detail})")
            raise AssertionError(f"deterministic family off its Hilbert function: {detail}")
    return ring


# ---------------------------------------------------------------------------
# pencil bundle numerology

@dataclass(frozen=True)
class LMLedger:
    """Invariants of the rank-2 bundle attached to a minimal pencil."""

    genus: int
    k: int
    h0_E: int
    h1_E: int
    h2_E: int
    c2_E: int
    pencil_degree: int
    dim_P: int
    rank_W: int
    dim_sym_k: int
    h0_L: int
    rank_ML: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def lm_ledger(g: int) -> LMLedger:
    """Closed-form bundle numerology for even genus g = 2k."""
    if g < 4 or g % 2:
        raise ValueError(f"even genus >= 4 required, got {g}")
    k = g // 2
    led = LMLedger(
        genus=g,
        k=k,
        h0_E=k + 2,
        h1_E=0,
        h2_E=0,
        c2_E=k + 1,
        pencil_degree=k + 1,
        dim_P=k + 1,
        rank_W=k,
        dim_sym_k=comb(2 * k + 1, k),
        h0_L=g + 1,
        rank_ML=g - 1,
    )
    # internal consistency: projective space of the pencil sections, the
    # rank of the evaluation kernel, Riemann-Roch on the K3
    if led.dim_P != led.h0_E - 1 or led.rank_W != led.h0_E - 2:
        raise AssertionError("bundle ledger inconsistent")
    if led.rank_ML != led.h0_L - 2:
        raise AssertionError("kernel bundle rank inconsistent")
    # chi(E) = rank * chi(O) + c1^2/2 - c2 on a K3, with c1^2 = 2g - 2
    if led.h0_E - led.h1_E + led.h2_E != 4 + (g - 1) - led.c2_E:
        raise AssertionError("bundle Euler characteristic inconsistent")
    return led


# ---------------------------------------------------------------------------
# JSON interchange

def spec_to_json_dict(spec: InstanceSpec) -> dict:
    if isinstance(spec.payload, IdealPresentation):
        payload = {
            "type": "ideal",
            "num_vars": spec.payload.num_vars,
            "generators": [
                {
                    "degree": degree,
                    "terms": [{"c": int(c), "e": list(e)} for c, e in terms],
                }
                for degree, terms in spec.payload.generators
            ],
        }
    else:
        payload = {
            "type": "parametrization",
            "bidegree": list(spec.payload.bidegree),
            "forms": [
                {"terms": [{"c": int(c), "e": list(e)} for c, e in terms]}
                for terms in spec.payload.forms
            ],
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "family": spec.family,
        "genus": spec.genus,
        "prime": spec.prime,
        "seed": spec.seed,
        "payload": payload,
    }


def canonical_json(spec: InstanceSpec) -> str:
    return json.dumps(spec_to_json_dict(spec), indent=2) + "\n"


def _terms_from_json(raw, width_check=None):
    terms = []
    for t in raw:
        if not isinstance(t, dict) or set(t) != {"c", "e"}:
            raise ValueError("instance json: term must be an object with keys c, e")
        c, e = t["c"], t["e"]
        if not isinstance(c, int) or not isinstance(e, list) or not all(
            isinstance(x, int) for x in e
        ):
            raise ValueError("instance json: term coefficients and exponents are ints")
        if width_check is not None and len(e) != width_check:
            raise ValueError("instance json: exponent vector has the wrong length")
        terms.append((c, tuple(e)))
    return tuple(terms)


def spec_from_json_dict(doc: dict) -> InstanceSpec:
    if not isinstance(doc, dict):
        raise ValueError("instance json: top level must be an object")
    missing = {"schema_version", "family", "genus", "prime", "seed", "payload"} - set(doc)
    if missing:
        raise ValueError(f"instance json: missing keys {sorted(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"instance json: schema_version must be {SCHEMA_VERSION}")
    family, genus, prime, seed = doc["family"], doc["genus"], doc["prime"], doc["seed"]
    if family not in FAMILIES:
        raise ValueError(f"instance json: unknown family {family!r}")
    for name, val in (("genus", genus), ("prime", prime), ("seed", seed)):
        if not isinstance(val, int):
            raise ValueError(f"instance json: {name} must be an int")
    raw = doc["payload"]
    if not isinstance(raw, dict) or "type" not in raw:
        raise ValueError("instance json: payload needs a type")
    if raw["type"] == "ideal":
        nv = raw.get("num_vars")
        gens_raw = raw.get("generators")
        if not isinstance(nv, int) or not isinstance(gens_raw, list):
            raise ValueError("instance json: ideal payload needs num_vars and generators")
        gens = []
        for g in gens_raw:
            if not isinstance(g, dict) or not isinstance(g.get("degree"), int):
                raise ValueError("instance json: generator needs an integer degree")
            gens.append((g["degree"], _terms_from_json(g.get("terms", []), nv)))
        payload = IdealPresentation(num_vars=nv, generators=tuple(gens))
    elif raw["type"] == "parametrization":
        bid = raw.get("bidegree")
        forms_raw = raw.get("forms")
        if (
            not isinstance(bid, list)
            or len(bid) != 2
            or not all(isinstance(x, int) for x in bid)
            or not isinstance(forms_raw, list)
        ):
            raise ValueError(
                "instance json: parametrization payload needs bidegree and forms"
            )
        forms = tuple(
            _terms_from_json(f.get("terms", []), 4) for f in forms_raw
        )
        payload = BigradedParametrization(bidegree=(bid[0], bid[1]), forms=forms)
    else:
        raise ValueError(f"instance json: unknown payload type {raw['type']!r}")
    return InstanceSpec(family, genus, prime, seed, payload)


def load_instance(path: str) -> InstanceSpec:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"instance json: {exc}") from exc
    return spec_from_json_dict(doc)
