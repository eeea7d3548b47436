"""Rational polyhedral fans in a lattice N = Z^n.

Parsing and validation of fan files, face closure, incidence pairs with
their quotient generators, per-cone lattice data (the perpendicular
sublattice of characters and a free section complementing it), presets for
the usual test varieties, and stellar subdivision.  All geometry is exact:
integer linear algebra plus Fourier-Motzkin feasibility over the
rationals; no floating point.

Rays are primitive integer vectors stored as tuples; a cone is identified
by its sorted tuple of ray indices, the zero cone by the empty tuple.  The
zero cone is always present and never listed in input files.
"""

from __future__ import annotations

import itertools
import json
import random as _random_module
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from . import feasibility
from .errors import InputError, InternalConsistencyError
from .lattice import (
    _snf,
    elementary_divisors,
    imat,
    integer_rank,
    kernel_basis,
    mdot,
    saturation_and_complement,
    unimodular_inverse,
    zeros,
)

PRESET_NAMES = (
    "projective_space",
    "product",
    "hirzebruch",
    "weighted_projective",
    "torus",
    "punctured_plane",
    "quadric_cone_affine",
)

_COVERAGE_DIRECTIONS = 64
_COVERAGE_SEED = 20140917


@dataclass
class Cone:
    """A strongly convex rational cone, plus its lattice bookkeeping.

    ``n_sigma_basis`` has the rows of a basis of span(cone) & N, the
    ``m_perp_basis`` rows span the characters vanishing on the cone, and
    ``l_section_basis`` completes them to a basis of M (so the stacked
    matrix is unimodular).  ``span_coords`` and ``split_coords`` are the
    inverse base changes: ``x @ span_coords`` gives the coordinates of x
    in (n_sigma_basis | its completion), ``m @ split_coords`` those of m
    in (m_perp_basis | l_section_basis).
    """

    ray_indices: tuple[int, ...]
    dim: int
    n_sigma_basis: np.ndarray
    m_perp_basis: np.ndarray
    l_section_basis: np.ndarray
    span_coords: np.ndarray
    split_coords: np.ndarray
    facet_normals: list[tuple[int, ...]] = field(default_factory=list)
    facet_rays: list[frozenset[int]] = field(default_factory=list)
    faces: tuple[tuple[int, ...], ...] = ()

    @property
    def codim(self) -> int:
        return self.n_sigma_basis.shape[1] - self.dim


@dataclass(frozen=True)
class Incidence:
    """A pair sigma < tau with dim tau = dim sigma + 1.

    ``normal`` is a lattice point of tau whose class generates the rank-one
    quotient N_tau / N_sigma, oriented so that every ray of tau outside
    sigma maps to a positive multiple of that class.
    """

    face: int
    cone: int
    normal: tuple[int, ...]


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == "fail"]


@dataclass
class Fan:
    rank: int
    rays: list[tuple[int, ...]]
    cones: list[Cone]
    incidences: list[Incidence]
    cone_index: dict[frozenset, int]
    faces_of: list[tuple[int, ...]]
    incidences_from: list[list[Incidence]]
    maximal_cones: list[int]

    def cone_of(self, ray_indices) -> int:
        key = frozenset(ray_indices)
        if key not in self.cone_index:
            raise InputError(f"no cone with rays {sorted(key)} in this fan")
        return self.cone_index[key]

    def cones_of_dim(self, d: int):
        return [i for i, c in enumerate(self.cones) if c.dim == d]

    def file_dict(self) -> dict:
        """The fan in the fan file schema (maximal cones only)."""
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [
                list(self.cones[i].ray_indices) for i in self.maximal_cones
                if self.cones[i].ray_indices
            ],
        }

    def file_text(self) -> str:
        return json.dumps(self.file_dict()) + "\n"


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, abs(int(x)))
    return g


def _cone_geometry(rank, rays, ray_ids, section_rule="default") -> Cone:
    """Lattice data of the cone spanned by the given rays."""
    mat = imat([rays[i] for i in ray_ids], shape=(len(ray_ids), rank))
    _, diagonal, parts = _snf(mat, track=("V", "V_inv"))
    r = sum(1 for d in diagonal if d)
    n_sigma = parts["V_inv"][:r].copy()
    span_coords = parts["V"]
    m_perp = parts["V"][:, r:].T.copy()
    _, diag2, parts2 = _snf(m_perp, track=("V_inv",))
    r2 = sum(1 for d in diag2 if d)
    l_section = parts2["V_inv"][r2:].copy()
    if section_rule == "sheared" and r and rank - r:
        shear = imat([[1] * (rank - r)] * r, shape=(r, rank - r))
        l_section = l_section + mdot(shear, m_perp)
    elif section_rule not in ("default", "sheared"):
        raise ValueError(f"unknown section rule {section_rule!r}")
    stacked = np.vstack([m_perp, l_section]) if rank else zeros(0, 0)
    split_coords = unimodular_inverse(stacked) if rank else zeros(0, 0)
    return Cone(
        ray_indices=tuple(sorted(ray_ids)),
        dim=r,
        n_sigma_basis=n_sigma,
        m_perp_basis=m_perp,
        l_section_basis=l_section,
        span_coords=span_coords,
        split_coords=split_coords,
    )


def _span_coordinates(cone: Cone, vec):
    """Coordinates of an integer vector in cone.n_sigma_basis (length dim)."""
    row = np.array([int(x) for x in vec], dtype=object)
    return row.dot(cone.span_coords)[: cone.dim]


def _is_face_subset(rhats, subset, others):
    """Does some functional vanish on `subset` and stay positive elsewhere?"""
    d = rhats.shape[1] if rhats.size else 0
    fmat = imat([list(rhats[i]) for i in subset], shape=(len(subset), d))
    K = kernel_basis(fmat)
    if K.shape[0] == 0:
        return len(others) == 0
    rows = []
    for j in others:
        coeffs = K.dot(rhats[j])
        rows.append((tuple(int(c) for c in coeffs), 1))
    return feasibility.feasible(rows, K.shape[0])


def _strongly_convex(rhats) -> bool:
    """Exact test: some functional is strictly positive on all generators."""
    k, d = rhats.shape
    if k == 0:
        return True
    rows = [(tuple(int(c) for c in rhats[i]), 1) for i in range(k)]
    return feasibility.feasible(rows, d)


def _enumerate_faces(cone: Cone, rays) -> list[tuple[int, ...]]:
    """All faces of the cone as sorted global ray index tuples."""
    ids = cone.ray_indices
    k = len(ids)
    if k == cone.dim:  # simplicial: every subset of the rays is a face
        out = []
        for size in range(k + 1):
            out.extend(
                tuple(sorted(s))
                for s in itertools.combinations(ids, size)
            )
        return out
    rhats = np.array(
        [list(_span_coordinates(cone, rays[i])) for i in ids], dtype=object
    ).reshape(k, cone.dim)
    out = []
    for size in range(k + 1):
        for local in itertools.combinations(range(k), size):
            others = [j for j in range(k) if j not in local]
            if _is_face_subset(rhats, local, others):
                out.append(tuple(sorted(ids[j] for j in local)))
    return out


def _facet_data(cone: Cone, rays, face_sets):
    """Lifted facet normals (>= 0 on the cone, = 0 on the facet)."""
    normals = []
    facet_rays = []
    d = cone.dim
    if d == 0:
        return normals, facet_rays
    ids = cone.ray_indices
    rhats = {i: _span_coordinates(cone, rays[i]) for i in ids}
    for fs in face_sets:
        fset = set(fs)
        if len(fset) == len(ids):
            continue
        face_cone_dim = integer_rank(
            imat([rays[i] for i in fs], shape=(len(fs), len(rays[0]) if rays else 0))
        )
        if face_cone_dim != d - 1:
            continue
        fmat = imat([list(rhats[i]) for i in fs], shape=(len(fs), d))
        K = kernel_basis(fmat)
        if K.shape[0] != 1:
            raise InternalConsistencyError("facet normal space is not a line")
        mhat = K[0]
        signs = [int(mhat.dot(rhats[i])) for i in ids if i not in fset]
        if all(s <= 0 for s in signs):
            mhat = -mhat
            signs = [-s for s in signs]
        if not all(s > 0 for s in signs):
            raise InternalConsistencyError("facet normal is not supporting")
        lifted = cone.span_coords[:, : d].dot(mhat)
        normals.append(tuple(int(x) for x in lifted))
        facet_rays.append(frozenset(fs))
    return normals, facet_rays


def _contains_point(cone: Cone, point) -> bool:
    """Exact membership of a rational point in the cone."""
    for row in cone.m_perp_basis:
        if sum(int(a) * b for a, b in zip(row, point)) != 0:
            return False
    for normal in cone.facet_normals:
        if sum(a * b for a, b in zip(normal, point)) < 0:
            return False
    if cone.dim == 0:
        return all(x == 0 for x in point)
    return True


def _pair_intersection_failure(fan_rank, rays, ca: Cone, cb: Cone):
    """Fan-condition check for one pair of cones; None means the pair is fine.

    Fast paths: a listed face relation, or a separating functional built
    from the facet normals vanishing on the common rays.  Otherwise an
    exact relative-interior computation via Fourier-Motzkin.
    """
    name_a = f"cone({','.join(map(str, ca.ray_indices))})"
    name_b = f"cone({','.join(map(str, cb.ray_indices))})"
    if ca.ray_indices in cb.faces or cb.ray_indices in ca.faces:
        return None
    common = tuple(sorted(set(ca.ray_indices) & set(cb.ray_indices)))
    if common in ca.faces and common in cb.faces:
        for first, second in ((ca, cb), (cb, ca)):
            tight = [
                nrm
                for nrm, frays in zip(first.facet_normals, first.facet_rays)
                if set(common) <= frays
            ]
            if not tight:
                continue
            h = tuple(sum(col) for col in zip(*tight))
            pairings = {
                i: sum(a * b for a, b in zip(h, rays[i]))
                for i in second.ray_indices
            }
            if all(v <= 0 for v in pairings.values()) and {
                i for i, v in pairings.items() if v == 0
            } == set(common):
                own = {
                    i: sum(a * b for a, b in zip(h, rays[i]))
                    for i in first.ray_indices
                }
                if {i for i, v in own.items() if v == 0} == set(common):
                    return None
    # exact path: relative interior point of the intersection
    eq_rows = [tuple(int(x) for x in row) for row in ca.m_perp_basis]
    eq_rows += [tuple(int(x) for x in row) for row in cb.m_perp_basis]
    B = kernel_basis(imat(eq_rows, shape=(len(eq_rows), fan_rank)))
    v = B.shape[0]
    if v == 0:
        return None  # intersection is {0}, a face of everything
    ineqs = list(ca.facet_normals) + list(cb.facet_normals)
    reduced = [tuple(int(x) for x in B.dot(np.array(g, dtype=object))) for g in ineqs]
    base = [(r, 0) for r in reduced]
    implicit = []
    for k, r in enumerate(reduced):
        probe = base[:k] + base[k + 1:] + [(r, 1)]
        if feasibility.solve(probe, v) is None:
            implicit.append(k)
    system = []
    for k, r in enumerate(reduced):
        if k in implicit:
            system.append((r, 0))
            system.append((tuple(-x for x in r), 0))
        else:
            system.append((r, 1))
    w = feasibility.solve(system, v)
    if w is None:
        raise InternalConsistencyError("relative interior witness not found")
    z = [sum(Fraction(int(B[l, i])) * w[l] for l in range(v)) for i in range(fan_rank)]
    for first, second, nf, ns in ((ca, cb, name_a, name_b), (cb, ca, name_b, name_a)):
        tight = [
            g
            for g in first.facet_normals
            if sum(a * b for a, b in zip(g, z)) == 0
        ]
        face_rays = [
            i
            for i in first.ray_indices
            if all(sum(a * b for a, b in zip(g, rays[i])) == 0 for g in tight)
        ]
        for i in face_rays:
            if not _contains_point(second, rays[i]):
                return (
                    f"intersection of {name_a} and {name_b} is not a face of {nf}"
                )
    tight_rows = eq_rows[:]
    for cone in (ca, cb):
        for g in cone.facet_normals:
            if sum(a * b for a, b in zip(g, z)) == 0:
                tight_rows.append(tuple(int(x) for x in g))
    dim_meet = fan_rank - integer_rank(
        imat(tight_rows, shape=(len(tight_rows), fan_rank))
    )
    if dim_meet == ca.dim == cb.dim:
        return f"{name_a} and {name_b} are equal as sets but listed separately"
    return None


def _incidence_normal(rays, sigma: Cone, tau: Cone) -> tuple[int, ...]:
    """A lattice point of tau generating N_tau / N_sigma, oriented into tau."""
    dt = tau.dim
    coords = [list(_span_coordinates(tau, row)) for row in sigma.n_sigma_basis]
    coords_mat = imat(coords, shape=(sigma.dim, dt))
    sat, comp = saturation_and_complement(coords_mat)
    if comp.shape[0] != 1:
        raise InternalConsistencyError("quotient N_tau / N_sigma is not rank one")
    w = comp[0]
    basis_change = unimodular_inverse(np.vstack([sat, comp]))
    extra = [i for i in tau.ray_indices if i not in sigma.ray_indices]
    if not extra:
        raise InternalConsistencyError("incidence with no new ray")
    signs = []
    for i in extra:
        rhat = _span_coordinates(tau, rays[i])
        signs.append(int(rhat.dot(basis_change)[dt - 1]))
    if all(s < 0 for s in signs):
        w = -w
        signs = [-s for s in signs]
    if not all(s > 0 for s in signs):
        raise InternalConsistencyError("incidence orientation is inconsistent")
    vec = w.dot(tau.n_sigma_basis)
    return tuple(int(x) for x in vec)


def build_face_closure(rank, rays, max_cones):
    """Every face of every listed cone, plus the incidence pairs.

    Returns ``(cone_sets, incidence_pairs)``: the face-closed collection
    of sorted ray index tuples (always containing the zero cone) and the
    pairs (face_set, cone_set) with a one-step dimension gap.  Strong
    convexity of the listed cones is assumed; use `build_fan` for the
    fully validated pipeline.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    listed = [tuple(sorted(set(c))) for c in max_cones]
    geometry = {}
    face_sets: set[tuple[int, ...]] = {()}
    faces_map: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}
    queue = list(dict.fromkeys(listed))
    while queue:
        ids = queue.pop()
        if ids in faces_map:
            continue
        cone = geometry.get(ids)
        if cone is None:
            cone = _cone_geometry(rank, rays, ids)
            geometry[ids] = cone
        faces = _enumerate_faces(cone, rays)
        faces_map[ids] = tuple(sorted(faces, key=lambda f: (len(f), f)))
        for f in faces:
            face_sets.add(f)
            if f != ids and f not in faces_map:
                queue.append(f)
    cone_sets = sorted(face_sets, key=lambda f: (len(f), f))
    dims = {}
    for ids in cone_sets:
        cone = geometry.get(ids)
        if cone is None:
            cone = _cone_geometry(rank, rays, ids)
            geometry[ids] = cone
        dims[ids] = cone.dim
    pairs = []
    for ids in cone_sets:
        for f in faces_map.get(ids, ()):
            if dims[f] == dims[ids] - 1:
                pairs.append((f, ids))
    return cone_sets, sorted(set(pairs))


def _checked_build(rank, rays_raw, max_cones_raw, section_rule="default"):
    """Run all construction stages, recording one result per check."""
    checks: list[CheckResult] = []
    fan = None

    def fail(name, detail):
        checks.append(CheckResult(name, "fail", detail))

    def ok(name):
        checks.append(CheckResult(name, "pass"))

    def skip(rest):
        for name in rest:
            checks.append(CheckResult(name, "skipped"))

    # --- rays ---
    problems = []
    rays = []
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        problems.append("rank must be a positive integer")
    else:
        seen = {}
        for idx, r in enumerate(rays_raw):
            try:
                vec = tuple(int(x) for x in r)
            except (TypeError, ValueError):
                problems.append(f"ray {idx} is not an integer vector")
                continue
            if len(vec) != rank:
                problems.append(f"ray {idx} has length {len(vec)}, expected {rank}")
            elif all(x == 0 for x in vec):
                problems.append(f"ray {idx} is zero")
            elif _primitive(vec) != 1:
                problems.append(f"ray {idx} = {list(vec)} is not primitive")
            elif vec in seen:
                problems.append(f"ray {idx} duplicates ray {seen[vec]}")
            else:
                seen[vec] = idx
            rays.append(vec)
    if problems:
        fail("rays_primitive", "; ".join(problems))
        skip(["strong_convexity", "face_closure", "fan_condition"])
        return None, ValidationReport(tuple(checks))
    ok("rays_primitive")

    # --- listed cones & strong convexity ---
    problems = []
    listed = []
    for idx, cidx_list in enumerate(max_cones_raw):
        try:
            ids = [int(i) for i in cidx_list]
        except (TypeError, ValueError):
            problems.append(f"cone {idx} is not a list of ray indices")
            continue
        if any(i < 0 or i >= len(rays) for i in ids):
            problems.append(f"cone {idx} references an unknown ray")
            continue
        if len(set(ids)) != len(ids):
            problems.append(f"cone {idx} repeats a ray index")
            continue
        listed.append(tuple(sorted(ids)))
    if not problems:
        for ids in dict.fromkeys(listed):
            cone = _cone_geometry(rank, rays, ids)
            if cone.dim < len(ids) and not _strongly_convex(
                np.array(
                    [list(_span_coordinates(cone, rays[i])) for i in ids],
                    dtype=object,
                ).reshape(len(ids), cone.dim)
            ):
                problems.append(
                    f"cone({','.join(map(str, ids))}) is not strongly convex"
                )
    if problems:
        fail("strong_convexity", "; ".join(problems))
        skip(["face_closure", "fan_condition"])
        return None, ValidationReport(tuple(checks))
    ok("strong_convexity")

    # --- face closure and per-cone geometry ---
    try:
        cone_sets, _ = build_face_closure(rank, rays, listed)
        cones = []
        cone_index = {}
        for ids in cone_sets:
            cone = _cone_geometry(rank, rays, ids, section_rule=section_rule)
            cone_index[frozenset(ids)] = len(cones)
            cones.append(cone)
        faces_map = {}
        for cone in cones:
            faces = _enumerate_faces(cone, rays)
            cone.faces = tuple(sorted(faces, key=lambda f: (len(f), f)))
            faces_map[cone.ray_indices] = cone.faces
            normals, facet_rays = _facet_data(cone, rays, cone.faces)
            cone.facet_normals = normals
            cone.facet_rays = facet_rays
    except (InternalConsistencyError, ValueError) as exc:
        fail("face_closure", str(exc))
        skip(["fan_condition"])
        return None, ValidationReport(tuple(checks))
    ok("face_closure")

    # --- fan condition on maximal cones ---
    face_of_other = set()
    for cone in cones:
        for f in cone.faces:
            if f != cone.ray_indices:
                face_of_other.add(f)
    maximal = [
        i for i, c in enumerate(cones) if c.ray_indices not in face_of_other
    ]
    problems = []
    for a, b in itertools.combinations(maximal, 2):
        msg = _pair_intersection_failure(rank, rays, cones[a], cones[b])
        if msg:
            problems.append(msg)
    if problems:
        fail("fan_condition", "; ".join(sorted(set(problems))))
        return None, ValidationReport(tuple(checks))
    ok("fan_condition")

    # --- incidences ---
    faces_of = []
    for cone in cones:
        faces_of.append(
            tuple(cone_index[frozenset(f)] for f in cone.faces)
        )
    incidences = []
    for ti, tau in enumerate(cones):
        for fi in faces_of[ti]:
            sigma = cones[fi]
            if sigma.dim == tau.dim - 1:
                normal = _incidence_normal(rays, sigma, tau)
                incidences.append(Incidence(face=fi, cone=ti, normal=normal))
    incidences.sort(key=lambda inc: (inc.face, inc.cone))
    incidences_from = [[] for _ in cones]
    for inc in incidences:
        incidences_from[inc.face].append(inc)
    fan = Fan(
        rank=rank,
        rays=rays,
        cones=cones,
        incidences=incidences,
        cone_index=cone_index,
        faces_of=faces_of,
        incidences_from=incidences_from,
        maximal_cones=maximal,
    )
    return fan, ValidationReport(tuple(checks))


def build_fan(rank, rays, max_cones, section_rule="default") -> Fan:
    """Validated fan from rays and generating cones; raises InputError."""
    fan, report = _checked_build(rank, rays, max_cones, section_rule)
    if fan is None:
        first = report.failures()[0]
        raise InputError(f"{first.name}: {first.detail}")
    return fan


def _load_fan_dict(text: str) -> tuple[int, list, list]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed fan file: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError("malformed fan file: expected an object")
    expected = {"rank", "rays", "max_cones"}
    if set(doc) != expected:
        raise InputError(
            "malformed fan file: expected exactly the fields "
            "rank, rays, max_cones"
        )
    if not isinstance(doc["rays"], list) or not isinstance(doc["max_cones"], list):
        raise InputError("malformed fan file: rays and max_cones must be lists")
    return doc["rank"], doc["rays"], doc["max_cones"]


def parse_fan(text: str) -> Fan:
    """Parse and fully validate a fan file."""
    rank, rays, max_cones = _load_fan_dict(text)
    return build_fan(rank, rays, max_cones)


def validate_fan_text(text: str) -> ValidationReport:
    """Run every check on a fan file, reporting pass/fail per check."""
    try:
        rank, rays, max_cones = _load_fan_dict(text)
    except InputError as exc:
        checks = [CheckResult("format", "fail", str(exc))]
        for name in ("rays_primitive", "strong_convexity", "face_closure",
                     "fan_condition"):
            checks.append(CheckResult(name, "skipped"))
        return ValidationReport(tuple(checks))
    _, report = _checked_build(rank, rays, max_cones)
    return ValidationReport((CheckResult("format", "pass"),) + report.checks)


def validate_fan(fan: Fan) -> ValidationReport:
    """Re-run all checks on an already built fan."""
    _, report = _checked_build(
        fan.rank,
        fan.rays,
        [fan.cones[i].ray_indices for i in fan.maximal_cones],
    )
    return report


def cone_lattices(fan: Fan, cone_index: int):
    """(m_perp_basis, l_section_basis) of a cone of the fan."""
    cone = fan.cones[cone_index]
    return cone.m_perp_basis, cone.l_section_basis


def normal_generator(fan: Fan, sigma_index: int, tau_index: int) -> tuple[int, ...]:
    """The annotated quotient generator for the incidence sigma < tau."""
    sigma = fan.cones[sigma_index]
    tau = fan.cones[tau_index]
    if tau.dim != sigma.dim + 1 or sigma.ray_indices not in tau.faces:
        raise ValueError(
            "normal_generator needs a face pair with a one-step dimension gap"
        )
    for inc in fan.incidences_from[sigma_index]:
        if inc.cone == tau_index:
            return inc.normal
    raise InternalConsistencyError("incidence missing from the fan")


# ---------------------------------------------------------------------------
# presets


def _simplex_fan(rays, rank):
    subsets = itertools.combinations(range(len(rays)), rank)
    return build_fan(rank, rays, [list(s) for s in subsets])


def preset_fan(name: str, params=()) -> Fan:
    """Built-in fans; see PRESET_NAMES for the available names."""
    if name == "projective_space":
        (n,) = _int_params(name, params, 1)
        if n < 1:
            raise InputError("projective_space needs n >= 1")
        rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        rays.append(tuple([-1] * n))
        return _simplex_fan(rays, n)
    if name == "torus":
        (n,) = _int_params(name, params, 1)
        if n < 1:
            raise InputError("torus needs n >= 1")
        return build_fan(n, [], [])
    if name == "punctured_plane":
        _int_params(name, params, 0)
        return build_fan(2, [(1, 0), (0, 1)], [[0], [1]])
    if name == "quadric_cone_affine":
        _int_params(name, params, 0)
        return build_fan(2, [(0, 1), (2, -1)], [[0, 1]])
    if name == "hirzebruch":
        (a,) = _int_params(name, params, 1)
        if a < 0:
            raise InputError("hirzebruch needs a >= 0")
        rays = [(1, 0), (0, 1), (-1, a), (0, -1)]
        return build_fan(2, rays, [[0, 1], [1, 2], [2, 3], [3, 0]])
    if name == "weighted_projective":
        weights = _int_params(name, params, None)
        if len(weights) < 2:
            raise InputError("weighted_projective needs at least two weights")
        if any(w <= 0 for w in weights):
            raise InputError("weighted_projective weights must be positive")
        g = 0
        for w in weights:
            g = gcd(g, w)
        if g != 1:
            raise InputError("weighted_projective weights must have gcd 1")
        n = len(weights) - 1
        _, diagonal, parts = _snf(
            imat([list(weights)], shape=(1, n + 1)), track=("V",)
        )
        V = parts["V"]
        images = [tuple(int(x) for x in V[i][1:]) for i in range(n + 1)]
        rays = images[1:] + images[:1]
        for r in rays:
            if _primitive(r) != 1:
                raise InputError(
                    "weighted_projective weights are not well formed "
                    "(a ray image is not primitive)"
                )
        if len(set(rays)) != len(rays):
            raise InputError("weighted_projective weights give duplicate rays")
        return _simplex_fan(rays, n)
    if name == "product":
        if len(params) != 2 or not all(isinstance(p, Fan) for p in params):
            raise InputError("product needs exactly two fans")
        return product_fan(*params)
    raise InputError(f"unknown preset {name!r}")


def _int_params(name, params, count):
    try:
        values = tuple(int(p) for p in params)
    except (TypeError, ValueError):
        raise InputError(f"{name} parameters must be integers") from None
    if count is not None and len(values) != count:
        raise InputError(f"{name} takes exactly {count} parameter(s)")
    return values


def product_fan(left: Fan, right: Fan) -> Fan:
    """The fan of the product variety: pairwise products of cones."""
    rank = left.rank + right.rank
    rays = [r + (0,) * right.rank for r in left.rays]
    rays += [(0,) * left.rank + r for r in right.rays]
    offset = len(left.rays)
    max_cones = []
    for a in left.maximal_cones:
        for b in right.maximal_cones:
            ids = list(left.cones[a].ray_indices) + [
                offset + i for i in right.cones[b].ray_indices
            ]
            max_cones.append(ids)
    return build_fan(rank, rays, max_cones)


# ---------------------------------------------------------------------------
# subdivision and basis changes


def random_interior_point(rng, fan: Fan, cone_index: int) -> tuple[int, ...]:
    """A random primitive lattice point interior to the given cone."""
    cone = fan.cones[cone_index]
    if cone.dim < 2:
        raise InputError("interior insertion needs a cone of dimension >= 2")
    existing = set(fan.rays)
    for _ in range(200):
        coeffs = [rng.randint(1, 4) for _ in cone.ray_indices]
        vec = [0] * fan.rank
        for c, i in zip(coeffs, cone.ray_indices):
            for k in range(fan.rank):
                vec[k] += c * fan.rays[i][k]
        g = _primitive(vec)
        point = tuple(x // g for x in vec)
        if point not in existing:
            return point
    raise InternalConsistencyError("could not find a fresh interior point")


def stellar_subdivision(fan: Fan, cone_index: int, point) -> Fan:
    """Star-subdivide a maximal cone at an interior primitive point."""
    point = tuple(int(x) for x in point)
    if cone_index not in fan.maximal_cones:
        raise InputError("stellar subdivision here only splits maximal cones")
    cone = fan.cones[cone_index]
    if _primitive(point) != 1:
        raise InputError("subdivision point must be primitive")
    if not _contains_point(cone, point) or any(
        sum(a * b for a, b in zip(g, point)) == 0 for g in cone.facet_normals
    ):
        raise InputError("subdivision point is not interior to the cone")
    rays = list(fan.rays) + [point]
    new_idx = len(fan.rays)
    max_cones = [
        list(fan.cones[i].ray_indices)
        for i in fan.maximal_cones
        if i != cone_index
    ]
    facet_dim = cone.dim - 1
    for f in cone.faces:
        fdim = fan.cones[fan.cone_of(f)].dim
        if fdim == facet_dim:
            max_cones.append(list(f) + [new_idx])
    return build_fan(fan.rank, rays, max_cones)


def unimodular_image(fan: Fan, G) -> Fan:
    """Apply a unimodular cocharacter base change to every ray."""
    from .lattice import determinant

    G = imat(G)
    if abs(determinant(G)) != 1:
        raise ValueError("base change must be unimodular")
    rays = [
        tuple(int(sum(G[i, j] * r[j] for j in range(fan.rank))) for i in range(fan.rank))
        for r in fan.rays
    ]
    return build_fan(
        fan.rank,
        rays,
        [fan.cones[i].ray_indices for i in fan.maximal_cones],
    )


def is_smooth(fan: Fan) -> bool:
    """Every cone's rays extend to a basis of the lattice."""
    for cone in fan.cones:
        k = len(cone.ray_indices)
        if cone.dim != k:
            return False
        mat = imat([fan.rays[i] for i in cone.ray_indices], shape=(k, fan.rank))
        if any(d != 1 for d in elementary_divisors(mat)):
            return False
    return True


def completeness_evidence(fan: Fan) -> tuple[bool, bool]:
    """(exact facet pairing, heuristic coverage) evidence of completeness.

    The exact part checks that every (n-1)-cone bounds exactly two n-cones.
    The coverage part shoots a fixed set of pseudo-random rational
    directions and checks each lies in some full-dimensional cone; it is a
    documented heuristic, not a proof.
    """
    n = fan.rank
    top = fan.cones_of_dim(n)
    if not top:
        return (False, False)
    ridge_count = {i: 0 for i in fan.cones_of_dim(n - 1)}
    for ti in top:
        for fi in fan.faces_of[ti]:
            if fan.cones[fi].dim == n - 1:
                ridge_count[fi] += 1
    pairing = bool(ridge_count) and all(v == 2 for v in ridge_count.values())
    rng = _random_module.Random(_COVERAGE_SEED)
    covered = True
    for _ in range(_COVERAGE_DIRECTIONS):
        direction = [rng.randint(-9, 9) for _ in range(n)]
        if all(x == 0 for x in direction):
            continue
        if not any(_contains_point(fan.cones[t], direction) for t in top):
            covered = False
            break
    return (pairing, covered)
