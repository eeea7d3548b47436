import itertools
import json
import random

import numpy as np
import pytest

from fanhom.errors import InputError
from fanhom.fan import (
    build_face_closure,
    build_fan,
    completeness_evidence,
    cone_lattices,
    is_smooth,
    normal_generator,
    parse_fan,
    preset_fan,
    product_fan,
    random_interior_point,
    stellar_subdivision,
    unimodular_image,
    validate_fan,
    validate_fan_text,
)
from fanhom.lattice import determinant, elementary_divisors, imat, integer_rank


def fan_text(rank, rays, max_cones):
    return json.dumps({"rank": rank, "rays": rays, "max_cones": max_cones})


def test_parse_p1():
    fan = parse_fan(fan_text(1, [[1], [-1]], [[0], [1]]))
    assert [c.ray_indices for c in fan.cones] == [(), (0,), (1,)]
    assert len(fan.incidences) == 2
    normals = {(i.face, i.cone): i.normal for i in fan.incidences}
    assert normals[(0, 1)] == (1,)
    assert normals[(0, 2)] == (-1,)


def test_parse_punctured_plane():
    fan = parse_fan(fan_text(2, [[1, 0], [0, 1]], [[0], [1]]))
    assert len(fan.cones) == 3
    assert len(fan.incidences) == 2


def test_parse_rejects_non_primitive_ray():
    with pytest.raises(InputError, match="not primitive"):
        parse_fan(fan_text(2, [[2, 0]], [[0]]))


def test_parse_rejects_unknown_ray():
    with pytest.raises(InputError, match="unknown ray"):
        parse_fan(fan_text(2, [[1, 0]], [[0, 3]]))


def test_parse_rejects_duplicate_ray():
    with pytest.raises(InputError, match="duplicates"):
        parse_fan(fan_text(2, [[1, 0], [1, 0]], [[0], [1]]))


def test_parse_rejects_bad_schema():
    with pytest.raises(InputError, match="malformed"):
        parse_fan("not json at all {")
    with pytest.raises(InputError, match="malformed"):
        parse_fan(json.dumps({"rank": 2, "rays": []}))


def test_face_closure_counts():
    sets, pairs = build_face_closure(2, [(1, 0), (0, 1)], [[0, 1]])
    assert len(sets) == 4
    sets3, _ = build_face_closure(
        3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [[0, 1, 2]]
    )
    assert len(sets3) == 8
    zero_only, pairs0 = build_face_closure(2, [], [])
    assert zero_only == [()]
    assert pairs0 == []


def test_face_closure_idempotent():
    sets, _ = build_face_closure(2, [(1, 0), (0, 1)], [[0, 1]])
    again, _ = build_face_closure(2, [(1, 0), (0, 1)], [list(s) for s in sets])
    assert again == sets


def test_validate_overlapping_cones():
    report = validate_fan_text(
        fan_text(2, [[1, 0], [0, 1], [1, 1], [1, -1]], [[0, 1], [2, 3]])
    )
    status = {c.name: c.status for c in report.checks}
    assert status["fan_condition"] == "fail"
    assert not report.ok


def test_validate_cone_with_line():
    report = validate_fan_text(fan_text(2, [[1, 0], [-1, 0]], [[0, 1]]))
    status = {c.name: c.status for c in report.checks}
    assert status["strong_convexity"] == "fail"


def test_validate_duplicate_geometric_cone():
    report = validate_fan_text(
        fan_text(2, [[1, 0], [0, 1], [1, 1]], [[0, 1], [0, 1, 2]])
    )
    status = {c.name: c.status for c in report.checks}
    assert status["fan_condition"] == "fail"


def test_validate_good_fan_passes():
    fan = preset_fan("projective_space", (2,))
    report = validate_fan(fan)
    assert report.ok


def test_normal_generator_examples():
    qc = preset_fan("quadric_cone_affine")
    zero = qc.cone_of([])
    ray_e2 = qc.cone_of([0])
    two_cone = qc.cone_of([0, 1])
    assert normal_generator(qc, zero, ray_e2) == (0, 1)
    # sigma = ray(e2), tau = <e2, 2e1 - e2>: quotient generated by class of e1,
    # the class of 2e1 - e2 is twice it (positive side)
    nst = normal_generator(qc, ray_e2, two_cone)
    assert nst[0] == 1  # any representative e1 + k*e2 works
    p2 = preset_fan("projective_space", (2,))
    sigma = p2.cone_of([0])
    tau = p2.cone_of([0, 1])
    assert normal_generator(p2, sigma, tau) == (0, 1)
    with pytest.raises(ValueError):
        normal_generator(p2, p2.cone_of([]), tau)


def test_normal_generator_class_generates_quotient(corpus):
    for name, fan in corpus:
        for inc in fan.incidences:
            sigma = fan.cones[inc.face]
            tau = fan.cones[inc.cone]
            stacked = np.vstack(
                [sigma.n_sigma_basis, imat([list(inc.normal)])]
            )
            # the stacked rows must be a basis of N_tau: integer coordinates
            # in tau's basis with determinant +-1
            coords = [
                list(
                    np.array(row, dtype=object).dot(tau.span_coords)[: tau.dim]
                )
                for row in stacked
            ]
            assert abs(determinant(imat(coords))) == 1


def test_incidence_counts_match_face_relation(corpus):
    for name, fan in corpus:
        for ci, cone in enumerate(fan.cones):
            outgoing = len(fan.incidences_from[ci])
            containing = sum(
                1
                for ti, tau in enumerate(fan.cones)
                if tau.dim == cone.dim + 1 and cone.ray_indices in tau.faces
            )
            assert outgoing == containing, name


def test_cone_lattices_examples():
    t2 = preset_fan("torus", (2,))
    m_perp, l_sec = cone_lattices(t2, t2.cone_of([]))
    assert m_perp.shape == (2, 2) and abs(determinant(m_perp)) == 1
    assert l_sec.shape == (0, 2)

    p2 = preset_fan("projective_space", (2,))
    full = p2.cone_of([0, 1])
    m_perp, l_sec = cone_lattices(p2, full)
    assert m_perp.shape == (0, 2)
    assert abs(determinant(l_sec)) == 1

    qc = preset_fan("quadric_cone_affine")
    ray = qc.cone_of([1])  # ray (2, -1)
    m_perp, l_sec = cone_lattices(qc, ray)
    assert m_perp.shape == (1, 2)
    assert 2 * m_perp[0, 0] - m_perp[0, 1] == 0  # pairs to zero with (2,-1)
    stacked = np.vstack([m_perp, l_sec])
    assert abs(determinant(stacked)) == 1


def test_cone_invariants(corpus):
    for name, fan in corpus:
        n = fan.rank
        for cone in fan.cones:
            assert cone.m_perp_basis.shape == (n - cone.dim, n)
            assert cone.l_section_basis.shape == (cone.dim, n)
            for row in cone.m_perp_basis:
                for i in cone.ray_indices:
                    assert sum(a * b for a, b in zip(row, fan.rays[i])) == 0
            if n:
                stacked = np.vstack([cone.m_perp_basis, cone.l_section_basis])
                assert abs(determinant(stacked)) == 1


def test_preset_projective_space():
    p1 = preset_fan("projective_space", (1,))
    assert p1.rays == [(1,), (-1,)]
    p3 = preset_fan("projective_space", (3,))
    assert len(p3.rays) == 4
    assert len(p3.maximal_cones) == 4
    assert is_smooth(p3)
    assert completeness_evidence(p3) == (True, True)


def test_preset_hirzebruch():
    h2 = preset_fan("hirzebruch", (2,))
    assert h2.rays == [(1, 0), (0, 1), (-1, 2), (0, -1)]
    assert len(h2.maximal_cones) == 4
    assert validate_fan(h2).ok
    assert completeness_evidence(h2) == (True, True)


def test_preset_product():
    p1 = preset_fan("projective_space", (1,))
    prod = product_fan(p1, p1)
    assert prod.rank == 2
    assert len(prod.maximal_cones) == 4
    assert len(prod.cones) == 9


def test_preset_weighted_projective():
    wp = preset_fan("weighted_projective", (1, 1, 2))
    assert wp.rays == [(1, 0), (0, 1), (-1, -2)]
    assert len(wp.maximal_cones) == 3
    with pytest.raises(InputError, match="positive"):
        preset_fan("weighted_projective", (1, -1, 2))
    with pytest.raises(InputError, match="gcd"):
        preset_fan("weighted_projective", (2, 2, 4))


def test_preset_torus_and_quadric():
    t3 = preset_fan("torus", (3,))
    assert t3.rays == []
    assert len(t3.cones) == 1
    qc = preset_fan("quadric_cone_affine")
    assert set(qc.rays) == {(0, 1), (2, -1)}
    assert not is_smooth(qc)


def test_preset_unknown_and_bad_params():
    with pytest.raises(InputError, match="unknown preset"):
        preset_fan("klein_bottle")
    with pytest.raises(InputError):
        preset_fan("projective_space", ())
    with pytest.raises(InputError):
        preset_fan("projective_space", ("x",))


def test_stellar_subdivision_valid():
    p2 = preset_fan("projective_space", (2,))
    rng = random.Random(4)
    target = p2.maximal_cones[0]
    point = random_interior_point(rng, p2, target)
    sub = stellar_subdivision(p2, target, point)
    assert len(sub.rays) == len(p2.rays) + 1
    assert validate_fan(sub).ok
    # exterior point rejected
    with pytest.raises(InputError, match="interior"):
        stellar_subdivision(p2, target, (-1, -1) if point != (-1, -1) else (-1, -2))


def test_unimodular_image_is_valid_fan():
    p2 = preset_fan("projective_space", (2,))
    image = unimodular_image(p2, [[1, 3], [0, 1]])
    assert validate_fan(image).ok
    assert len(image.cones) == len(p2.cones)
    with pytest.raises(ValueError):
        unimodular_image(p2, [[2, 0], [0, 1]])


def test_nonsimplicial_cone_with_redundant_generator():
    fan = build_fan(2, [(1, 0), (0, 1), (1, 1)], [[0, 1, 2]])
    assert [c.ray_indices for c in fan.cones] == [(), (0,), (1,), (0, 1, 2)]
    # the interior ray is not a face; the big cone has exactly 2 facets
    big = fan.cones[fan.cone_of([0, 1, 2])]
    assert len(big.facet_normals) == 2


def test_nonsimplicial_square_cone_in_3d():
    # cone over a square: 4 rays, 3-dimensional, not simplicial
    rays = [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)]
    fan = build_fan(3, rays, [[0, 1, 2, 3]])
    big = fan.cones[fan.cone_of([0, 1, 2, 3])]
    assert big.dim == 3
    assert len(big.facet_normals) == 4
    facets = [f for f in big.faces if len(f) == 2]
    assert sorted(facets) == [(0, 1), (0, 3), (1, 2), (2, 3)]


def test_rays_unused_are_allowed():
    fan = parse_fan(fan_text(2, [[1, 0], [0, 1], [1, 1]], [[0], [1]]))
    assert len(fan.cones) == 3  # the unused ray is not a cone


def test_file_round_trip(corpus):
    for name, fan in corpus:
        again = parse_fan(fan.file_text())
        assert again.rank == fan.rank
        assert again.rays == fan.rays
        assert [c.ray_indices for c in again.cones] == [
            c.ray_indices for c in fan.cones
        ]
