import random

import pytest

from fanhom.fan import (
    preset_fan,
    product_fan,
    random_interior_point,
    stellar_subdivision,
)


def subdivided(fan, seed, times=1):
    rng = random.Random(seed)
    for _ in range(times):
        candidates = [i for i in fan.maximal_cones if fan.cones[i].dim >= 2]
        target = rng.choice(candidates)
        point = random_interior_point(rng, fan, target)
        fan = stellar_subdivision(fan, target, point)
    return fan


def build_corpus():
    """The structural-suite corpus: presets plus seeded subdivisions."""
    p1 = preset_fan("projective_space", (1,))
    p2 = preset_fan("projective_space", (2,))
    p3 = preset_fan("projective_space", (3,))
    fans = [
        ("projective_space(1)", p1),
        ("projective_space(2)", p2),
        ("projective_space(3)", p3),
        ("projective_space(4)", preset_fan("projective_space", (4,))),
        ("torus(1)", preset_fan("torus", (1,))),
        ("torus(2)", preset_fan("torus", (2,))),
        ("torus(3)", preset_fan("torus", (3,))),
        ("punctured_plane", preset_fan("punctured_plane")),
        ("quadric_cone_affine", preset_fan("quadric_cone_affine")),
        ("hirzebruch(0)", preset_fan("hirzebruch", (0,))),
        ("hirzebruch(1)", preset_fan("hirzebruch", (1,))),
        ("hirzebruch(2)", preset_fan("hirzebruch", (2,))),
        ("hirzebruch(3)", preset_fan("hirzebruch", (3,))),
        ("weighted_projective(1,1,2)", preset_fan("weighted_projective", (1, 1, 2))),
        ("weighted_projective(1,2,3)", preset_fan("weighted_projective", (1, 2, 3))),
        ("weighted_projective(2,3,5)", preset_fan("weighted_projective", (2, 3, 5))),
        ("p1_x_p1", product_fan(p1, p1)),
        ("p1_x_p2", product_fan(p1, p2)),
        ("p2_subdivided", subdivided(p2, seed=11)),
        ("p3_subdivided", subdivided(p3, seed=12)),
        ("hirzebruch1_subdivided_twice", subdivided(preset_fan("hirzebruch", (1,)), seed=13, times=2)),
        ("quadric_subdivided", subdivided(preset_fan("quadric_cone_affine"), seed=14)),
        ("p1xp1_subdivided", subdivided(product_fan(p1, p1), seed=15)),
    ]
    return fans


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture(scope="session")
def corpus_reports(corpus):
    """name -> (fan, subcomplexes, integral report), computed once."""
    from fanhom.homology import bm_homology_report
    from fanhom.koszul import assemble_subcomplexes

    out = {}
    for name, fan in corpus:
        subs = assemble_subcomplexes(fan)
        out[name] = (fan, subs, bm_homology_report(fan, "Z", subcomplexes=subs))
    return out
