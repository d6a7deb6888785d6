import random

import numpy as np
import pytest

from hnnlinear import suite
from hnnlinear.finite_order import extend_to_finite_order
from hnnlinear.hnn import Word, britton_reduce, random_word, word
from hnnlinear.pipeline import run_pipeline
from hnnlinear.raag import (
    PipelineError,
    RaagGraph,
    _tilde,
    build_tilde,
    certify_raag,
    embed_g,
    format_word,
    free_reduce,
    normal_closure_data,
    schreier_rewrite,
)
from hnnlinear.reps import int_det, is_identity, raag_to_matrices


@pytest.fixture(scope="module")
def swap_result():
    return run_pipeline(suite.swap())


def graph(vertices, edges):
    return RaagGraph(tuple(vertices), frozenset(frozenset(e) for e in edges))


def test_free_reduce():
    assert free_reduce([("a", 1), ("b", 1), ("b", -1), ("a", -1)]) == ()
    assert format_word((("a", 1), ("a", 1), ("b", -1))) == "a^2 b^-1"


def test_build_tilde_swap():
    inst = suite.swap()
    ext = extend_to_finite_order(inst)
    p = build_tilde(ext, 1, inst.A)
    assert p.names == ("xi1", "zeta", "e1", "e2")
    assert [format_word(r) for r in p.relators] == [
        "e1 e2 e1^-1 e2^-1",
        "xi1 e1 xi1^-1 e2^-1",
        "xi1 e2 xi1^-1 e1^-1",
        "zeta e1 zeta^-1 e1^-1",
    ]
    p2 = build_tilde(ext, 2, inst.A)
    assert p2.names[:2] == ("xi1", "xi2")
    assert [format_word(r) for r in p2.relators[3:5]] == ["xi2 e1 xi2^-1 e2^-1", "xi2 e2 xi2^-1 e1^-1"]
    with pytest.raises(PipelineError):
        build_tilde(ext, 0, inst.A)


def test_build_tilde_identity_gives_commutators():
    p = _tilde(((1, 0), (0, 1)), 1, 1, [(1, 0)])
    assert format_word(p.relators[1]) == "xi1 e1 xi1^-1 e1^-1"


def test_embed_g():
    inst = suite.swap()
    ext = extend_to_finite_order(inst)
    assert embed_g(ext, word(1)) == (("xi1", 1), ("zeta", 1))
    assert embed_g(ext, word((1, 0))) == (("e1", 1),)
    z = suite.z4_replacement()
    ze = extend_to_finite_order(z)
    with pytest.raises(PipelineError):
        embed_g(ze, word((1, 0, 0, 0)))
    with pytest.raises(PipelineError):
        build_tilde(ze, 1, z.A)


def test_normal_closure():
    inst = suite.swap()
    nc = normal_closure_data(inst, extend_to_finite_order(inst))
    assert nc.n == 1 and nc.instance.A == inst.A
    z = suite.z4_replacement()
    nc = normal_closure_data(z, extend_to_finite_order(z))
    assert nc.n == 8 and len(set(nc.representatives)) == 8
    d = suite.disjoint_index2()
    assert normal_closure_data(d, extend_to_finite_order(d)).n == 2


def test_size_guards():
    big_entries, huge_index = suite.random_d0_instances(11, 3)[2], suite.random_d0_instances(11, 1)[0]
    ext = extend_to_finite_order(big_entries)
    nc = normal_closure_data(big_entries, ext)
    with pytest.raises(PipelineError, match="letters"):
        build_tilde(nc.extension, nc.n, nc.instance.A)
    with pytest.raises(PipelineError, match="coset limit"):
        run_pipeline(huge_index)


def test_schreier_swap(swap_result):
    data = swap_result.schreier
    assert data.nu == 2 and data.kernel_index() == 2
    assert set(data.retained_generators) == {"e1", "e2", "z", "zeta0", "zeta1"}
    nontrivial = {format_word(r) for r in data.rewritten_relators if r}
    assert {"z e1 z^-1 e1^-1", "z e2 z^-1 e2^-1", "zeta0 e1 zeta0^-1 e1^-1",
            "zeta1 e2 zeta1^-1 e2^-1"} <= nontrivial


def test_schreier_nu_one():
    data = schreier_rewrite(_tilde(((1, 0), (0, 1)), 1, 1, [(1, 0)]))
    assert data.kernel_index() == 1
    assert set(data.retained_generators) == {"z", "zeta0", "e1", "e2"}


def test_z3_zeta_levels():
    z = suite.z3_shift()
    data = schreier_rewrite(build_tilde(extend_to_finite_order(z), 1, z.A))
    assert data.kernel_index() == 3
    cert = certify_raag(data)
    assert cert.is_raag
    for j in range(3):
        nbrs = {v for v in cert.graph.vertices if cert.graph.adjacent(f"zeta{j}", v)}
        assert len(nbrs) == 2 and nbrs <= {"e1", "e2", "e3"}


def test_certify_swap(swap_result):
    cert = swap_result.certificate
    assert cert.is_raag
    assert cert.graph.vertices == ("e1", "e2", "z", "zeta0", "zeta1")
    assert cert.graph.edge_list() == [("e1", "e2"), ("e1", "z"), ("e1", "zeta0"), ("e2", "z"), ("e2", "zeta1")]


def test_certify_adapted_basis():
    cert = certify_raag(schreier_rewrite(_tilde(((1, 0), (0, 1)), 1, 1, [(1, 2)])))
    assert cert.is_raag
    assert (1, 2) in cert.basis
    assert cert.graph.adjacent("zeta0", cert.graph.vertices[cert.basis.index((1, 2))])


def test_certify_obstructed():
    cert = certify_raag(schreier_rewrite(_tilde(((0, 1), (-1, -1)), 3, 1, [(1, 0)])))
    assert not cert.is_raag
    assert cert.offending and cert.graph is None


def test_single_vertex_matrix():
    rep = raag_to_matrices(graph(["v"], []))
    assert rep.images["v"].tolist() == [[3, -2], [2, -1]]


def test_two_commuting_vertices():
    rep = raag_to_matrices(graph(["a", "b"], [("a", "b")]))
    assert rep.dimension == 4
    for g in (rep.images["a"], rep.images["b"]):
        assert (g[:2, 2:] == 0).all() and (g[2:, :2] == 0).all()
    assert is_identity(rep.word_image((("a", 1), ("b", 1), ("a", -1), ("b", -1))))


def test_free_pair():
    rep = raag_to_matrices(graph(["a", "b"], []))
    assert not is_identity(rep.word_image((("a", 1), ("b", 1), ("a", -1), ("b", -1))))
    for m in rep.images.values():
        assert abs(int_det(m)) == 1


def test_swap_representation(swap_result):
    rep = swap_result.representation
    inst = suite.swap()
    assert rep.dimension == 20
    assert rep.image(word(1, (1, 0), -1, (0, -1))).is_identity()
    assert rep.image(word(1, 1)).is_identity() is False
    for r in swap_result.presentation.relators:
        assert rep.tilde_image(r).is_identity()
    # an odd number of stable letters moves every block, so the trace vanishes
    assert rep.image(word(1, (1, 0))).trace() == 0
    rng = random.Random(3)
    for _ in range(20):
        u, v = random_word(rng, inst, 3), random_word(rng, inst, 3)
        lhs = rep.image(u * v)
        assert lhs == rep.image(u) @ rep.image(v)
        assert np.array_equal(lhs.to_dense(), rep.dense(u).dot(rep.dense(v)))
        if britton_reduce(inst, u).t_length:
            assert not rep.image(u).is_identity()


def test_pipeline_index_two():
    res = run_pipeline(suite.disjoint_index2())
    assert not res.acts_on_g and res.closure.n == 2
    assert res.certificate.is_raag
    w = Word(())
    assert res.representation.image(w).is_identity()


def test_z4_pipeline():
    res = run_pipeline(suite.z4_replacement())
    assert res.certificate.is_raag
    inst = res.word_instance
    rng = random.Random(0)
    for _ in range(3):
        w = random_word(rng, inst, 2)
        if britton_reduce(inst, w).t_length:
            assert not res.representation.image(w).is_identity()
