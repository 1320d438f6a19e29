import random

import pytest

from homcount.complexes import (ComplexError, Presentation, SimplicialComplex,
                                band_ordering, csaszar_torus, faces,
                                genus2_ordering, genus2_surface,
                                greedy_ordering, grid_torus, homology,
                                load_complex, ordering_width,
                                parse_presentation_text,
                                presentation_from_complex, prefix_boundary,
                                prefix_boundary_direct, smith_normal_form,
                                validate_ordering)
from conftest import data_path


def sphere():
    return SimplicialComplex(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def test_closure_and_size():
    X = SimplicialComplex(3, [(0, 1, 2)])
    assert len(X.by_dim[0]) == 3 and len(X.by_dim[1]) == 3
    assert X.size == 7
    with pytest.raises(ComplexError):
        SimplicialComplex(5, [(0, 1, 2, 3, 4)])


def test_snf_examples():
    assert smith_normal_form([[1, 0], [0, 1]]) == [1, 1]
    assert smith_normal_form([[0, 0], [0, 0]]) == [0, 0]
    assert smith_normal_form([[2, 4], [6, 8]]) == [2, 4]


def test_snf_unimodular_invariance():
    # rank and divisor product are invariant under random unimodular
    # row/column operations
    rng = random.Random(12)

    def rand_matrix(rows, cols):
        return [[rng.randint(-4, 4) for _ in range(cols)] for _ in range(rows)]

    def unimodular_ops(M, n_ops):
        M = [row[:] for row in M]
        for _ in range(n_ops):
            kind = rng.randrange(4)
            if kind == 0 and len(M) > 1:
                i, j = rng.sample(range(len(M)), 2)
                c = rng.randint(-2, 2)
                M[i] = [a + c * b for a, b in zip(M[i], M[j])]
            elif kind == 1 and len(M[0]) > 1:
                i, j = rng.sample(range(len(M[0])), 2)
                c = rng.randint(-2, 2)
                for row in M:
                    row[i] += c * row[j]
            elif kind == 2 and len(M) > 1:
                i, j = rng.sample(range(len(M)), 2)
                M[i], M[j] = M[j], M[i]
            elif len(M[0]) > 1:
                i, j = rng.sample(range(len(M[0])), 2)
                for row in M:
                    row[i], row[j] = row[j], row[i]
        return M

    for _ in range(120):
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        M = rand_matrix(rows, cols)
        d1 = smith_normal_form(M)
        d2 = smith_normal_form(unimodular_ops(M, 12))
        assert d1 == d2
        for a, b in zip(d1, d1[1:]):
            if b:
                assert a and b % a == 0


def test_homology_values(tmp_path):
    assert homology(sphere())[:3] == [(1, []), (0, []), (1, [])]
    X, _ = load_complex(data_path("rp2.cx"))
    assert homology(X)[1] == (0, [2])
    tor, _ = load_complex(data_path("torus7.cx"))
    assert homology(tor)[1] == (2, [])
    ball = SimplicialComplex(4, [(0, 1, 2, 3)])
    assert homology(ball) == [(1, []), (0, []), (0, []), (0, [])]


def test_homology_components_and_euler():
    two = SimplicialComplex(6, [(0, 1, 2), (3, 4, 5)])
    assert homology(two)[0][0] == 2
    for X in (sphere(), grid_torus(3, 3), genus2_surface()):
        hom = homology(X)
        euler = sum((-1) ** k * hom[k][0] for k in range(4))
        assert euler == X.euler_characteristic()


def test_presentation_parsing():
    P = parse_presentation_text("gens 2\nx1 x2 X1 X2\n")
    assert P.ngens == 2 and P.relators == [(1, 2, -1, -2)]
    with pytest.raises(ComplexError):
        parse_presentation_text("gens 1\nx2\n")
    with pytest.raises(ComplexError):
        parse_presentation_text("x1\n")
    assert "x1" in Presentation(1, [(1,)]).format()


def test_presentation_from_complex_shapes():
    disk = SimplicialComplex(3, [(0, 1, 2)])
    P, _ = presentation_from_complex(disk)
    assert P.ngens == 1 and P.relators == [(1,)]
    P, _ = presentation_from_complex(sphere())
    assert len(P.relators) == 4
    two = SimplicialComplex(6, [(0, 1, 2), (3, 4, 5)])
    with pytest.raises(ComplexError):
        presentation_from_complex(two)


def test_boundary_definitions_agree():
    rng = random.Random(3)
    for X in (sphere(), csaszar_torus(),
              SimplicialComplex(4, [(0, 1, 2, 3)])):
        ordering = greedy_ordering(X)
        prefix = set()
        for s in ordering:
            prefix.add(s)
            assert prefix_boundary(X, prefix) == prefix_boundary_direct(X, prefix)


def test_width_properties():
    disk = SimplicialComplex(3, [(0, 1, 2)])
    ordering = greedy_ordering(disk)
    w, we = ordering_width(disk, ordering)
    assert w >= we >= 0
    # full prefix has empty boundary
    assert prefix_boundary(disk, set(disk.simplices())) == set()
    # cycle graph sweep stays narrow
    cyc = SimplicialComplex(6, [(i, (i + 1) % 6) for i in range(6)])
    w, we = ordering_width(cyc, greedy_ordering(cyc))
    assert we <= 3
    # banded torus sweeps have width independent of the sweep length
    widths = set()
    for cols in (3, 4, 5, 6):
        X = grid_torus(3, cols)
        w, we = ordering_width(X, band_ordering(3, cols))
        widths.add(we)
    assert len(widths) == 1


def test_validate_ordering_rejects_bad():
    disk = SimplicialComplex(3, [(0, 1, 2)])
    ordering = greedy_ordering(disk)
    bad = [ordering[-1]] + ordering[:-1]
    with pytest.raises(ComplexError):
        validate_ordering(disk, bad)
    with pytest.raises(ComplexError):
        validate_ordering(disk, ordering[:-1])


def test_surface_builders():
    assert grid_torus(3, 3).euler_characteristic() == 0
    assert genus2_surface().euler_characteristic() == -2
    assert homology(genus2_surface())[1] == (4, [])
    validate_ordering(grid_torus(3, 5), band_ordering(3, 5))
    validate_ordering(genus2_surface(), genus2_ordering())
    with pytest.raises(ComplexError):
        grid_torus(2, 5)


def test_complex_file_with_ordering(tmp_path):
    path = tmp_path / "t.cx"
    X = SimplicialComplex(3, [(0, 1, 2)])
    lines = ["vertices 3", "0 1 2", "order"]
    lines += [" ".join(map(str, s)) for s in greedy_ordering(X)]
    path.write_text("\n".join(lines) + "\n")
    Y, ordering = load_complex(str(path))
    assert ordering is not None
    validate_ordering(Y, ordering)
