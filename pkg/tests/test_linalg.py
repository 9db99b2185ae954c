import random
from fractions import Fraction

from hznf import algebra as alg
from hznf.algebra import E, Grading
from hznf.linalg import (
    Echelon,
    Subspace,
    inverse,
    keep_priority,
    matmul,
    nullspace,
    rank,
    rref,
    select_complement,
    solve_in_image,
)

F = Fraction


def random_matrix(rng, rows, cols, density=0.6):
    return [[F(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < density else F(0)
             for _ in range(cols)] for _ in range(rows)]


def test_rref_examples():
    I = [[F(int(i == j)) for j in range(3)] for i in range(3)]
    assert rref(I) == (I, [0, 1, 2])
    assert rref([[2, 4], [1, 2]]) == ([[1, 2], [0, 0]], [0])
    assert rref([[0, 0], [0, 0]]) == ([[0, 0], [0, 0]], [])


def test_rref_properties():
    rng = random.Random(1)
    for _ in range(30):
        M = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        R, piv = rref(M)
        assert rref(R) == (R, piv)
        assert rank(M) == len(piv)
        for i, p in enumerate(piv):
            assert R[i][p] == 1
            assert all(R[j][p] == 0 for j in range(len(R)) if j != i)
        for x in nullspace(M):
            assert all(sum(a * b for a, b in zip(row, x)) == 0 for row in M)
        assert len(nullspace(M)) == len(M[0]) - rank(M)


def test_nullspace_examples():
    assert nullspace([[1, 0], [0, 1]]) == []
    assert nullspace([[1, 1]]) == [[-1, 1]]


def test_solve_in_image():
    assert solve_in_image([[1, 2], [3, 4]], [0, 0]) == [0, 0]
    assert solve_in_image([[2]], [3]) == [F(3, 2)]
    assert solve_in_image([[1, 1], [2, 2]], [1, 3]) is None
    rng = random.Random(2)
    for _ in range(20):
        M = random_matrix(rng, 4, 5)
        x = [F(rng.randint(-3, 3)) for _ in range(5)]
        b = [sum(a * c for a, c in zip(row, x)) for row in M]
        y = solve_in_image(M, b)
        assert [sum(a * c for a, c in zip(row, y)) for row in M] == b


def test_inverse_roundtrip():
    rng = random.Random(3)
    for _ in range(10):
        M = random_matrix(rng, 4, 4, density=1.0)
        if rank(M) < 4:
            continue
        I = matmul(M, inverse(M))
        assert I == [[F(int(i == j)) for j in range(4)] for i in range(4)]


def test_subspace_contains():
    S = Subspace(["a", "b", "c"], [[1, 1, 0], [0, 1, 1]])
    assert S.dim == 2
    assert S.contains([1, 2, 1])
    assert not S.contains([1, 0, 0])


def test_echelon_tracks_combinations():
    ech = Echelon()
    vecs = [{"a": F(1), "b": F(2)}, {"b": F(1), "c": F(1)}]
    for i, v in enumerate(vecs):
        assert ech.insert(v, {i: F(1)}) is None
    dep = ech.insert({"a": F(1), "b": F(3), "c": F(1)}, {"new": F(1)})
    assert dep is not None
    tag, _ = dep
    # new - v0 - v1 = 0
    assert tag == {"new": 1, 0: -1, 1: -1}
    rem, tag = ech.reduce_full({"a": F(2), "b": F(5), "c": F(1)})
    assert rem == {}


def _state_image(n, v):
    # level-2 image at grade n: [S, v_1] with S of grade n - 1
    out = []
    for key in alg.monomials(n - 1, Grading(())):
        eff = alg.bracket(alg.AlgebraElement({key: 1}), v)
        vec = {k: c for k, c in eff.items() if alg.grade(k) == n}
        if vec:
            out.append(vec)
    return out


def test_style_complements_of_the_second_level():
    v1 = E(1, 1)
    coords = lambda n: list(alg.monomials(n, Grading(())))
    assert select_complement(_state_image(2, v1), coords(2)) == [(0, 1, ()), (2, 2, ())]
    assert select_complement(_state_image(3, v1), coords(3)) == [(1, 2, ())]
    assert select_complement(_state_image(4, v1), coords(4)) == [(0, 2, ())]


def test_complement_is_a_direct_sum():
    rng = random.Random(4)
    coords = [(l, k, ()) for k in range(5) for l in range(k + 1) if (l, k) != (0, 0)]
    for _ in range(20):
        image = [{c: F(rng.randint(-2, 2)) for c in rng.sample(coords, 3)} for _ in range(4)]
        image = [{c: x for c, x in v.items() if x} for v in image]
        kept = select_complement(image, coords)
        dense = [[v.get(c, 0) for c in coords] for v in image]
        r = rank(dense) if dense else 0
        assert len(kept) == len(coords) - r
        basis = dense + [[F(int(c == k)) for c in coords] for k in kept]
        assert rank(basis) == len(coords)
        assert kept == sorted(kept, key=keep_priority)


def test_determinism():
    M = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rref(M) == rref(M)
    assert nullspace(M) == nullspace(M)
