from dirac.exactlin import (GF, QQ, ZZ, in_span, kernel_basis, preimage, quotient_invariants, smith_form,
                            solve_linear, span_basis, subquotient_invariants)


def test_solve_identity():
    assert solve_linear([[1, 0], [0, 1]], [3, -4], ZZ) == [3, -4]


def test_solve_integer_obstruction():
    assert solve_linear([[2]], [3], ZZ) is None


def test_solve_mod_five():
    assert solve_linear([[2]], [3], GF(5)) == [4]


def test_kernel_zero_matrix():
    ker = kernel_basis([[0, 0]], QQ)
    assert sorted(ker) == [[0, 1], [1, 0]]


def test_kernel_invertible():
    assert kernel_basis([[1, 2], [3, 4]], QQ) == []


def test_kernel_integer():
    ker = kernel_basis([[2, -2]], ZZ)
    assert len(ker) == 1 and ker[0] in ([1, 1], [-1, -1])


def test_smith_factors():
    assert smith_form([[2, 0], [0, 0]])[0] == [2]
    assert smith_form([[1]])[0] == [1]
    assert smith_form([[2, 0], [0, 2]])[0] == [2, 2]


def test_smith_transform_diagonalizes():
    m = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    f, U, V = smith_form(m)
    prod = [[sum(U[i][k] * m[k][l] * V[l][j] for k in range(3) for l in range(3)) for j in range(3)]
            for i in range(3)]
    assert f == [2, 6, 12]
    assert all(prod[i][j] == (f[i] if i == j else 0) for i in range(3) for j in range(3))


def test_quotient_invariants_integer():
    inv = quotient_invariants(2, [[2, 0], [0, 3]], ZZ)
    assert inv.rank == 0 and inv.torsion == (6,)
    assert inv.render(ZZ) == "rank 0, torsion [6]"


def test_quotient_invariants_field():
    assert quotient_invariants(3, [[1, 1, 0]], QQ).render(QQ) == "dim 2"


def test_large_integer_system_stays_fast():
    # entries of mixed size used to blow up a naive elimination
    m = [[(7 ** (i + j)) % 1000003 - 500000 if (i * j) % 3 == 0 else 0 for j in range(12)] for i in range(30)]
    ker = kernel_basis(m, ZZ)
    for v in ker:
        assert all(sum(r[i] * v[i] for i in range(12)) == 0 for r in m)


def test_spans_and_subquotients():
    basis = span_basis([[2, 0], [0, 2], [2, 2]], 2, ZZ)
    assert len(basis) == 2
    assert in_span([4, 2], basis, ZZ)
    assert not in_span([1, 0], basis, ZZ)
    K = [[1, 0], [0, 1]]
    assert subquotient_invariants(2, K, [[2, 0]], ZZ).torsion == (2,)


def test_preimage():
    # x*(1,0) + y*(0,1) in span{(2,0)}
    pre = preimage([[1, 0], [0, 1]], [[2, 0]], 2, ZZ)
    assert pre == [[2, 0]] or pre == [[-2, 0]]
