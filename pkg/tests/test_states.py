import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from entropy_axioms import states
from entropy_axioms.errors import (
    DimensionMismatch,
    InvalidSpectrum,
    InvalidState,
    MultiBlockUnsupported,
    RankExceedsDim,
    SizeOverflow,
    ZeroVector,
)
from entropy_axioms.states import RationalSpectrum


def check_invariants(rho, tol=1e-10):
    total = 0.0
    labels = []
    for label, A in rho.blocks:
        labels.append(label)
        assert np.max(np.abs(A - A.conj().T), initial=0.0) <= tol
        assert np.linalg.eigvalsh(A)[0] >= -tol
        total += np.trace(A).real
    assert abs(total - 1) <= tol
    assert len(set(labels)) == len(labels)


class TestConstructors:
    def test_qlb_one_is_pure(self):
        rho = states.qlb(1)
        assert_allclose(rho.matrix(), [[1.0]])
        assert_allclose(states.spectrum(rho), [1.0])

    def test_qlb_two(self):
        assert_allclose(states.qlb(2).matrix(), np.diag([0.5, 0.5]))

    def test_qlb_four_spectrum(self):
        assert_allclose(states.spectrum(states.qlb(4)), [0.25] * 4)

    def test_qlb_rejects_zero(self):
        with pytest.raises(ValueError):
            states.qlb(0)

    def test_pure_basis_vector(self):
        assert_allclose(states.pure([1, 0]).matrix(), np.diag([1.0, 0.0]))

    def test_pure_normalizes(self):
        assert_allclose(states.pure([1, 1]).matrix(), np.full((2, 2), 0.5), atol=1e-15)
        assert_allclose(states.spectrum(states.pure([3, 4j, 0])), [1, 0, 0], atol=1e-14)

    def test_pure_zero_vector(self):
        with pytest.raises(ZeroVector):
            states.pure([0, 0])

    def test_from_rational(self):
        rho = states.from_rational_spectrum(RationalSpectrum.parse("2/3,1/3"))
        assert_allclose(rho.matrix(), np.diag([2 / 3, 1 / 3]))
        assert_allclose(states.from_rational_spectrum(RationalSpectrum.parse("1")).matrix(), [[1.0]])
        rho = states.from_rational_spectrum(RationalSpectrum.parse("1/4,1/2,1/4"))
        assert_allclose(rho.matrix(), np.diag([0.5, 0.25, 0.25]))

    def test_all_constructors_valid(self):
        outputs = [
            states.qlb(5),
            states.pure([1, 2j, -1]),
            states.from_rational_spectrum(RationalSpectrum.parse("1/2,1/3,1/6")),
            states.random_density(4, seed=3),
            states.random_density(5, rank=2, seed=4),
            states.tensor(states.qlb(2), states.random_density(3, seed=1)),
            states.tensor_power(states.random_density(2, seed=9), 3),
            states.conjugate(states.qlb(3), [states.random_unitary(3, seed=2)]),
            states.block_sum([(0.5, states.qlb(2)), (0.5, states.pure([1, 1], sector="1"))]),
        ]
        for rho in outputs:
            check_invariants(rho)


class TestDensityMatrixValidation:
    @pytest.mark.parametrize(
        "blocks, invariant",
        [
            ([], "nonempty"),
            ([("a", np.eye(1)), ("a", np.eye(1))], "unique sector labels"),
            (np.zeros((2, 3)), "square block"),
            (np.array([[0.5, 0.5], [0.0, 0.5]]), "hermitian"),
            (np.diag([1.5, -0.5]), "positive semidefinite"),
            (np.eye(2), "unit trace"),
            (np.array([[np.nan, 0], [0, 1]]), "finite entries"),
            (np.array([0.5, 0.6]), "unit trace"),
            (np.array([1.2, -0.2]), "positive semidefinite"),
        ],
    )
    def test_violation_names_invariant(self, blocks, invariant):
        with pytest.raises(InvalidState) as info:
            states.density_matrix(blocks)
        assert info.value.invariant == invariant
        assert invariant in str(info.value)

    def test_psd_tolerance(self):
        states.density_matrix(np.diag([1.0 + 5e-11, -5e-11]))

    def test_multi_block_trace(self):
        rho = states.density_matrix([("a", np.diag([0.25, 0.25])), ("b", np.diag([0.25, 0.25]))])
        assert rho.dims == [2, 2] and rho.dim == 4
        assert_allclose(rho.matrix(), np.eye(4) / 4)
        assert_allclose(rho.block("b"), np.eye(2) / 4)


class TestSpectrum:
    def test_qlb3(self):
        assert_allclose(states.spectrum(states.qlb(3)), [1 / 3] * 3)

    def test_two_sector_mixture(self):
        rho = states.block_sum([(0.5, states.qlb(2, "a")), (0.5, states.qlb(2, "b"))])
        assert_allclose(states.spectrum(rho), [0.25] * 4, atol=1e-15)

    def test_descending_and_normalized(self):
        for seed in range(20):
            s = states.spectrum(states.random_density(6, seed=seed))
            assert np.all(np.diff(s) <= 0)
            assert abs(s.sum() - 1) <= 1e-10

    def test_conjugation_invariance(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            d = int(rng.integers(1, 9))
            rho = states.random_density(d, rank=int(rng.integers(1, d + 1)), rng=rng)
            U = states.random_unitary(d, rng=rng)
            out = states.conjugate(rho, [U])
            assert np.max(np.abs(states.spectrum(out) - states.spectrum(rho))) <= 1e-9

    def test_conjugate_dict_and_errors(self):
        rho = states.block_sum([(0.5, states.qlb(2, "a")), (0.5, states.pure([1, 0], "b"))])
        U = states.random_unitary(2, seed=5)
        out = states.conjugate(rho, {"b": U})
        assert_allclose(out.block("a"), rho.block("a"))
        assert_allclose(out.block("b"), U @ rho.block("b") @ U.conj().T, atol=1e-15)
        with pytest.raises(DimensionMismatch):
            states.conjugate(rho, [U])
        with pytest.raises(DimensionMismatch):
            states.conjugate(rho, [U, np.eye(3)])


class TestTensorPower:
    def test_qlb_power(self):
        for N, n in [(2, 3), (3, 2), (2, 10)]:
            out = states.tensor_power(states.qlb(N), n)
            assert out.dim == N**n
            assert_allclose(states.spectrum(out), states.spectrum(states.qlb(N**n)), atol=1e-15)

    def test_power_one(self):
        rho = states.random_density(3, seed=1)
        assert_allclose(states.tensor_power(rho, 1).matrix(), rho.matrix())

    def test_two_thirds_square(self):
        rho = states.from_rational_spectrum(RationalSpectrum.parse("2/3,1/3"))
        assert_allclose(states.spectrum(states.tensor_power(rho, 2)), [4 / 9, 2 / 9, 2 / 9, 1 / 9], atol=1e-15)

    def test_outer_product_spectrum(self):
        for seed in range(30):
            rho = states.random_density(1 + seed % 4, seed=seed)
            s = states.spectrum(rho)
            expect = np.sort(np.outer(s, s).ravel())[::-1]
            got = states.spectrum(states.tensor_power(rho, 2))
            assert np.max(np.abs(got - expect)) <= 1e-10

    def test_matches_numpy_kron(self):
        rho = states.random_density(2, seed=8)
        A = rho.matrix()
        assert_allclose(states.tensor_power(rho, 3).matrix(), np.kron(np.kron(A, A), A), atol=1e-15)

    def test_errors(self):
        with pytest.raises(SizeOverflow):
            states.tensor_power(states.qlb(2), 13)
        with pytest.raises(SizeOverflow):
            states.tensor_power(states.qlb(3), 3, dim_cap=26)
        two = states.block_sum([(0.5, states.qlb(1, "a")), (0.5, states.qlb(1, "b"))])
        with pytest.raises(MultiBlockUnsupported):
            states.tensor_power(two, 2)


class TestRationalSpectrum:
    def test_parse_and_order(self):
        s = RationalSpectrum.parse("1/4, 1/2, 1/4")
        assert s.entries == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        assert s.rank == 3
        assert s.common_denominator == 4
        assert str(s) == "1/2,1/4,1/4"

    def test_common_denominator_lcm(self):
        assert RationalSpectrum.parse("1/2,1/3,1/6").common_denominator == 6
        assert RationalSpectrum.parse("3/10,7/15,7/30").common_denominator == 30

    def test_decimal_is_exact(self):
        assert RationalSpectrum.parse("0.5,0.5").entries == (Fraction(1, 2),) * 2

    @pytest.mark.parametrize("text", ["2/3,1/2", "1/2,1/2,0", "1/2,-1/2,1", "", "a,b", "1/0"])
    def test_rejects(self, text):
        with pytest.raises(InvalidSpectrum):
            RationalSpectrum.parse(text)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(1, 1000), min_size=1, max_size=12))
    def test_roundtrip(self, weights):
        total = sum(weights)
        s = RationalSpectrum(tuple(Fraction(w, total) for w in weights))
        got = states.spectrum(states.from_rational_spectrum(s))
        expect = np.array([float(e) for e in s.entries])
        assert np.max(np.abs(got - expect)) <= 1e-15


class TestRandom:
    def test_density_reproducible(self):
        a = states.random_density(5, rank=3, seed=42).matrix()
        b = states.random_density(5, rank=3, seed=42).matrix()
        assert np.array_equal(a, b)
        assert not np.array_equal(a, states.random_density(5, rank=3, seed=43).matrix())

    def test_density_rank(self):
        s = states.spectrum(states.random_density(6, rank=2, seed=1))
        assert np.all(s[:2] > 1e-6)
        assert np.all(np.abs(s[2:]) <= 1e-12)

    def test_rank_exceeds_dim(self):
        with pytest.raises(RankExceedsDim):
            states.random_density(2, rank=3)

    def test_unitary(self):
        for d in range(1, 10):
            U = states.random_unitary(d, seed=d)
            assert np.linalg.norm(U.conj().T @ U - np.eye(d)) <= 1e-10
        assert np.array_equal(states.random_unitary(4, seed=1), states.random_unitary(4, seed=1))


class TestStateFiles:
    def test_roundtrip_exact(self, tmp_path):
        rho = states.block_sum(
            [(0.25, states.random_density(3, seed=7)), (0.75, states.pure([1, 1j], sector="q=1"))]
        )
        path = tmp_path / "s.json"
        states.save(rho, path)
        back = states.load(path)
        assert back.sectors == rho.sectors
        for (_, A), (_, B) in zip(rho.blocks, back.blocks):
            assert np.array_equal(A, B)

    def test_format(self):
        data = json.loads(states.dumps(states.qlb(2)))
        assert data == {"blocks": [{"sector": "0", "dim": 2, "entries": [[0.5, 0], [0, 0], [0, 0], [0.5, 0]]}]}

    @pytest.mark.parametrize(
        "text, invariant",
        [
            ("not json", "valid JSON"),
            ("[]", "schema"),
            ('{"blocks": []}', "schema"),
            ('{"blocks": [{"sector": "0", "dim": 2, "entries": [[1, 0]]}]}', "entries length = dim^2"),
            ('{"blocks": [{"sector": "0", "dim": 1, "entries": [[1]]}]}', "schema"),
            ('{"blocks": [{"sector": "0", "dim": 1, "entries": [[2, 0]]}]}', "unit trace"),
            (
                '{"blocks": [{"sector": "0", "dim": 2, "entries": [[0.5,0],[0.5,0],[0,0],[0.5,0]]}]}',
                "hermitian",
            ),
            (
                '{"blocks": [{"sector": "0", "dim": 2, "entries": [[1.5,0],[0,0],[0,0],[-0.5,0]]}]}',
                "positive semidefinite",
            ),
            ('{"blocks": [{"sector": "a", "dim": 1, "entries": [[0.5,0]]},'
             ' {"sector": "a", "dim": 1, "entries": [[0.5,0]]}]}', "unique sector labels"),
        ],
    )
    def test_rejections(self, text, invariant):
        with pytest.raises(InvalidState) as info:
            states.loads(text)
        assert info.value.invariant == invariant
