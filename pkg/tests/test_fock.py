import cmath
import math

import numpy as np
import pytest

from qkgsec import config
from qkgsec.errors import CapExceededError, CutoffError, DomainError
from qkgsec.fock.channels import LossChannel, apply_loss, kraus_operators, lose
from qkgsec.fock.metrology import (
    Generator,
    cat_decoherence,
    cat_decoherence_analytic,
    coherent_and_incoherent,
    decoherence_curve,
    eq3_prediction,
    photon_number_variance,
    qfi,
    trace_distance,
)
from qkgsec.fock.states import (
    Cat,
    Coherent,
    DensityOp,
    NumberSuperposition,
    PureState,
    SqueezedVacuum,
    make_state,
    pad,
    to_density,
)


def number_state(m, cutoff):
    amps = np.zeros((cutoff + 1, 1))
    amps[m, 0] = 1
    return PureState(cutoff, 0, amps)


def random_density(rng, c1, c2):
    d = (c1 + 1) * (c2 + 1)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return DensityOp(c1, c2, rho / np.trace(rho).real)


def beamsplitter_loss_oracle(m, eta):
    """Photon-number distribution after loss, from the binomial law."""
    return np.array([math.comb(m, j) * eta**j * (1 - eta) ** (m - j) for j in range(m + 1)])


class TestStates:
    def test_noon(self):
        s = make_state(NumberSuperposition(2, 0))
        assert (s.cutoff1, s.cutoff2) == (2, 2)
        assert s.amplitudes[2, 0] == s.amplitudes[0, 2] == pytest.approx(1 / math.sqrt(2))
        assert s.probabilities().sum() == pytest.approx(1)

    def test_number_superposition_errors(self):
        with pytest.raises(DomainError):
            make_state(NumberSuperposition(1, 1))
        with pytest.raises(CutoffError):
            make_state(NumberSuperposition(3, 0, cutoff1=2))

    def test_coherent_poisson(self):
        s = make_state(Coherent(1.5))
        p = s.probabilities()[:, 0]
        m = np.arange(p.size)
        poisson = np.array([math.exp(-2.25) * 2.25**k / math.factorial(k) for k in range(p.size)])
        assert p == pytest.approx(poisson / poisson.sum(), abs=1e-14)
        assert 1 - poisson.sum() <= config.settings.auto_norm_deficit

    def test_coherent_phase(self):
        s = make_state(Coherent(cmath.rect(1.0, 0.3), cutoff=30))
        assert cmath.phase(s.amplitudes[1, 0]) == pytest.approx(0.3)

    def test_vacuum(self):
        s = make_state(Coherent(0))
        assert s.cutoff1 == 0 and s.amplitudes[0, 0] == 1

    def test_explicit_cutoff_too_small(self):
        with pytest.raises(CutoffError):
            make_state(Coherent(2.0, cutoff=5))
        make_state(Coherent(2.0, cutoff=40))

    def test_squeezed_even_only(self):
        s = make_state(SqueezedVacuum(0.8))
        assert np.all(s.amplitudes[1::2] == 0)
        assert abs(s.amplitudes[0, 0]) ** 2 == pytest.approx(1 / math.cosh(0.8))

    def test_cat_parity(self):
        even = make_state(Cat(1.2, 1)).probabilities()[:, 0]
        odd = make_state(Cat(1.2, -1)).probabilities()[:, 0]
        assert even[1::2].max() == 0 and odd[0::2].max() == 0
        with pytest.raises(DomainError):
            make_state(Cat(0.0, -1))

    def test_joint_cap(self):
        with pytest.raises(CapExceededError):
            make_state(NumberSuperposition(70, 0))

    def test_pad(self):
        s = pad(make_state(Coherent(0.5, cutoff=20)), 25, 2)
        assert s.amplitudes.shape == (26, 3)
        with pytest.raises(DomainError):
            pad(s, 3, 3)

    def test_unnormalized_rejected(self):
        with pytest.raises(DomainError):
            PureState(1, 0, np.array([[1.0], [1.0]]))

    def test_to_density(self):
        s = make_state(NumberSuperposition(1, 0))
        rho = to_density([(s, 1.0)], coherent=True)
        assert np.trace(rho.matrix) == pytest.approx(1)
        assert np.abs(rho.matrix @ rho.matrix - rho.matrix).max() <= 1e-15
        mix = to_density([(number_state(0, 1), 0.5), (number_state(1, 1), 0.5)])
        assert np.diag(mix.matrix).real.tolist() == [0.5, 0.5]
        with pytest.raises(DomainError):
            to_density([(s, 0.5)])
        with pytest.raises(DomainError):
            to_density([(number_state(0, 1), 0.5), (number_state(1, 1), 0.5)], coherent=True)


class TestLoss:
    def test_kraus_completeness(self):
        a = kraus_operators(0.37, 6)
        assert np.einsum("kai,kaj->ij", a, a) == pytest.approx(np.eye(7), abs=1e-14)

    def test_identity_and_vacuum(self):
        rho = to_density([(make_state(Coherent(1.0, cutoff=25)), 1.0)], coherent=True)
        assert apply_loss(rho, LossChannel(1.0, 1)).matrix == pytest.approx(rho.matrix, abs=1e-15)
        out = apply_loss(rho, LossChannel(0.0, 1)).matrix
        assert out[0, 0] == pytest.approx(1) and np.abs(out).sum() == pytest.approx(1)

    def test_single_photon(self):
        rho = to_density([(number_state(1, 1), 1.0)], coherent=True)
        assert apply_loss(rho, LossChannel(0.5, 1)).matrix == pytest.approx(np.diag([0.5, 0.5]))

    @pytest.mark.parametrize("m", [1, 3, 6])
    @pytest.mark.parametrize("eta", [0.2, 0.75])
    def test_binomial_photon_statistics(self, m, eta):
        rho = to_density([(number_state(m, m), 1.0)], coherent=True)
        out = np.diag(apply_loss(rho, LossChannel(eta, 1)).matrix).real
        assert out == pytest.approx(beamsplitter_loss_oracle(m, eta), abs=1e-14)

    def test_coherent_stays_coherent(self):
        alpha, eta = 1.3, 0.6
        rho = to_density([(make_state(Coherent(alpha, cutoff=40)), 1.0)], coherent=True)
        out = apply_loss(rho, LossChannel(eta, 1)).matrix
        expect = make_state(Coherent(math.sqrt(eta) * alpha, cutoff=40)).vector()
        assert out == pytest.approx(np.outer(expect, expect.conj()), abs=1e-12)

    def test_composition(self):
        rho = random_density(np.random.default_rng(1), 4, 3)
        twice = apply_loss(apply_loss(rho, LossChannel(0.8)), LossChannel(0.5))
        once = apply_loss(rho, LossChannel(0.4))
        assert twice.matrix == pytest.approx(once.matrix, abs=1e-13)

    def test_modes_commute_and_both(self):
        rho = random_density(np.random.default_rng(2), 3, 2)
        a = apply_loss(apply_loss(rho, LossChannel(0.7, 1)), LossChannel(0.3, 2))
        b = apply_loss(apply_loss(rho, LossChannel(0.3, 2)), LossChannel(0.7, 1))
        assert a.matrix == pytest.approx(b.matrix, abs=1e-14)
        c = apply_loss(apply_loss(rho, LossChannel(0.5, 1)), LossChannel(0.5, 2))
        assert apply_loss(rho, LossChannel(0.5)).matrix == pytest.approx(c.matrix, abs=1e-14)

    def test_trace_and_positivity(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            rho = random_density(rng, int(rng.integers(0, 5)), int(rng.integers(0, 5)))
            out = apply_loss(rho, LossChannel(float(rng.random())))
            assert np.trace(out.matrix).real == pytest.approx(1, abs=1e-12)
            assert np.linalg.eigvalsh(out.matrix).min() >= -1e-12

    def test_channel_validation(self):
        with pytest.raises(DomainError):
            LossChannel(1.5)
        with pytest.raises(DomainError):
            LossChannel(0.5, 3)

    def test_lose_is_linear(self):
        rng = np.random.default_rng(4)
        x, y = rng.normal(size=(2, 9, 9))
        ch = LossChannel(0.35)
        assert lose(2 * x - y, 2, 2, ch) == pytest.approx(2 * lose(x, 2, 2, ch) - lose(y, 2, 2, ch))


class TestTraceDistance:
    def test_properties(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            a, b, c = (random_density(rng, 2, 2) for _ in range(3))
            ab = trace_distance(a, b)
            assert ab == pytest.approx(trace_distance(b, a), abs=1e-12)
            assert ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-12
            assert 0 <= ab <= 2 + 1e-12
            assert ab == pytest.approx(np.abs(np.linalg.eigvalsh(a.matrix - b.matrix)).sum(), abs=1e-10)
            assert trace_distance(a, a) == 0

    def test_phase_rotation_invariance(self):
        rng = np.random.default_rng(6)
        a, b = random_density(rng, 3, 1), random_density(rng, 3, 1)
        g = Generator.TOTAL_NUMBER.diagonal(3, 1).reshape(-1)
        u = np.diag(np.exp(0.7j * g))
        ra = DensityOp(3, 1, u @ a.matrix @ u.conj().T)
        rb = DensityOp(3, 1, u @ b.matrix @ u.conj().T)
        assert trace_distance(ra, rb) == pytest.approx(trace_distance(a, b), abs=1e-12)

    def test_orthogonal_states(self):
        a = to_density([(number_state(0, 1), 1.0)], coherent=True)
        b = to_density([(number_state(1, 1), 1.0)], coherent=True)
        assert trace_distance(a, b) == pytest.approx(2)

    def test_cutoff_mismatch(self):
        with pytest.raises(DomainError):
            trace_distance(to_density([(number_state(0, 1), 1.0)]), to_density([(number_state(0, 2), 1.0)]))


class TestDecoherence:
    def test_single_photon_noon(self):
        rho, inc = coherent_and_incoherent(1, 0)
        assert trace_distance(rho, inc) == pytest.approx(1.0)
        rows = decoherence_curve(1, 0, [0.0, 0.3, 1.0])
        assert [r["trace_distance"] for r in rows] == pytest.approx([0.0, 0.3, 1.0], abs=1e-14)
        assert rows[0]["ratio"] is None

    @pytest.mark.parametrize("n", [1, 2, 5, 10, 20])
    def test_noon_matches_prediction(self, n):
        for r in decoherence_curve(n, 0, np.linspace(0.1, 0.9, 9)):
            assert abs(r["trace_distance"] - 0.5 * r["eq3_prediction"]) <= 1e-10
            assert abs(r["ratio"] - 0.5) <= 1e-12

    def test_separate_channel_agrees(self):
        rho, inc = coherent_and_incoherent(5, 0)
        ch = LossChannel(0.6)
        assert trace_distance(apply_loss(rho, ch), apply_loss(inc, ch)) == pytest.approx(0.6**5, abs=1e-10)

    def test_monotone_in_eta(self):
        d = [r["trace_distance"] for r in decoherence_curve(3, 1, np.linspace(0, 1, 21))]
        assert all(x <= y + 1e-14 for x, y in zip(d, d[1:]))

    def test_eq3_prediction(self):
        assert eq3_prediction(20, 0, 0.95) == pytest.approx(2 * 0.95**20)


class TestQFI:
    def test_number_state_has_zero(self):
        r = qfi(number_state(3, 5), Generator.NUMBER_MODE1)
        assert r.qfi == 0 and r.phase_resolution == math.inf

    @pytest.mark.parametrize("n", [1, 4, 10, 30])
    def test_noon_heisenberg(self, n):
        s = make_state(NumberSuperposition(n, 0))
        assert qfi(s, Generator.NUMBER_MODE1).qfi == pytest.approx(n**2, rel=1e-12)
        assert qfi(s, Generator.RELATIVE_NUMBER).qfi == pytest.approx(n**2, rel=1e-12)
        assert qfi(s, Generator.TOTAL_NUMBER).qfi == 0
        assert qfi(s, Generator.NUMBER_MODE1).phase_resolution == pytest.approx(1 / n)

    def test_adjacent_pair(self):
        s = make_state(NumberSuperposition(6, 5))
        assert qfi(s, Generator.RELATIVE_NUMBER).qfi == pytest.approx(1)
        assert qfi(s, Generator.TOTAL_NUMBER).qfi == 0

    @pytest.mark.parametrize("alpha", [0.5, 1, 1.5, 2, 3])
    def test_coherent_shot_noise(self, alpha):
        assert qfi(make_state(Coherent(alpha)), Generator.NUMBER_MODE1).qfi == pytest.approx(4 * alpha**2, abs=1e-8)

    @pytest.mark.parametrize("r", [0.1, 0.5, 1.0, 1.5])
    def test_squeezed_variance(self, r):
        var = photon_number_variance(make_state(SqueezedVacuum(r)))
        assert var == pytest.approx(2 * math.sinh(r) ** 2 * math.cosh(r) ** 2, rel=1e-9)

    def test_global_phase_invariance(self):
        s = make_state(Coherent(1.1, cutoff=30))
        t = PureState(s.cutoff1, s.cutoff2, s.amplitudes * cmath.exp(0.4j))
        assert qfi(t, Generator.NUMBER_MODE1).qfi == pytest.approx(qfi(s, Generator.NUMBER_MODE1).qfi, rel=1e-14)


class TestCat:
    def test_no_loss(self):
        c = cat_decoherence(1.5, 1.0)
        assert c.coherence_factor == 1.0
        assert c.distance == pytest.approx(c.analytic_distance, abs=1e-10)

    def test_vacuum_cat(self):
        assert cat_decoherence_analytic(0.0, 0.3) == (0.0, 1.0)
        assert cat_decoherence(0.0, 0.3).distance == pytest.approx(0, abs=1e-15)

    def test_weak_loss_large_cat(self):
        c = cat_decoherence(2.0, 0.99)
        assert c.coherence_factor == pytest.approx(math.exp(-0.08))
        assert abs(c.distance - c.analytic_distance) <= 1e-6

    @pytest.mark.parametrize("parity", [1, -1])
    @pytest.mark.parametrize("eta", [0.1, 0.5, 0.9])
    def test_numeric_matches_closed_form(self, parity, eta):
        c = cat_decoherence(complex(1.0, 0.7), eta, parity)
        assert c.distance == pytest.approx(c.analytic_distance, abs=1e-9)
