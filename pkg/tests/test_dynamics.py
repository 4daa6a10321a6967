import random

import pytest

from ecoopinion import (
    BlowupError,
    EnvParams,
    GamePair,
    Payoff2x2,
    StateDerivative,
    SystemState,
    TrustMatrix,
    coupled_rhs,
    environment_rhs,
    expected_payoff,
    hawk_dove_pair,
    imitation_rate,
    interpolate,
    make_rhs,
    opinion_rhs,
    opinion_weighted_payoff,
    replicator_rhs,
)

HD_PAIR = hawk_dove_pair(4, 12, 7, 10)
PD_PAIR = GamePair(Payoff2x2(3.5, 1, 2, 0.75), Payoff2x2(4, 1, 4.5, 1.25))
ENV = EnvParams(theta=2.0, psi=-1.0)
TRUST = TrustMatrix(0.5, 0.0, 0.0, 0.5)


def random_matrix(rng, lo=-10.0, hi=10.0):
    return Payoff2x2(*(rng.uniform(lo, hi) for _ in range(4)))


def random_state(rng):
    return SystemState(rng.random(), rng.random(), rng.random())


class TestReplicator:
    def test_boundary_fixed_points_exact(self):
        rng = random.Random(1)
        for _ in range(50):
            a = random_matrix(rng)
            assert replicator_rhs(SystemState(0.0, rng.random(), rng.random()), a) == 0.0
            assert replicator_rhs(SystemState(1.0, rng.random(), rng.random()), a) == 0.0

    def test_vanishes_at_mixed_equilibrium(self):
        state = SystemState(1 / 3, 0.5, 0.5)
        assert abs(replicator_rhs(state, HD_PAIR.a0)) <= 1e-12

    def test_sign_matches_payoff_advantage(self):
        rng = random.Random(2)
        for _ in range(300):
            a = random_matrix(rng)
            x = rng.uniform(0.01, 0.99)
            state = SystemState(x, 0.5, 0.5)
            diff = expected_payoff(a, 1, x) - expected_payoff(a, 2, x)
            dx = replicator_rhs(state, a)
            if diff > 0:
                assert dx > 0
            elif diff < 0:
                assert dx < 0


class TestEnvironment:
    def test_logistic_boundary(self):
        for x in (0.0, 0.3, 1.0):
            assert environment_rhs(SystemState(x, 0.0, 0.5), ENV) == 0.0
            assert environment_rhs(SystemState(x, 1.0, 0.5), ENV) == 0.0

    def test_drift_null_share(self):
        # theta*x + psi*(1-x) = 0 at x = -psi/(theta - psi) = 1/3
        assert abs(environment_rhs(SystemState(1 / 3, 0.5, 0.5), ENV)) <= 1e-15

    def test_full_replenishment_rate(self):
        assert environment_rhs(SystemState(1.0, 0.5, 0.5), ENV) == 0.5


class TestOpinionWeightedPayoff:
    def test_zero_trust(self):
        zero = TrustMatrix(0, 0, 0, 0)
        state = SystemState(0.4, 0.2, 0.7)
        assert opinion_weighted_payoff(1, state, HD_PAIR.a0, zero) == 0.0
        assert opinion_weighted_payoff(2, state, HD_PAIR.a0, zero) == 0.0

    def test_half_trust_values(self):
        # u(e1, 0.5) = 0 and u(e2, 0.5) = 1 for the depleted hawk-dove game
        state = SystemState(0.5, 0.2, 0.7)
        assert opinion_weighted_payoff(1, state, HD_PAIR.a0, TRUST) == 0.0
        assert opinion_weighted_payoff(2, state, HD_PAIR.a0, TRUST) == 0.25

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            opinion_weighted_payoff(0, SystemState(0.5, 0.5, 0.5), HD_PAIR.a0, TRUST)


class TestImitationRate:
    def test_balanced_shares_and_payoffs(self):
        flat = Payoff2x2(1.0, 1.0, 1.0, 1.0)
        trust = TrustMatrix(0.3, 0.2, 0.25, 0.25)
        state = SystemState(0.5, 0.5, 0.5)
        s1 = opinion_weighted_payoff(1, state, flat, trust)
        s2 = opinion_weighted_payoff(2, state, flat, trust)
        assert s1 == s2
        assert imitation_rate(1, 2, state, flat, trust) == 0.0
        assert imitation_rate(2, 1, state, flat, trust) == 0.0

    def test_empty_target_opinion_clamps_to_zero(self):
        # p12 at y=1: target share is zero, so the argument is -S1 <= 0
        state = SystemState(0.5, 0.5, 1.0)
        assert imitation_rate(1, 2, state, PD_PAIR.a0, TRUST) == 0.0

    def test_matches_direct_formula(self):
        a_eff = interpolate(HD_PAIR, 0.5)
        state = SystemState(0.5, 0.5, 0.6)
        s1 = opinion_weighted_payoff(1, state, a_eff, TRUST)
        s2 = opinion_weighted_payoff(2, state, a_eff, TRUST)
        direct = 0.6 * s1 - (1 - 0.6) * s2
        direct = min(1.0, max(0.0, direct))
        assert abs(imitation_rate(2, 1, state, a_eff, TRUST) - direct) <= 1e-15

    def test_range_over_random_inputs(self):
        rng = random.Random(4)
        for _ in range(1000):
            state = random_state(rng)
            trust = TrustMatrix(rng.random(), rng.random(), rng.random(), rng.random())
            a = random_matrix(rng)
            for i, j in ((1, 2), (2, 1)):
                rate = imitation_rate(i, j, state, a, trust)
                assert 0.0 <= rate <= 1.0
                positive = imitation_rate(i, j, state, a, trust, clamp="positive")
                assert positive >= 0.0

    def test_rejects_same_opinion(self):
        with pytest.raises(ValueError):
            imitation_rate(1, 1, SystemState(0.5, 0.5, 0.5), HD_PAIR.a0, TRUST)

    def test_rejects_bad_clamp(self):
        with pytest.raises(ValueError):
            imitation_rate(1, 2, SystemState(0.5, 0.5, 0.5), HD_PAIR.a0, TRUST, clamp="none")


class TestOpinionRhs:
    def test_boundary_with_nonnegative_payoffs(self):
        for y in (0.0, 1.0):
            state = SystemState(0.5, 0.5, y)
            assert opinion_rhs(state, PD_PAIR.a0, TRUST) == 0.0

    def test_zero_trust_everywhere(self):
        rng = random.Random(6)
        zero = TrustMatrix(0, 0, 0, 0)
        for _ in range(50):
            assert opinion_rhs(random_state(rng), HD_PAIR.a0, zero) == 0.0

    def test_consistency_with_scalar_rates(self):
        rng = random.Random(8)
        for _ in range(200):
            state = random_state(rng)
            a = random_matrix(rng)
            trust = TrustMatrix(rng.random(), rng.random(), rng.random(), rng.random())
            y = state.y
            s1 = opinion_weighted_payoff(1, state, a, trust)
            s2 = opinion_weighted_payoff(2, state, a, trust)
            p21 = min(1.0, max(0.0, y * s1 - (1 - y) * s2))
            p12 = min(1.0, max(0.0, (1 - y) * s2 - y * s1))
            expect = (1 - y) * p21 - y * p12
            assert abs(opinion_rhs(state, a, trust) - expect) <= 1e-14


class TestCoupledRhs:
    def test_nonnegative_corner_is_fixed(self):
        d = coupled_rhs(SystemState(0.0, 0.0, 0.0), PD_PAIR, ENV, TRUST)
        assert (d.dx, d.dn, d.dy) == (0.0, 0.0, 0.0)

    def test_simultaneous_nulls(self):
        # x = 1/3 nulls the environment drift; y = 0 nulls the hawk-dove
        # replicator bracket through the depleted game's mixed equilibrium.
        d = coupled_rhs(SystemState(1 / 3, 0.5, 0.0), HD_PAIR, ENV, TRUST)
        assert abs(d.dx) <= 1e-12
        assert abs(d.dn) <= 1e-12

    def test_matches_independent_transcription(self):
        state = SystemState(0.5, 0.3, 0.45)
        d = coupled_rhs(state, HD_PAIR, ENV, TRUST, "env")
        tx, tn, ty = transcribe_rhs(state, HD_PAIR, ENV, TRUST)
        assert abs(d.dx - tx) <= 1e-14
        assert abs(d.dn - tn) <= 1e-14
        assert abs(d.dy - ty) <= 1e-14

    def test_rejects_escaped_state(self):
        with pytest.raises(BlowupError):
            coupled_rhs(SystemState(-1e-8, 0.5, 0.5), HD_PAIR, ENV, TRUST)
        with pytest.raises(BlowupError):
            coupled_rhs(SystemState(0.5, 1.0 + 1e-8, 0.5), HD_PAIR, ENV, TRUST)

    def test_accepts_rounding_overshoot(self):
        d = coupled_rhs(SystemState(-1e-10, 0.5, 0.5), HD_PAIR, ENV, TRUST)
        assert d.dx == 0.0

    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError):
            coupled_rhs(SystemState(0.5, 0.5, 0.5), HD_PAIR, ENV, TRUST, "both")

    def test_agrees_with_compiled_rhs(self):
        rng = random.Random(10)
        for pair in (HD_PAIR, PD_PAIR):
            for mode in ("env", "opinion"):
                f = make_rhs(pair, ENV, TRUST, mode)
                for _ in range(100):
                    state = random_state(rng)
                    d = coupled_rhs(state, pair, ENV, TRUST, mode)
                    fx, fn, fy = f(state.x, state.n, state.y)[:3]
                    assert (d.dx, d.dn, d.dy) == (fx, fn, fy)

    def test_decoupled_when_games_match(self):
        pair = GamePair(PD_PAIR.a0, PD_PAIR.a0)
        rng = random.Random(12)
        x = 0.37
        reference = coupled_rhs(SystemState(x, 0.5, 0.5), pair, ENV, TRUST).dx
        for _ in range(100):
            d = coupled_rhs(SystemState(x, rng.random(), rng.random()), pair, ENV, TRUST)
            assert d.dx == reference

    def test_protocol_mode_changes_opinion_line_only(self):
        state = SystemState(0.4, 0.2, 0.7)
        d_env = coupled_rhs(state, HD_PAIR, ENV, TRUST, "env")
        d_op = coupled_rhs(state, HD_PAIR, ENV, TRUST, "opinion")
        assert d_env.dx == d_op.dx
        assert d_env.dn == d_op.dn
        assert d_env.dy != d_op.dy


def transcribe_rhs(state, pair, env, trust):
    # Plain rewrite of the three coupled equations, kept independent of the
    # library's composition for cross-checking.
    x, n, y = state.x, state.n, state.y

    def matrix_at(w):
        return [
            [w * pair.a1.a11 + (1 - w) * pair.a0.a11, w * pair.a1.a12 + (1 - w) * pair.a0.a12],
            [w * pair.a1.a21 + (1 - w) * pair.a0.a21, w * pair.a1.a22 + (1 - w) * pair.a0.a22],
        ]

    def payoff(m, i):
        return m[i - 1][0] * x + m[i - 1][1] * (1 - x)

    ay = matrix_at(y)
    dx = x * (1 - x) * (payoff(ay, 1) - payoff(ay, 2))
    dn = n * (1 - n) * (env.theta * x + env.psi * (1 - x))
    an = matrix_at(n)
    b = [[trust.b11, trust.b12], [trust.b21, trust.b22]]
    s = [x * payoff(an, 1) * b[i][0] + (1 - x) * payoff(an, 2) * b[i][1] for i in (0, 1)]
    p21 = min(1.0, max(0.0, y * s[0] - (1 - y) * s[1]))
    p12 = min(1.0, max(0.0, (1 - y) * s[1] - y * s[0]))
    dy = (1 - y) * p21 - y * p12
    return dx, dn, dy


class TestValidation:
    def test_trust_entries_must_be_unit_interval(self):
        with pytest.raises(ValueError):
            TrustMatrix(1.5, 0.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            TrustMatrix(0.5, -0.1, 0.0, 0.5)

    def test_env_params_signs(self):
        with pytest.raises(ValueError):
            EnvParams(theta=0.0, psi=-1.0)
        with pytest.raises(ValueError):
            EnvParams(theta=2.0, psi=0.5)
        EnvParams(theta=2.0, psi=0.0)

    def test_state_derivative_must_be_finite(self):
        with pytest.raises(ValueError):
            StateDerivative(float("nan"), 0.0, 0.0)

    def test_system_state_must_be_finite(self):
        with pytest.raises(ValueError):
            SystemState(float("inf"), 0.5, 0.5)
