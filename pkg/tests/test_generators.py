import numpy as np
import pytest

from epecnash.algorithms import full_enumeration, pure_enumeration
from epecnash.generators import (
    GenConfig,
    InvalidConfig,
    SubsetSumInterval,
    gen_energy,
    gen_mne_hardness,
    gen_pne_hardness,
    product_gadget_leader,
)
from epecnash.leadergame import leader_feasible_set
from epecnash.lp import LinearProgram, LpStatus, solve_lp
from epecnash.polyhedra import enumerate_pieces
from epecnash.rng import Lcg
from epecnash.serialize import dumps, energy_to_dict

YES = SubsetSumInterval(q=(1,), p=2, t=4, r=1)
NO = SubsetSumInterval(q=(1, 2), p=1, t=3, r=1)


class TestSubsetSumInterval:
    def test_oracle(self):
        assert YES.decision() is True
        assert NO.decision() is False

    def test_invariants(self):
        with pytest.raises(ValueError):
            SubsetSumInterval(q=(1,), p=1, t=4, r=1)  # t-p != 2**r
        with pytest.raises(ValueError):
            SubsetSumInterval(q=(0, 1), p=1, t=3, r=1)
        with pytest.raises(ValueError):
            SubsetSumInterval(q=(1,), p=1, t=5, r=2)  # 2**r > 2**k


class TestEnergyGenerator:
    def test_determinism(self):
        cfg = GenConfig(seed=42)
        a = dumps(energy_to_dict(gen_energy(cfg)))
        b = dumps(energy_to_dict(gen_energy(cfg)))
        assert a == b

    def test_green_class_restriction(self):
        cfg = GenConfig(seed=7, classes=((0, 2),))
        inst = gen_energy(cfg)
        for c in inst.countries:
            for p in c.producers:
                assert p.emission_cost in (25.0, 50.0)

    def test_shape(self):
        cfg = GenConfig(seed=3, countries=2, followers=(3, 3))
        inst = gen_energy(cfg)
        assert len(inst.countries) == 2
        assert all(len(c.producers) == 3 for c in inst.countries)
        for c in inst.countries:
            assert c.price_cap < c.demand_intercept
            # cost menus run against the emission ladder
            for p in c.producers:
                if p.emission_cost <= 50:
                    assert p.lin_cost >= 275
                if p.emission_cost >= 300:
                    assert p.lin_cost <= 250

    def test_invalid_config(self):
        with pytest.raises(InvalidConfig):
            GenConfig(seed=0, countries=1, trade=True)
        with pytest.raises(InvalidConfig):
            GenConfig(seed=0, demand_alpha=())


class TestHardnessGenerators:
    def test_structural_shape(self):
        g = gen_pne_hardness(YES)
        assert len(g.leaders) == 2
        for leader in g.leaders:
            assert leader.followers is not None
            assert len(leader.followers.players) == 1
            assert leader.followers.players[0].q is None  # linear follower
            leader_feasible_set(leader)  # derives without error
        k, r = 1, 1
        big_p = k + 2 * r
        assert g.leaders[0].n_leader == 2 * big_p + 1
        assert g.leaders[1].n_leader == big_p + 1

    def test_pne_round_trip_matches_oracle(self):
        assert pure_enumeration(gen_pne_hardness(YES), budget=120).status == "PNE"
        assert (
            pure_enumeration(gen_pne_hardness(NO), budget=120).status
            == "NoEquilibrium"
        )

    def test_mne_round_trip_matches_oracle(self):
        assert full_enumeration(gen_mne_hardness(YES), budget=120).status in (
            "MNE",
            "PNE",
        )
        assert (
            full_enumeration(gen_mne_hardness(NO), budget=120).status
            == "NoEquilibrium"
        )

    def test_mne_game_structure(self):
        g = gen_mne_hardness(NO)
        assert len(g.leaders) == 2
        for leader in g.leaders:
            leader_feasible_set(leader)

    def test_product_gadget_projection(self):
        lead = product_gadget_leader()
        s = leader_feasible_set(lead)
        pieces = enumerate_pieces(s)
        assert pieces
        rng = Lcg(99)
        checked = 0
        while checked < 100:
            _, poly = pieces[rng.randint(len(pieces))]
            c = np.array([rng.uniform(-1, 1) for _ in range(s.n)])
            out = solve_lp(LinearProgram(c, poly.a, poly.b))
            if out.status is not LpStatus.OPTIMAL:
                continue
            h, y, x = out.point[0], out.point[1], out.point[2]
            assert h == pytest.approx(x * y, abs=1e-7)
            # each feasible point sits on one of the two branches
            assert (abs(y - 1) <= 1e-7 and abs(h - x) <= 1e-7) or (
                abs(y) <= 1e-7 and abs(h) <= 1e-7
            )
            checked += 1
