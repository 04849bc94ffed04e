import numpy as np
import pytest

from helpers import complete_edges, graph_from_edges
from polarnet.epidemic import EpidemicParams, RunRecord, Seeding
from polarnet.errors import DataError
from polarnet.experiment import (
    AllocationStrategy,
    RunSummary,
    allocate_vaccines,
    attack_rate,
    compare_scenarios,
    run_ensemble,
    summarize_run,
    time_to_peak,
    _aggregate,
)
from polarnet.generators import two_community
from polarnet.graph import Opinion
from polarnet.metrics import assortativity, mixing_matrix


def test_polarized_allocation_is_the_pro_set():
    g = two_community(40, 60, 0.1, 0.01, seed=1)
    flags = allocate_vaccines(g, AllocationStrategy.POLARIZED, rng=0)
    assert np.array_equal(flags, g.opinions == int(Opinion.PRO))
    assert int(flags.sum()) == 40


def test_homogeneous_allocation_count_and_all_pro_graph():
    g = two_community(40, 60, 0.1, 0.01, seed=1)
    flags = allocate_vaccines(g, AllocationStrategy.HOMOGENEOUS, rng=3)
    assert int(flags.sum()) == 40  # same dose count as the pro community
    all_pro = graph_from_edges(5, complete_edges(5), [1] * 5)
    assert allocate_vaccines(all_pro, AllocationStrategy.HOMOGENEOUS, rng=3).all()


def test_polarized_status_mixing_equals_opinion_mixing():
    g = two_community(50, 50, 0.15, 0.02, seed=4)
    flags = allocate_vaccines(g, AllocationStrategy.POLARIZED, rng=0)
    assert np.allclose(
        mixing_matrix(g, flags.astype(np.uint8)), mixing_matrix(g, g.opinions)
    )


def test_homogeneous_allocation_near_zero_assortativity():
    g = two_community(1000, 1000, 0.008, 0.00008, seed=2)
    values = []
    for s in range(30):
        flags = allocate_vaccines(g, AllocationStrategy.HOMOGENEOUS, rng=s)
        values.append(assortativity(mixing_matrix(g, flags.astype(np.uint8))))
    assert float(np.mean(np.abs(values))) < 0.05


def _summary_from_counts(new_unvacc, new_vacc, n_unvacc, n_vacc):
    vaccinated = np.zeros(n_unvacc + n_vacc, dtype=bool)
    vaccinated[n_unvacc:] = True
    record = RunRecord(
        new_unvacc=np.array(new_unvacc, dtype=np.int64),
        new_vacc=np.array(new_vacc, dtype=np.int64),
        final_status=np.zeros(n_unvacc + n_vacc, dtype=np.int8),
        vaccinated=vaccinated,
    )
    return summarize_run(record)


def test_attack_rate_hand_count():
    run = _summary_from_counts([1, 2, 2, 0], [0, 1, 0, 0], n_unvacc=10, n_vacc=5)
    assert attack_rate(run, "unvaccinated") == pytest.approx(0.5)
    assert attack_rate(run, "vaccinated") == pytest.approx(0.2)
    assert attack_rate(run, "all") == pytest.approx(6 / 15)
    assert run.ar_unvacc == pytest.approx(sum(run.daily_frac_unvacc))


def test_attack_rate_index_cases_only_when_no_spread():
    g = graph_from_edges(20, complete_edges(20))
    params = EpidemicParams(infection_rate=0.0)
    ens = run_ensemble(g, params, AllocationStrategy.HOMOGENEOUS, 4, 0, Seeding(5, "all"))
    assert ens.mean_attack_rate["all"] == pytest.approx(5 / 20)


def test_attack_rate_errors():
    run = _summary_from_counts([1, 0], [0, 0], n_unvacc=4, n_vacc=0)
    with pytest.raises(DataError):
        attack_rate(run, "vaccinated")
    with pytest.raises(DataError):
        attack_rate(run, "everyone")


def test_time_to_peak_earliest_argmax_and_scaling():
    run = _summary_from_counts([0, 1, 3, 2], [0, 0, 0, 0], 10, 5)
    assert time_to_peak(run, "unvaccinated") == 2
    scaled = _summary_from_counts([0, 2, 6, 4], [0, 0, 0, 0], 20, 5)
    assert time_to_peak(scaled, "unvaccinated") == 2
    tie = _summary_from_counts([0, 3, 3, 1], [0, 0, 0, 0], 10, 5)
    assert time_to_peak(tie, "unvaccinated") == 1
    with pytest.raises(DataError):
        time_to_peak(run, "vaccinated")


def test_single_run_ensemble_equals_its_run():
    g = two_community(80, 80, 0.06, 0.005, seed=3)
    ens = run_ensemble(g, EpidemicParams(), AllocationStrategy.POLARIZED, 1, 11)
    run = ens.runs[0]
    assert np.allclose(ens.mean_curves["unvaccinated"], run.daily_frac_unvacc)
    assert ens.mean_attack_rate["all"] == pytest.approx(run.ar_all)
    assert ens.mean_t_peak["unvaccinated"] == time_to_peak(run, "unvaccinated")


def test_ensemble_deterministic_and_thread_invariant():
    g = two_community(100, 100, 0.05, 0.005, seed=6)
    params = EpidemicParams()
    kw = dict(seeding=Seeding(3, "all"))
    a = run_ensemble(g, params, AllocationStrategy.HOMOGENEOUS, 8, 99, **kw)
    b = run_ensemble(g, params, AllocationStrategy.HOMOGENEOUS, 8, 99, **kw)
    c = run_ensemble(g, params, AllocationStrategy.HOMOGENEOUS, 8, 99, threads=4, **kw)
    for other in (b, c):
        for s in ("unvaccinated", "vaccinated", "all"):
            assert np.array_equal(a.mean_curves[s], other.mean_curves[s])
            assert a.mean_attack_rate[s] == other.mean_attack_rate[s]


def test_ensemble_aggregation_order_invariant():
    g = two_community(60, 60, 0.08, 0.01, seed=9)
    ens = run_ensemble(g, EpidemicParams(), AllocationStrategy.POLARIZED, 6, 5)
    again = _aggregate(ens.strategy, list(reversed(ens.runs)))
    for s in ("unvaccinated", "vaccinated", "all"):
        assert np.allclose(ens.mean_curves[s], again.mean_curves[s])
        assert np.allclose(ens.band_low[s], again.band_low[s])
        assert ens.mean_attack_rate[s] == pytest.approx(again.mean_attack_rate[s])


def test_homogeneous_redraw_toggle():
    g = two_community(100, 100, 0.05, 0.005, seed=2)
    params = EpidemicParams()
    fixed = run_ensemble(
        g, params, AllocationStrategy.HOMOGENEOUS, 5, 7, homogeneous_redraw=False
    )
    # identical allocation every run: vaccinated subpop sizes all equal AND
    # per-run vaccination patterns coincide (probed via equal n_vacc plus
    # determinism of the fixed draw)
    assert len({r.n_vacc for r in fixed.runs}) == 1
    redraw = run_ensemble(
        g, params, AllocationStrategy.HOMOGENEOUS, 5, 7, homogeneous_redraw=True
    )
    assert len({r.n_vacc for r in redraw.runs}) == 1  # count invariant either way
    # the two modes disagree on at least one curve with these seeds
    length = max(fixed.days, redraw.days)

    def padded(ens):
        out = np.zeros(length)
        out[: ens.days] = ens.mean_curves["unvaccinated"]
        return out

    assert not np.allclose(padded(fixed), padded(redraw))


def test_compare_no_effect_when_vaccine_useless():
    g = two_community(150, 150, 0.04, 0.004, seed=10)
    params = EpidemicParams(vet=0.0, vei=0.0)
    comp = compare_scenarios(g, params, 40, 21)
    assert 0.9 <= comp.ar_ratio["all"] <= 1.1


def test_compare_reports_all_subpops():
    g = two_community(120, 120, 0.05, 0.002, seed=12)
    comp = compare_scenarios(g, EpidemicParams(), 5, 3)
    for s in ("unvaccinated", "vaccinated", "all"):
        assert s in comp.ar_ratio
        assert s in comp.t_peak_diff
        assert comp.polarized.mean_curves[s].size == comp.polarized.days
