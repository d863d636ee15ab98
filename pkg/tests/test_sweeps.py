"""Small instances of the exhaustive sweeps."""

from weakfraisse.sweeps import diam2_order, diam2_sweep, rigidity_sweep


def test_diam2_small_orders():
    counts, exceptions, branches = diam2_sweep(6)
    assert counts == {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156}
    assert exceptions == []
    assert set(branches) == {"strongly_regular"} and len(branches["strongly_regular"]) == 1


def test_diam2_parallel_matches_serial():
    assert diam2_sweep(6, jobs=2) == diam2_sweep(6)


def test_diam2_single_order():
    count, exceptions, branches = diam2_order(5)
    assert count == 34 and not exceptions and branches["strongly_regular"][0].degrees() == [2] * 5


def test_rigidity_small():
    report = rigidity_sweep(4, 6)
    assert report.ok and report.pairs > 0 and report.embeddings > 0


def test_rigidity_subsample_is_recorded():
    a = rigidity_sweep(4, 6, sample=5, seed=1)
    b = rigidity_sweep(4, 6, sample=5, seed=1)
    assert a.sampled == b.sampled and a.sampled
