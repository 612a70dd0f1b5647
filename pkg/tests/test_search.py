import pytest

from posetturan.constructions import middle_levels
from posetturan.lattice import DomainError, Family, format_family, parse_family, sigma
from posetturan.patterns import (
    contains,
    detect_y,
    dual,
    make_brush,
    make_butterfly,
    make_chain,
    make_diamond,
    make_fork,
    make_y,
)
from posetturan.search import (
    brute_force_extremal,
    candidate_order,
    conjecture_scan,
    extremal,
    is_free,
    witness_exceeding_sigma,
    y_pair,
)


def generic_free(n, forb):
    def check(bits):
        fam = Family.from_bits(n, bits)
        return all(contains(fam, p, m) is None for p, m in forb)
    return check


@pytest.mark.parametrize("n,forb,expected", [
    (3, list(y_pair(2)), 6),
    (4, list(y_pair(3)), 14),
    (4, [(make_chain(3), "weak")], 10),
    (3, [(make_chain(2), "weak")], 3),
    (4, [(make_fork(2), "induced"), (make_brush(2), "induced")], 6),
    (4, [(make_butterfly(), "weak")], 10),
])
def test_known_extremal_values(n, forb, expected):
    res = extremal(n, forb)
    assert res.exhaustive
    assert res.optimum == expected == len(res.witness)
    assert is_free(res.witness, forb)


@pytest.mark.parametrize("n,forb", [
    (3, [(make_diamond(), "weak")]),
    (3, [(make_diamond(), "induced")]),
    (3, [(make_y(2, 2), "induced")]),
    (3, [(make_butterfly(), "induced")]),
    (2, [(make_chain(2), "weak")]),
    (3, [(make_y(1, 3), "weak")]),
])
def test_matches_brute_force_at_small_n(n, forb):
    res = extremal(n, forb)
    best, bits = brute_force_extremal(n, generic_free(n, forb))
    assert res.optimum == best


def test_degenerate_inputs():
    res = extremal(1, [(make_chain(2), "weak")])
    assert res.optimum == 1 and res.exhaustive
    # a one-element pattern forbids every set
    res = extremal(3, [(make_chain(1), "weak")])
    assert res.optimum == 0 and len(res.witness) == 0 and res.exhaustive
    with pytest.raises(DomainError):
        extremal(3, [])
    with pytest.raises(DomainError):
        extremal(3, [(make_chain(2), "strong")])
    with pytest.raises(DomainError):
        extremal(7, [(make_chain(2), "weak")])


def test_candidate_order_middle_out():
    order = candidate_order(4)
    sizes = [s.bit_count() for s in order]
    assert sizes[:6] == [2] * 6
    assert sorted(order) == list(range(16))


def test_budget_exhaustion_is_flagged():
    res = extremal(4, y_pair(2), budget=50)
    assert not res.exhaustive and res.budget_hit
    assert res.optimum <= 10
    assert is_free(res.witness, y_pair(2))


def test_reproducible():
    a = extremal(4, y_pair(2))
    b = extremal(4, y_pair(2))
    assert (a.optimum, a.witness, a.nodes_explored) == (b.optimum, b.witness, b.nodes_explored)


def test_symmetry_switch_keeps_optimum():
    for forb in (y_pair(2), [(make_butterfly(), "weak")], [(make_diamond(), "weak")]):
        plain = extremal(4, forb)
        sym = extremal(4, forb, symmetry=True)
        assert plain.optimum == sym.optimum
        assert sym.nodes_explored <= plain.nodes_explored


def test_parallel_matches_serial():
    serial = extremal(4, y_pair(2))
    par = extremal(4, y_pair(2), workers=2)
    assert (par.optimum, par.witness, par.exhaustive) == (serial.optimum, serial.witness, True)


def test_lym_prune_is_heuristic_but_sound_here():
    res = extremal(4, y_pair(2), lym_k=2)
    assert res.optimum == 10 and res.lym_pruned and not res.exhaustive
    assert res.nodes_explored < extremal(4, y_pair(2)).nodes_explored


def test_monotone_in_forbidden_set():
    base = [(make_y(2, 2), "induced")]
    more = base + [(dual(make_y(2, 2)), "induced")]
    assert extremal(4, more).optimum <= extremal(4, base).optimum


@pytest.mark.parametrize("pats", [
    [make_y(2, 2), dual(make_y(2, 2))],
    [make_butterfly()],
    [make_diamond()],
    [make_fork(2), make_brush(2)],
])
def test_weak_optimum_at_most_induced(pats):
    for n in (3, 4):
        weak = extremal(n, [(p, "weak") for p in pats]).optimum
        induced = extremal(n, [(p, "induced") for p in pats]).optimum
        assert weak <= induced


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("k", range(1, 4))
def test_erdos_cross_check(n, k):
    if k > n + 1:
        pytest.skip("sigma undefined")
    assert extremal(n, [(make_chain(k + 1), "weak")]).optimum == sigma(n, k)


def test_witness_exceeding_sigma():
    # n=3, k=2: whatever exhaustive search decides
    best = extremal(3, [(make_y(2, 2), "induced")]).optimum
    w = witness_exceeding_sigma(3, 2, "Y")
    if best > sigma(3, 2):
        assert w is not None and len(w) > sigma(3, 2) and detect_y(w, 2, 2) is None
        assert parse_family(format_family(w)) == w
    else:
        assert w is None
    with pytest.raises(DomainError):
        witness_exceeding_sigma(3, 2, "Z")


def test_witness_exceeding_sigma_n4():
    for side in ("Y", "Y'"):
        w = witness_exceeding_sigma(4, 2, side)
        assert w is not None and len(w) > sigma(4, 2)
        assert detect_y(w, 2, 2, dualized=side == "Y'") is None
        assert parse_family(format_family(w)) == w


def test_conjecture_scan_rows():
    rows = conjecture_scan([2], [2, 3], [3])
    by = {(r.k, r.r, r.n): r for r in rows}
    assert by[(2, 2, 3)].optimum == 6 and by[(2, 2, 3)].consistent
    assert all(r.optimum >= r.sigma for r in rows)
    assert by[(2, 3, 3)].exhaustive


def test_middle_levels_feasible_for_all_y_pairs():
    for k in (2, 3):
        for r in (2, 3):
            for n in range(k + 1, 6):
                assert is_free(middle_levels(n, k), y_pair(k, r))
