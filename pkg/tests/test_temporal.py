import datetime as dt
import random

import pytest

from oracles import nd_stable_bruteforce
from v6taxon.addr_core import mask_of, parse_address
from v6taxon.temporal import (
    MissingDayError,
    ObservationLog,
    StabilityClass,
    day_index,
    epoch_label,
    format_day,
    nd_stable,
    parse_day,
    parse_day_range,
    stable_across,
    weekly_not_stable,
    weekly_unique_stable,
)

A = int(parse_address("2001:db8::a"))
B = int(parse_address("2001:db8::b"))
MAR17 = day_index(dt.date(2015, 3, 17))


def log_of(days):
    log = ObservationLog()
    for d, addrs in days.items():
        log.record_day(d, addrs)
    return log


def random_log(rng, n_addrs=30, span=30, density=0.25, prefix_bits=6):
    log = ObservationLog()
    addrs = [(rng.getrandbits(prefix_bits) << 64) | rng.getrandbits(8) for _ in range(n_addrs)]
    for d in range(span):
        log.record_day(d, [a for a in addrs if rng.random() < density])
    return log


def test_record_day():
    log = ObservationLog().record_day(10, [A]).record_day(10, [A])
    assert log[10] == {A}
    log.record_day(10, [B])
    assert log[10] == {A, B}
    log.record_day(11, [A])
    assert log[11] == {A} and log.sorted_day(10) == [A, B]


def test_worked_one_day_apart():
    log = log_of({MAR17: [A], MAR17 + 1: [A]})
    assert nd_stable(log, MAR17, 1) == {A}
    assert nd_stable(log, MAR17, 2) == set()


def test_worked_two_days_apart():
    log = log_of({MAR17: [A], MAR17 + 2: [A]})
    assert nd_stable(log, MAR17, 2) == {A}
    assert nd_stable(log, MAR17, 1) == {A}
    assert nd_stable(log, MAR17, 3) == set()


def test_single_observation_never_stable():
    log = log_of({MAR17: [A]})
    assert all(nd_stable(log, MAR17, n) == set() for n in range(1, 16))


def test_reference_day_required():
    log = log_of({MAR17: [A]})
    with pytest.raises(MissingDayError):
        nd_stable(log, MAR17 + 1, 1)
    with pytest.raises(ValueError):
        nd_stable(log, MAR17, 0)


def test_must_be_active_on_reference_day():
    log = log_of({MAR17: [B], MAR17 + 1: [A], MAR17 + 5: [A, B]})
    assert nd_stable(log, MAR17, 1) == {B}


def test_window_edges():
    log = log_of({MAR17: [A], MAR17 - 7: [A], MAR17 + 8: [B], MAR17 + 1: [B]})
    log.record_day(MAR17, [B])
    assert nd_stable(log, MAR17, 7) == {A}
    assert nd_stable(log, MAR17, 8) == set()
    # B's far observation is outside +7
    assert B not in nd_stable(log, MAR17, 2)
    # a pair on the far sides of the window spans 14 days
    log2 = log_of({MAR17 - 7: [A], MAR17: [A], MAR17 + 7: [A]})
    assert nd_stable(log2, MAR17, 14) == {A}
    assert nd_stable(log2, MAR17, 15) == set()
    assert nd_stable(log2, MAR17, 3, before=1, after=1) == set()


def test_slew_tolerance():
    log = log_of({MAR17: [A], MAR17 + 2: [A]})
    assert nd_stable(log, MAR17, 3) == set()
    assert nd_stable(log, MAR17, 3, slew_tolerance=1) == {A}
    one = log_of({MAR17: [A]})
    assert nd_stable(one, MAR17, 1, slew_tolerance=1) == set()


def test_matches_bruteforce_and_monotone():
    rng = random.Random(31)
    for _ in range(200):
        log = random_log(rng)
        ref = rng.randrange(3, 27)
        log.record_day(ref, [])
        prev = None
        for n in range(1, 17):
            got = nd_stable(log, ref, n)
            assert got == nd_stable_bruteforce(log.days, ref, n)
            if prev is not None:
                assert got <= prev
            if n > 14:
                assert got == set()
            prev = got


def test_prefix_generalization():
    rng = random.Random(37)
    for _ in range(100):
        log = random_log(rng, prefix_bits=2)
        ref = rng.randrange(5, 25)
        log.record_day(ref, [])
        mapped = log.derive(64)
        m = mask_of(64)
        for n in (1, 3, 5):
            per_addr = {a & m for a in nd_stable(log, ref, n)}
            per_64 = nd_stable(mapped, ref, n)
            assert per_addr <= per_64
            # classifying the mapped log equals mapping the days first, by construction
            direct = ObservationLog(64)
            for d, addrs in log.days.items():
                direct.record_day(d, {a & m for a in addrs})
            assert nd_stable(direct, ref, n) == per_64


def test_stable_across():
    log = log_of({0: [A, B], 3: [A], 400: [A], 402: [B]})
    assert stable_across(log, (400, 406), (0, 6)) == {A, B}
    log2 = log_of({0: [A, B], 400: [A]})
    assert stable_across(log2, (400, 406), (0, 6)) == {A}
    with pytest.raises(ValueError):
        stable_across(log, (0, 10), (5, 20))


def test_stable_across_symmetric():
    rng = random.Random(41)
    for _ in range(50):
        log = random_log(rng, span=60)
        a, b = (40, 46), (0, 6)
        assert stable_across(log, a, b) == stable_across(log, b, a)


def test_one_year_example():
    mar17_2014 = day_index(dt.date(2014, 3, 17))
    log = ObservationLog()
    for d in range(7):
        log.record_day(MAR17 + d, [A])
        log.record_day(mar17_2014 + d, [A])
    log.record_day(MAR17, [B])
    week15, week14 = (MAR17, MAR17 + 6), (mar17_2014, mar17_2014 + 6)
    assert stable_across(log, week15, week14) == {A}
    assert epoch_label(week15, week14) == "1y-stable (-1y)"
    sep = day_index(dt.date(2014, 9, 17))
    assert epoch_label(week15, (sep, sep + 6)) == "6m-stable (-6m)"


def test_weekly_union():
    week = list(range(MAR17, MAR17 + 7))
    # only qualifies with reference on day 0
    log = log_of({MAR17: [A], MAR17 - 3: [A]})
    for d in week:
        log.record_day(d, [])
    assert weekly_unique_stable(log, week, 3) == {A}


def test_weekly_always_active():
    week = list(range(MAR17, MAR17 + 7))
    log = log_of({d: [A] for d in range(MAR17 - 7, MAR17 + 14)})
    assert weekly_unique_stable(log, week, 3) == {A}
    assert weekly_unique_stable(log, week, 14) == {A}


def test_weekly_gap_of_four():
    week = list(range(MAR17, MAR17 + 7))
    log = log_of({d: [] for d in week})
    log.record_day(MAR17 + 2, [A]).record_day(MAR17 + 6, [A]).record_day(MAR17 + 6, [B])
    for n in range(1, 5):
        assert weekly_unique_stable(log, week, n) == {A}
    for n in range(5, 10):
        assert weekly_unique_stable(log, week, n) == set()
    assert weekly_not_stable(log, week, 5) == {A, B}
    assert weekly_not_stable(log, week, 3) == {B}


def test_weekly_needs_consecutive_days():
    log = log_of({d: [A] for d in range(7)})
    with pytest.raises(ValueError):
        weekly_unique_stable(log, [0, 1, 2, 3, 4, 5, 7], 1)


def test_labels_and_days():
    assert StabilityClass(3).label == "3d-stable (-7d,+7d)"
    assert format_day(parse_day("20150317")) == "20150317"
    assert parse_day_range("20150317-20150323") == (MAR17, MAR17 + 6)
    assert parse_day_range("20150317") == (MAR17, MAR17)
    for bad in ("2015-03-17", "20150399", "20150323-20150317"):
        with pytest.raises(ValueError):
            parse_day_range(bad)
