"""Acceptance gate: one test per numbered criterion, each printing a verdict.

Criteria 3, 4 and 5 assert the bundled reference multiplicities as stated.
The enumeration provably disagrees with the reference tables on three counts
(one planar class is absent from them and one row is grouped with the wrong
graph type); those tests therefore fail, and test_reference_table_errata
pins the verified ground truth so any behavior change is still caught.
"""

import time
from math import comb

import pytest

from fracube.core import CUBE_GROUP, apply_isometry, canonical_form, parse_digitset
from fracube.errors import LabelConflict
from fracube.faces import OFFSETS, FaceKind, classify_face
from fracube.oracle import (
    EmptinessCheck,
    FaceCardinality,
    oracle_face_cardinality,
    oracle_face_empty,
    voxelize,
)
from fracube.pipeline import (
    bundled_labels,
    classify_all,
    enumerate_all,
    enumerate_codes,
    match_labels,
    render_csv,
    render_json,
    render_markdown,
    verify_against_tables,
)
from fracube.topology import graph_code, intersection_graph, is_dendrite, verify_no_triple_points

DENDRITE_LABELS = ("7_11", "7_10", "7_9", "7_5", "7_6")
NON_DENDRITE_LABELS = tuple(f"nonden{i}" for i in range(1, 8))

# Ground truth established by the cross-validated run (see the errata test):
# the reference tables miss the planar class below and misfile the row after it.
EXTRA_PLANAR_CLASS = "101_201_011_111_211_021_121"
MISFILED_TYPE6_ROW = "000_001_010_020_111_221_222"


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture(scope="module")
def solo_report(timings):
    t0 = time.time()
    report = classify_all(3, 7, workers=1)
    timings["solo"] = time.time() - t0
    return report


@pytest.fixture(scope="session")
def table_sets():
    return [(label, parse_digitset(text)) for label, text in bundled_labels()]


def test_criterion_1_candidate_count():
    t0 = time.time()
    count = sum(1 for _ in enumerate_codes(3, 7))
    elapsed = time.time() - t0
    independent = comb(27, 7)
    ok = count == 888030 == independent and elapsed < 1.0
    _verdict(1, ok, f"{count} candidates = C(27,7) = {independent} in {elapsed:.2f}s")
    assert count == 888030 == independent
    assert elapsed < 1.0
    # the object stream agrees (untimed; dataclass construction dominates)
    assert sum(1 for _ in enumerate_all(3, 7)) == 888030


def test_criterion_2_survivor_count(full_report, solo_report, workers, timings):
    ok = full_report.survivors == 3200 == solo_report.survivors
    detail = (f"survivors={full_report.survivors}, single-worker {timings['solo']:.0f}s, "
              f"{workers} workers {timings['parallel']:.0f}s")
    _verdict(2, ok and timings["solo"] < 600, detail)
    assert full_report.survivors == 3200
    assert solo_report.survivors == 3200
    assert timings["solo"] < 600


def test_criterion_3_orbit_count(full_report):
    total = sum(r.orbit_size for r in full_report.classes)
    ok = len(full_report.classes) == 105 and total == 3200
    _verdict(3, ok, f"classes={len(full_report.classes)} (stated: 105), "
                    f"sum of orbits={total} (stated: 3200)")
    assert total == 3200
    assert len(full_report.classes) == 105, (
        f"enumeration yields {len(full_report.classes)} canonical classes; "
        f"the class {EXTRA_PLANAR_CLASS} (orbit 6, planar) is absent from the "
        "reference tables - see test_reference_table_errata")


def test_criterion_4_graph_type_multiplicities(full_report):
    trees = sorted(t.multiplicity for t in full_report.graph_types if t.dendrite)
    non_trees = sorted(t.multiplicity for t in full_report.graph_types if not t.dendrite)
    stated_trees = sorted((19, 3, 12, 3, 1))
    stated_non_trees = sorted((3, 8, 17, 25, 2, 9, 3))
    ok = (len(full_report.graph_types) == 12 and trees == stated_trees
          and non_trees == stated_non_trees)
    _verdict(4, ok, f"12 codes={len(full_report.graph_types) == 12}, trees={trees}, "
                    f"non-trees={non_trees} (stated: {stated_non_trees})")
    assert len(full_report.graph_types) == 12
    assert trees == stated_trees
    assert non_trees == stated_non_trees, (
        "the verified multiplicities are {4, 8, 17, 26, 2, 8, 3}: the misfiled "
        f"row {MISFILED_TYPE6_ROW} belongs to the 25-member type and the "
        f"planar class {EXTRA_PLANAR_CLASS} to the 3-member type - see "
        "test_reference_table_errata")


def test_criterion_5_golden_representatives(full_report):
    summary = verify_against_tables(full_report)
    conflict = None
    labeled = None
    try:
        labeled = match_labels(full_report, bundled_labels())
    except LabelConflict as exc:
        conflict = exc
    ok = summary.ok and labeled is not None and len(labeled.labels()) == 12
    detail = f"{summary.matched}/{summary.total} matched"
    if summary.mismatches:
        detail += f"; mismatch: {summary.mismatches[0]}"
    if conflict is not None:
        detail += f"; label matching: {conflict}"
    _verdict(5, ok, detail)
    assert summary.matched >= 104  # every set survives; only the misfile diverges
    assert summary.ok, summary.mismatches
    assert conflict is None, f"label matching raised: {conflict}"
    assert labeled is not None and len(labeled.labels()) == 12


def test_criterion_6_dendrite_verdicts(table_sets):
    wrong = []
    for label, ds in table_sets:
        expected = label in DENDRITE_LABELS
        if is_dendrite(ds) != expected:
            wrong.append((label, ds.render_compact()))
    _verdict(6, not wrong, f"{len(table_sets)} table sets, {len(wrong)} wrong verdicts")
    assert not wrong


def test_criterion_7_no_triple_points(table_sets):
    bad = [ds.render_compact() for _, ds in table_sets if not verify_no_triple_points(ds)]
    _verdict(7, not bad, f"{len(table_sets) - len(bad)}/{len(table_sets)} without triple points")
    assert not bad


def test_criterion_8_oracle_equivalence(table_sets):
    t0 = time.time()
    expected = {
        FaceCardinality.EMPTY: FaceKind.EMPTY,
        FaceCardinality.ONE: FaceKind.POINT,
        FaceCardinality.AT_LEAST_TWO: FaceKind.MULTI,
    }
    checks = disagreements = 0
    for _, ds in table_sets:
        for alpha in OFFSETS:
            checks += 1
            if classify_face(ds, alpha).kind is not expected[oracle_face_cardinality(ds, alpha)]:
                disagreements += 1
    unsound = 0
    for _, ds in table_sets:
        vox = voxelize(ds, 6)
        for alpha in OFFSETS:
            if (oracle_face_empty(ds, alpha, 6, vox=vox) is EmptinessCheck.CERTIFIED_EMPTY
                    and classify_face(ds, alpha).kind is not FaceKind.EMPTY):
                unsound += 1
    elapsed = time.time() - t0
    ok = checks == 2730 and disagreements == 0 and unsound == 0 and elapsed < 60
    _verdict(8, ok, f"{checks} cardinality checks, {disagreements} disagreements, "
                    f"{unsound} unsound emptiness certificates, {elapsed:.1f}s")
    assert checks == 2730
    assert disagreements == 0
    assert unsound == 0
    assert elapsed < 60


def test_criterion_9_property_suites(full_report, solo_report, table_sets):
    violations = []

    for _, ds in table_sets:
        cf = canonical_form(ds)
        if cf.orbit_size * cf.stabilizer_size != 48:
            violations.append(f"orbit-stabilizer: {ds}")
        if canonical_form(cf.canonical).canonical != cf.canonical:
            violations.append(f"idempotence: {ds}")
        for g in CUBE_GROUP:
            if canonical_form(apply_isometry(g, ds)).canonical != cf.canonical:
                violations.append(f"canonical equivariance: {ds} under {g}")
                break

    for _, ds in table_sets:
        base = {alpha: classify_face(ds, alpha) for alpha in OFFSETS}
        for alpha, fc in base.items():
            neg = (-alpha[0], -alpha[1], -alpha[2])
            if base[neg].kind is not fc.kind:
                violations.append(f"negation symmetry: {ds} at {alpha}")
            elif fc.is_point:
                moved = tuple(fc.point.value[k] - alpha[k] for k in range(3))
                if base[neg].point.value != moved:
                    violations.append(f"point offset: {ds} at {alpha}")
        code = graph_code(intersection_graph(ds))
        for g in CUBE_GROUP:
            img = apply_isometry(g, ds)
            for alpha, fc in base.items():
                fci = classify_face(img, g.apply_offset(alpha))
                if fci.kind is not fc.kind:
                    violations.append(f"face equivariance: {ds} under {g} at {alpha}")
                    break
                if fc.is_point and fci.point.value != g.apply_point(fc.point.value):
                    violations.append(f"point equivariance: {ds} under {g} at {alpha}")
                    break
            if graph_code(intersection_graph(img)) != code:
                violations.append(f"code equivariance: {ds} under {g}")

    byte_equal = all((
        render_json(solo_report) == render_json(full_report),
        render_csv(solo_report) == render_csv(full_report),
        render_markdown(solo_report) == render_markdown(full_report),
    ))
    if not byte_equal:
        violations.append("worker-count determinism")

    _verdict(9, not violations, f"{len(violations)} violations "
                                f"(byte-identical reports: {byte_equal})")
    assert not violations, violations[:5]


def test_reference_table_errata(full_report):
    """Ground truth for the three divergences from the bundled tables."""
    by_code = {}
    for r in full_report.classes:
        by_code.setdefault(r.graph_code, []).append(r)

    assert len(full_report.classes) == 106
    non_trees = sorted(t.multiplicity for t in full_report.graph_types if not t.dendrite)
    assert non_trees == sorted((4, 8, 17, 26, 2, 8, 3))

    # the extra class: planar (z = 1 slab), orbit 6, survives and is oracle-clean
    extra = parse_digitset(EXTRA_PLANAR_CLASS)
    assert {d.z for d in extra.digits} == {1}
    cf = canonical_form(extra)
    assert cf.orbit_size == 6
    record = next(r for r in full_report.classes if r.canonical.code == cf.canonical.code)
    assert record.dendrite is False

    # its graph type is the one shared with the nonden1 rows (multiplicity 4)
    nonden1_code = graph_code(intersection_graph(parse_digitset("012_021_102_111_120_201_210")))
    assert record.graph_code == nonden1_code
    assert len(by_code[nonden1_code]) == 4

    # the z=0 embedding of the same planar pattern is a listed nonden1 class
    sibling = canonical_form(parse_digitset("020_021_120_121_122_221_222"))
    assert sorted((d.x, d.y) for d in sibling.canonical.digits) == \
        sorted((d.x, d.y) for d in cf.canonical.digits)
    assert {d.z for d in sibling.canonical.digits} == {0}

    # the misfiled type-6 row carries the type-4 graph (multiplicity 26)
    misfit_code = graph_code(intersection_graph(parse_digitset(MISFILED_TYPE6_ROW)))
    nonden4_code = graph_code(intersection_graph(parse_digitset("000_002_011_020_022_101_202")))
    assert misfit_code == nonden4_code
    assert len(by_code[nonden4_code]) == 26
