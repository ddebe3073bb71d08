"""End-to-end acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line (visible with ``-s``) and the same lines
are repeated in the pytest terminal summary.
"""

import contextlib
import io
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from fastsobel import cli
from fastsobel.errors import MissingRow, WeightOverflow
from fastsobel.filters import FilterParams, decompose_kd_minus, kernels, make_kd_sum_diff, validate_params
from fastsobel.metrics import measure
from fastsobel.oracle import conv2d_valid, diag_via_sum_diff, sobel3_2d, sobel5_4d
from fastsobel.pipeline import RowRing, plan_strips, run_stream, run_stream_3x3, schedule5
from fastsobel.pipeline.rows import GD_PLUS_TERMS
from fastsobel.synth import random_image

LANES = (8, 16, 32, 64)


@pytest.fixture
def report(request):
    lines = []

    def note(detail):
        lines.append(detail)

    yield note
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    title = request.node.function.__doc__.strip().splitlines()[0]
    detail = "; ".join(lines)
    line = f"{'FAIL' if failed else 'PASS'}  {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print("\n" + line)


def equivalence_images(count, rng):
    """Seeded images from 5x5 up to 512x512, log-uniform sides, plus structured cases."""
    sizes = [(5, 5), (512, 512), (5, 512), (512, 5), (6, 7), (33, 200)]
    while len(sizes) < count - 4:
        w, h = np.exp(rng.uniform(np.log(5), np.log(512), 2)).astype(int)
        sizes.append((int(w), int(h)))
    imgs = [random_image(w, h, seed) for seed, (w, h) in enumerate(sizes)]
    checker = (np.indices((40, 45)).sum(axis=0) % 2 * 255).astype(np.uint8)
    impulse = np.zeros((21, 17), np.uint8)
    impulse[10, 8] = 255
    imgs += [checker, impulse, np.full((30, 30), 255, np.uint8), np.tile(np.arange(64, dtype=np.uint8) * 4, (9, 1))]
    return imgs


def random_valid_params(rng, count):
    out = []
    while len(out) < count:
        q = int(rng.integers(1, 4))
        a = q * q * int(rng.integers(1, 4))
        b, m, n = (Fraction(int(v), q) for v in rng.integers(1, 16, 3))
        p = FilterParams(a, b, m, n)
        try:
            validate_params(p)
        except WeightOverflow:
            continue
        out.append(p)
    return out


def test_oracle_equivalence(report):
    """1. fast pipeline bit-identical to the oracle over 200+ images, all lanes, prefetch on/off"""
    t0 = time.perf_counter()
    imgs = equivalence_images(204, np.random.default_rng(1))
    runs = 0
    for img in imgs:
        ref = sobel5_4d(img)
        for lanes in LANES:
            for prefetch in (True, False):
                got = run_stream(img, lanes=lanes, prefetch=prefetch)
                for a, b in zip(got[:4], ref[:4]):
                    np.testing.assert_array_equal(a, b)
                np.testing.assert_allclose(got.g, ref.g, rtol=1e-9, atol=0)
                runs += 1
    elapsed = time.perf_counter() - t0
    report(f"{len(imgs)} images, {runs} runs, {elapsed:.1f}s")
    assert len(imgs) >= 200
    assert elapsed < 120


def test_ssim_exact(report):
    """2. verify reports SSIM exactly 1.0"""
    cases = [["--random", f"{w}x{h}", "--seed", str(s)] for s, (w, h) in
             enumerate([(5, 5), (64, 64), (127, 33), (300, 200), (512, 512)])]
    cases += [c + ["--operator", "sobel3_2d"] for c in cases[:2]]
    cases += [cases[1] + ["--lanes", "8", "--prefetch", "off"]]
    for argv in cases:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli.main(["verify", *argv])
        out = buf.getvalue()
        ssim = float(out.split("ssim=", 1)[1].split()[0])
        assert code == 0, out
        assert ssim == 1.0, out
    report(f"{len(cases)} images")


def test_diagonal_identities(report):
    """3. kd sum/difference identities for 1000 parameter sets, parity on 100 images"""
    rng = np.random.default_rng(3)
    params = random_valid_params(rng, 1000)
    for p in params:
        _, _, kd, kdt = kernels(p)
        kd_plus, kd_minus = make_kd_sum_diff(p)
        assert (kd_plus + kd_minus == 2 * kd).all()
        assert (kd_plus - kd_minus == 2 * kdt).all()
        s1, s2 = decompose_kd_minus(p)
        assert (s1.outer() - s2.outer() == kd_minus).all()
    for k in range(100):
        p = params[k]
        img = random_image(int(rng.integers(5, 40)), int(rng.integers(5, 40)), 1000 + k)
        kd_plus, kd_minus = make_kd_sum_diff(p)
        g_plus = conv2d_valid(img, kd_plus)
        g_minus = conv2d_valid(img, kd_minus)
        assert not ((g_plus + g_minus) & 1).any()
        ref = sobel5_4d(img, p)
        gd, gdt = diag_via_sum_diff(img, p)
        assert (gd == ref.gd).all() and (gdt == ref.gdt).all()
    report(f"{len(params)} parameter sets, {sum(p.denominator > 1 for p in params)} fractional")


def test_reuse_budget(report):
    """4. 3 kd_plus row convolutions per incremental row vs 4 naive, none for kd_minus"""
    img = random_image(1024, 1024, 4)
    reuse = run_stream(img).counters
    naive = run_stream(img, schedule="naive").counters
    per_row, naive_row = reuse.kd_per_row(), naive.kd_per_row()
    report(f"reuse {per_row:g}, naive {naive_row:g}, saving {1 - per_row / naive_row:.0%}")
    assert per_row == 3 and naive_row == 4
    assert set(reuse.row_conv5) == {"F", "H", "k0", "k1"}
    # one F and one H per loaded row; kd_minus adds no 5-tap row pass
    assert reuse.row_conv5["F"] == reuse.row_conv5["H"] == reuse.row_diff
    assert reuse.steady["F"] == reuse.steady["H"] == reuse.steady_rows


def test_speed(report):
    """5. fast >= 2.5x oracle MPS at 2048x2048; 1024 -> 2048 runtime scaling 4x +/- 50%"""
    big = random_image(2048, 2048, 5)
    small = random_image(1024, 1024, 5)
    oracle = measure(lambda: sobel5_4d(big), 3, width=2048, height=2048)
    fast = measure(lambda: run_stream(big), 5, width=2048, height=2048)
    fast_small = measure(lambda: run_stream(small), 5, width=1024, height=1024)
    ratio = fast.mps / oracle.mps
    scaling = fast.mean_s / fast_small.mean_s
    report(f"oracle {oracle.mps:.1f} MPS, fast {fast.mps:.1f} MPS, ratio {ratio:.2f}x, scaling {scaling:.2f}x")
    assert ratio >= 2.5
    assert 2.0 <= scaling <= 6.0


def test_ring_index_law(report):
    """6. mod-5 / mod-6 slots never evict a live row, all sequences up to 64 rows"""
    checked = 0
    for prefetch, depth in ((False, 5), (True, 6)):
        for n in range(5, 65):
            for reuse in (True, False):
                rings = {name: RowRing(depth, name) for name in ("pix", "F", "H", "D", "kd")}
                for event in schedule5(n, prefetch, reuse):
                    kind, u = event[:2]
                    if kind == "load":
                        for name in ("pix", "F", "H", "D"):
                            rings[name].put(u, u)
                    elif kind == "kd":
                        rings["pix"].get(u)
                        rings["kd"].put(u, u)
                    else:
                        for name in ("F", "H", "D"):
                            rings[name].window(u)
                        for offset, _, _ in GD_PLUS_TERMS:
                            rings["kd"].get(u + offset)
                checked += 1
    # negative control: prefetch needs the sixth slot
    starved = 0
    for n in range(6, 65):
        ring = RowRing(5)
        try:
            for event in schedule5(n, True, False):
                if event[0] == "load":
                    ring.put(event[1], None)
                elif event[0] == "emit":
                    ring.window(event[1])
        except MissingRow:
            starved += 1
    report(f"{checked} schedules clean; depth 5 with prefetch fails {starved}/59")
    assert starved == 59


def test_3x3_baseline(report):
    """7. streaming 3x3 path bit-identical to the two-direction oracle on 100 images"""
    rng = np.random.default_rng(7)
    for k in range(100):
        img = random_image(int(rng.integers(3, 200)), int(rng.integers(3, 200)), k)
        lanes = int(rng.choice(LANES))
        got = run_stream_3x3(img, lanes=lanes, prefetch=bool(k % 2))
        ref = sobel3_2d(img)
        assert (got.gx == ref.gx).all() and (got.gy == ref.gy).all()
        np.testing.assert_allclose(got.g, ref.g, rtol=1e-9, atol=0)
    report("100 images")


def test_strip_coverage(report):
    """8. plan_strips covers every output column once with 2r input overlap"""
    plans = 0
    for r in (1, 2):
        for lanes in LANES:
            for width in range(2 * r + 1, 4097):
                plan = plan_strips(width, lanes, r)
                starts = np.array([s.out_offset for s in plan.strips])
                widths = np.array([s.out_width for s in plan.strips])
                ins = np.array([s.in_offset for s in plan.strips])
                ends = starts + widths
                assert starts[0] == 0 and ends[-1] == width - 2 * r
                assert (starts[1:] == ends[:-1]).all()
                assert (widths > 0).all()
                assert ((ins[:-1] + widths[:-1] + 2 * r) - ins[1:] == 2 * r).all()
                assert ins[-1] + widths[-1] + 2 * r <= width
                plans += 1
    report(f"{plans} plans")
