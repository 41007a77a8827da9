"""Rehearse every acceptance check and print the values to freeze."""

import math
import os
import subprocess
import sys
import time
import traceback
from collections import Counter
from fractions import Fraction

import numpy as np
from scipy import stats as scistats

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "tests"))
import oracles

from perfectgen import lndist, partitions
from perfectgen.exactalgs import (
    alpha_exact,
    chromatic_index,
    connectivity,
    omega_exact,
)
from perfectgen import generator
from perfectgen.graphcore import Graph, bit_list, complement, degrees
from perfectgen.graphon import StepGraphon, t_counts, t_graphon, wp
from perfectgen.harness import h_normality_stats
from perfectgen.structure import (
    alpha_omega_fast,
    bipartite_hamilton_rotation,
    clique_colour_2,
    hamilton,
    verify_clique_colouring,
    verify_cycle,
    verify_obstruction,
)


def chunk(label):
    def deco(fn):
        def run():
            t0 = time.perf_counter()
            try:
                fn()
            except Exception:
                traceback.print_exc()
            print(f"[{label}] elapsed {time.perf_counter() - t0:.1f}s", flush=True)

        return run

    return deco


@chunk("C1")
def c1():
    worst = 0.0
    for n in range(13):
        d = lndist.build(n)
        exact = lndist.exact_pmf(n)
        for k in range(n + 1):
            ref = float(exact[k])
            worst = max(worst, abs(float(d.pmf[k]) - ref) / ref)
    print("C1 worst rel err:", worst)
    print("C1 n=2 pmf:", lndist.exact_pmf(2))


@chunk("C2")
def c2():
    for n in (64, 256, 1024, 4096):
        xs = [float(x) for x in range(3, int(math.isqrt(n)) + 1)]
        rep = lndist.verify_concentration(n, xs)
        print(
            f"C2 n={n} all_ok={rep.all_ok()} |mean-mu|={abs(rep.exact_mean - rep.mu):.4f}"
        )


@chunk("C3")
def c3():
    for n in (512, 2048):
        rep = lndist.verify_ratio_bounds(n)
        d = lndist.build(n)
        theta = d.mu - math.floor(d.mu)
        up_bad = [c for c in rep.checks if c.side == "up" and not c.ok]
        down = [c for c in rep.checks if c.side == "down"]
        down_hi_bad = [c for c in down if c.log2_ratio > -(c.x**2) + 2 * c.x + 2.0**-20]
        down_lo_bad = [c for c in down if c.log2_ratio < -(c.x**2) - 2 * c.x - 2.0**-20]
        print(
            f"C3 n={n} theta={theta:.4f} up_bad={len(up_bad)} "
            f"down_hi_bad={len(down_hi_bad)} down_lo_bad={len(down_lo_bad)} "
            f"x_max={rep.x_max}"
        )
        if down_lo_bad:
            worst = min(down_lo_bad, key=lambda c: c.log2_ratio + c.x**2 + 2 * c.x)
            print(
                f"  first bad x={down_lo_bad[0].x} worst x={worst.x} "
                f"log2_ratio={worst.log2_ratio:.4f} bound={-(worst.x ** 2) - 2 * worst.x}"
            )


@chunk("C4")
def c4():
    parts = partitions.all_partitions(4)
    rng = np.random.default_rng(7)
    counts = Counter(partitions.sample_uniform(4, rng) for _ in range(100_000))
    obs = [counts.get(p, 0) for p in parts]
    chi = scistats.chisquare(obs)
    print(f"C4 chi2 p={chi.pvalue:.4f}")
    print("C4 harper:", partitions.harper_moments(3))
    bl = [len(p.blocks) for p in partitions.all_partitions(3)]
    print("C4 enum mean/var:", np.mean(bl), np.var(bl))
    rng = np.random.default_rng(11)
    ks = np.array(
        [len(partitions.sample_uniform(50, rng).blocks) for _ in range(20_000)], float
    )
    bells = oracles.bell_numbers(52)
    ref = float(Fraction(bells[51], bells[50]) - 1)
    z = (ks.mean() - ref) / (ks.std(ddof=1) / math.sqrt(len(ks)))
    print(f"C4 m=50 ref={ref:.4f} mean={ks.mean():.4f} z={z:.3f}")


@chunk("C5")
def c5():
    law = generator.exact_gen_law(3)
    keys = sorted(law, key=lambda g: g.rows)
    rng = np.random.default_rng(2024)
    counts = Counter(generator.gen(3, rng)[0] for _ in range(1_000_000))
    obs = [counts.get(g, 0) for g in keys]
    exp = [float(law[g]) * 1_000_000 for g in keys]
    chi = scistats.chisquare(obs, exp)
    print(f"C5 law chi2 p={chi.pvalue:.4f} support={len(keys)}")
    good = 0
    for t in range(1000):
        gp, ap = generator.gen_plus(50, np.random.default_rng(np.random.SeedSequence([99, t])))
        gm, am = generator.gen_minus(50, np.random.default_rng(np.random.SeedSequence([99, t])))
        if (
            gm == complement(gp)
            and am.central == ap.central
            and am.side_parts == ap.side_parts
            and ap.sign == 1
            and am.sign == -1
        ):
            good += 1
    print(f"C5 duality {good}/1000")


@chunk("C6")
def c6():
    for n in (10, 12, 14):
        alpha_bad = omega_bad = dichotomy_bad = 0
        certain = 0
        for sign in (1, -1):
            draw = generator.gen_plus if sign == 1 else generator.gen_minus
            for t in range(500):
                rng = np.random.default_rng(1_000_000 * n + 1000 * (sign + 2) + t)
                g, arr = draw(n, rng)
                fast = alpha_omega_fast(g, arr)
                a_ref = alpha_exact(g)
                if fast.alpha != a_ref:
                    alpha_bad += 1
                if fast.certain:
                    certain += 1
                    if fast.omega != omega_exact(g):
                        omega_bad += 1
                if sign == 1 and a_ref - len(arr.side_parts) not in (0, 1):
                    dichotomy_bad += 1
        print(
            f"C6 n={n} alpha_bad={alpha_bad} omega_bad={omega_bad} "
            f"certain={certain}/1000 dichotomy_bad={dichotomy_bad}"
        )


@chunk("C7")
def c7():
    ok = bad_verify = 0
    for t in range(1000):
        rng = np.random.default_rng(31_000 + t)
        g, arr = generator.gen(200, rng)
        col = clique_colour_2(g, arr)
        if col is None:
            continue
        if verify_clique_colouring(g, arr, col):
            ok += 1
        else:
            bad_verify += 1
    print(f"C7 n=200 ok={ok}/1000 bad_verify={bad_verify}")
    returned = agree = 0
    for t in range(200):
        nt = int(np.random.default_rng(t).integers(5, 31))
        rng = np.random.default_rng(77_000 + t)
        g, arr = generator.gen(nt, rng)
        col = clique_colour_2(g, arr)
        if col is None:
            continue
        returned += 1
        if verify_clique_colouring(g, arr, col) and oracles.clique_colouring_ok(g, col):
            agree += 1
    print(f"C7 small returned={returned} agree={agree}")


@chunk("C8")
def c8():
    kinds = Counter()
    bad = 0
    for t in range(1000):
        g, arr = generator.gen(200, np.random.default_rng(8_800 + t))
        out = hamilton(g, arr, np.random.default_rng(123 + t))
        kinds[out.kind] += 1
        if out.kind == "cycle" and not verify_cycle(g, out.cycle):
            bad += 1
        if out.kind == "obstruction" and not verify_obstruction(g, out.obstruction):
            bad += 1
    ell = lndist.exact_ell(200)
    ref = float(Fraction(sum(ell[101:]), 2 * sum(ell)))
    sigma3 = 3 * math.sqrt(ref * (1 - ref) / 1000)
    print(f"C8 kinds={dict(kinds)} bad={bad} ref={ref:.6e} 3sigma={sigma3:.3e}")
    succ = 0
    for t in range(200):
        rng = np.random.default_rng(50_000 + t)
        left = (1 << 100) - 1
        right = ((1 << 200) - 1) ^ left
        rows = [0] * 200
        for v in range(100):
            bits = rng.integers(0, 2, size=100)
            for u in np.nonzero(bits)[0]:
                rows[v] |= 1 << (100 + int(u))
                rows[100 + int(u)] |= 1 << v
        g = Graph(200, tuple(rows))
        cyc = bipartite_hamilton_rotation(g, left, right, np.random.default_rng(51_000 + t))
        if cyc is not None and verify_cycle(g, cyc):
            succ += 1
    print(f"C8 rotation {succ}/200")


@chunk("C9")
def c9():
    kappa_eq = unique = colour_ok = 0
    for t in range(500):
        g, arr = generator.gen(200, np.random.default_rng(40_000 + t))
        degs = degrees(g)
        delta = max(degs)
        if connectivity(g) == min(degs):
            kappa_eq += 1
        if degs.count(delta) == 1:
            unique += 1
            val, col = chromatic_index(g)
            seen = {}
            proper = col.certified and val == delta and col.num_colours == delta
            used = set()
            for (u, v), c in col.colours.items():
                used.add(c)
                for w in (u, v):
                    if (w, c) in seen:
                        proper = False
                    seen[(w, c)] = True
            if proper and len(used) == delta:
                colour_ok += 1
    print(f"C9 kappa_eq={kappa_eq}/500 unique={unique}/500 colour_ok={colour_ok}")


@chunk("C10")
def c10():
    k1 = Graph(1, (0,))
    k2 = Graph(2, (2, 1))
    k3 = Graph(3, (6, 5, 3))
    w = wp()
    print("C10 exact:", t_graphon(k1, w), t_graphon(k2, w), t_graphon(k3, w))
    half = Fraction(1, 2)
    print(
        "C10 oracle K3:",
        oracles.t_oracle(k3, ((Fraction(1), half), (half, Fraction(0))), (half, half)),
    )
    good = 0
    bound = 2 * (1 / 500 + 500**-0.5)
    for t in range(200):
        g, _ = generator.gen(500, np.random.default_rng(60_000 + t))
        rep = t_counts(k2, g)
        if abs(float(rep.t_inj) - 0.5) <= bound:
            good += 1
    print(f"C10 density good={good}/200 bound={bound:.5f}")
    ms = []
    for t in range(400):
        g, _ = generator.gen(300, np.random.default_rng(61_000 + t))
        ms.append(g.edge_count())
    ms = np.array(ms, float)
    target = 0.5 * (300 * 299 / 2)
    z = (ms.mean() - target) / (ms.std(ddof=1) / math.sqrt(len(ms)))
    print(f"C10 edges mean={ms.mean():.1f} target={target} z={z:.3f}")


@chunk("C11")
def c11():
    st = h_normality_stats(2000, 2000, seed=42)
    print(
        f"C11 mean={st.mean:.3f} target_mean={st.target_mean:.3f} "
        f"var={st.variance:.3f} target_var={st.target_variance:.3f} "
        f"skew={st.skewness:.4f} ks={st.ks_distance:.4f}"
    )
    mu = lndist.mu_target(2000)
    m = 2000 - round(mu)
    from perfectgen.numerics import solve_r

    r = solve_r(m)
    print(f"C11 side m={m} r={r:.3f} m/r={m / r:.2f}")


@chunk("C12")
def c12():
    script = r"""
import sys
from perfectgen.harness import ExperimentSpec, run
for name in ("invariants", "hamilton", "clique_colour", "trichotomy", "connectivity",
             "class_one", "densities", "h_normality", "big_h_vs_ln"):
    kw = dict(name=name, n=60 if name == "h_normality" else 24, trials=6, seed=5)
    if name == "trichotomy":
        kw["pattern"] = "D]o"
    sys.stdout.write(run(ExperimentSpec(**kw)).to_json() + "\n")
"""
    outs = []
    for threads in ("1", "4", "16"):
        env = dict(os.environ, PERFECTGEN_THREADS=threads)
        res = subprocess.run(
            [sys.executable, "-c", script], capture_output=True, env=env, timeout=600
        )
        if res.returncode != 0:
            print("C12 rc", res.returncode, res.stderr.decode()[:500])
            return
        outs.append(res.stdout)
    print("C12 identical:", outs[0] == outs[1] == outs[2], "bytes:", len(outs[0]))


for fn in (c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12):
    fn()
print("REHEARSAL DONE", flush=True)
