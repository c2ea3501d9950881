"""The acceptance suite: every quantitative claim as a pass/fail check.

Checks 1-8 are exact (zero tolerance); 9-15 are fixed-size Monte Carlo
surrogates of the limit statements, with tolerances sized as roughly three
standard errors plus a finite-size bias allowance.  The suite is
deterministic given its seed; heavy intermediate runs are cached and shared
between criteria that quote the same (n, trials).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exact, limits
from .core import ChordDiagram, double_factorial_odd
from .game import play, play_batch, verify_length_identity
from .harness import (
    empirical_cov,
    empirical_pmf,
    gather_statistics,
    ks_distance,
    tv_distance,
)
from .pagraph import build_graph, degrees
from .sampler import (
    RngStream,
    blocks,
    deal_from_chords,
    enumerate_standard_deals,
    insertion_process_batch,
    sample_chord_diagram,
    sample_deal_insertion,
)
from .urn import UrnState, apply_draw, char_poly, char_poly_closed, eigen_residual, urn_counts_batch

DEFAULT_SEED = 0
EXHAUSTIVE_N = 7


@dataclass(frozen=True)
class CheckOutcome:
    cid: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} [{self.cid:2d}] {self.name}: {self.detail}"


class AcceptanceSuite:
    """All fifteen checks with shared, lazily computed heavy runs."""

    def __init__(self, seed: int = DEFAULT_SEED, threads: int = 1):
        self.seed = seed
        self.threads = threads

    # -- shared heavy computations -----------------------------------------

    @cached_property
    def exhaustive(self) -> dict:
        """One pass over every standard deal with n <= 7: first-match
        counts, block-count sums, and the length identity on each deal."""
        data: dict[int, dict] = {}
        for n in range(1, EXHAUSTIVE_N + 1):
            fm: dict[int, int] = {}
            block_sums: dict[int, int] = {}
            identity_ok = True
            total = 0
            for deal in enumerate_standard_deals(n):
                prof = blocks(deal)
                stats = play(deal)
                fm[stats.first_match] = fm.get(stats.first_match, 0) + 1
                for length, cnt in prof.counts.items():
                    block_sums[length] = block_sums.get(length, 0) + cnt
                if 2 * stats.length != 3 * n + prof.even_count() - 2 * stats.lucky:
                    identity_ok = False
                total += 1
            data[n] = {
                "first_match": fm,
                "block_sums": block_sums,
                "identity_ok": identity_ok,
                "total": total,
            }
        return data

    @cached_property
    def run_game_small(self) -> dict:
        """n=4096, T=20000 (criteria 9 and 10)."""
        return gather_statistics(4096, 20000, self.seed + 109, threads=self.threads)

    @cached_property
    def run_game_large(self) -> dict:
        """n=4096, T=50000 (criteria 12 and 13)."""
        return gather_statistics(4096, 50000, self.seed + 112, threads=self.threads)

    @cached_property
    def run_first_match(self) -> dict:
        """n=10^4, T=20000, no game play needed (criterion 11)."""
        return gather_statistics(
            10**4, 20000, self.seed + 111, need_play=False, threads=self.threads
        )

    # -- exact criteria ------------------------------------------------------

    def check_1(self) -> CheckOutcome:
        tab = exact.first_match_counts(60)
        ok = True
        for n, info in self.exhaustive.items():
            for j in range(2, n + 2):
                if tab.count(n, j) != info["first_match"].get(j, 0):
                    ok = False
        sums_ok = all(tab.row_sum(n) == double_factorial_odd(n) for n in range(1, 61))
        deals7 = self.exhaustive[7]["total"]
        return CheckOutcome(
            1,
            "first-match recurrence vs exhaustive enumeration",
            ok and sums_ok and deals7 == 135135,
            f"exact counts match for n<=7 ({deals7} deals at n=7): {ok}; "
            f"row sums equal (2n-1)!! for n<=60: {sums_ok}",
        )

    def check_2(self) -> CheckOutcome:
        tab = exact.first_match_counts(60)
        ok = True
        for n in range(1, 61):
            dfo = double_factorial_odd(n)
            for t in range(2, n + 2):
                if exact.first_match_pmf(n, t) != Fraction(tab.count(n, t), dfo):
                    ok = False
        return CheckOutcome(
            2,
            "first-match pmf closed form vs count table",
            ok,
            f"exact rational equality for all n<=60, 2<=t<=n+1: {ok}",
        )

    def check_3(self) -> CheckOutcome:
        ok_enum = True
        for n, info in self.exhaustive.items():
            dfo = double_factorial_odd(n)
            for i in range(1, n + 2):
                want = Fraction(info["block_sums"].get(i, 0), dfo)
                if exact.block_count_mean(n, i) != want:
                    ok_enum = False
        ok_sums = True
        for n in range(1, 51):
            means = [exact.block_count_mean(n, i) for i in range(1, n + 2)]
            if sum(means) != n or sum((i + 1) * m for i, m in enumerate(means)) != 2 * n:
                ok_sums = False
        return CheckOutcome(
            3,
            "expected block counts vs enumeration and mass identities",
            ok_enum and ok_sums,
            f"enumeration equality n<=7: {ok_enum}; "
            f"sum=n and weighted sum=2n for n<=50: {ok_sums}",
        )

    def check_4(self) -> CheckOutcome:
        ok_exh = all(info["identity_ok"] for info in self.exhaustive.values())
        data = gather_statistics(1000, 100000, self.seed + 104, threads=self.threads)
        lhs = 2 * data["G"]
        rhs = 3 * 1000 + data["Y"] - 2 * data["L"]
        n_ok = int((lhs == rhs).sum())
        return CheckOutcome(
            4,
            "game-length identity 2G = 3n + Y - 2L",
            ok_exh and n_ok == 100000,
            f"exhaustive n<=7: {ok_exh}; random deals at n=1000: {n_ok}/100000",
        )

    def check_5(self) -> CheckOutcome:
        max_rel = 0.0
        ok = True
        for i in range(1, 16):
            for j in range(1, 16):
                a = limits.block_cov_exact(i, j)
                b = limits.block_cov_doublesum_exact(i, j)
                if a != b:
                    ok = False
                rel = abs(float(a) - float(b)) / max(abs(float(a)), 1e-300)
                max_rel = max(max_rel, rel)
        spots = (
            limits.block_cov_exact(1, 1) == Fraction(1, 9)
            and limits.block_cov_exact(1, 2) == Fraction(-4, 45)
            and limits.block_cov_exact(2, 2) == Fraction(23, 180)
        )
        return CheckOutcome(
            5,
            "covariance closed form vs eigen double sum",
            ok and max_rel <= 1e-12 and spots,
            f"exact equality i,j<=15: {ok} (max rel diff {max_rel:.2e}); "
            f"spot values 1/9, -4/45, 23/180: {spots}",
        )

    def check_6(self) -> CheckOutcome:
        poly_ok = all(char_poly(M) == char_poly_closed(M) for M in range(2, 31))
        resid_ok = all(
            all(x == 0 for x in eigen_residual(M)) for M in range(2, 51)
        )
        return CheckOutcome(
            6,
            "characteristic polynomial and growth eigenvector",
            poly_ok and resid_ok,
            f"char poly equals closed product 2<=M<=30: {poly_ok}; "
            f"(A0-2I)v = 0 exactly for M<=50: {resid_ok}",
        )

    def check_7(self) -> CheckOutcome:
        n, trajectories = 200, 1000
        ok = True
        for t in range(trajectories):
            deal, trace, rows = sample_deal_insertion(
                n, RngStream(self.seed + 107, t), keep_rows=True
            )
            state = UrnState()
            for k, typ in enumerate(trace.drawn_types, start=1):
                state = apply_draw(state, typ)
                want = dict(blocks(rows[k - 1]).counts)
                want[0] = 1
                if state.as_dict() != want:
                    ok = False
                    break
            if not ok:
                break
        return CheckOutcome(
            7,
            "urn/insertion coupling at every prefix",
            ok,
            f"urn driven by insertion gap types reproduces block counts "
            f"for {trajectories} trajectories at n={n}: {ok}",
        )

    def check_8(self) -> CheckOutcome:
        fig1 = ChordDiagram(((1, 4), (2, 5), (3, 6), (7, 9), (8, 10)))
        fig_ok = degrees(build_graph(fig1)) == (4, 1, 1, 3, 1)
        ok = True
        for t in range(10000):
            n = 1 + (t % 50)
            cd = sample_chord_diagram(n, RngStream(self.seed + 108, t))
            if degrees(build_graph(cd)) != blocks(deal_from_chords(cd)).lengths:
                ok = False
                break
        return CheckOutcome(
            8,
            "vertex degrees equal block lengths",
            ok and fig_ok,
            f"10000 random diagrams (n cycling 1..50): {ok}; "
            f"worked five-chord instance gives (4,1,1,3,1): {fig_ok}",
        )

    # -- Monte Carlo criteria ------------------------------------------------

    def check_9(self) -> CheckOutcome:
        g = self.run_game_small["G"]
        est = float(g.mean() / 4096)
        target = 3 - 2 * math.log(2)
        return CheckOutcome(
            9,
            "mean game length rate",
            abs(est - target) <= 0.01,
            f"mean G/n = {est:.5f}, target {target:.5f}, tol 0.01 "
            f"(n=4096, T=20000)",
        )

    def check_10(self) -> CheckOutcome:
        g = self.run_game_small["G"].astype(np.float64)
        n = 4096
        z = (g - (3 - 2 * math.log(2)) * n) / math.sqrt(n)
        v = float(z.var(ddof=1))
        target = limits.even_block_var_limit() / 4.0
        var_ok = abs(v - target) <= 0.02
        stud = (g - g.mean()) / g.std(ddof=1)
        ks = ks_distance(stud, limits.normal_cdf)
        ks_ok = ks <= 0.02
        return CheckOutcome(
            10,
            "game length variance and normality",
            var_ok and ks_ok,
            f"var = {v:.4f}, target {target:.4f}, tol 0.02: "
            f"{'ok' if var_ok else 'FAIL'}; KS(studentized, N(0,1)) = {ks:.4f}, "
            f"tol 0.02: {'ok' if ks_ok else 'FAIL'} (n=4096, T=20000)",
        )

    def check_11(self) -> CheckOutcome:
        n = 10**4
        x = self.run_first_match["D1"] / (2.0 * math.sqrt(n))
        ks = ks_distance(x, limits.weibull2_cdf)
        mean = float(x.mean())
        target_mean = math.sqrt(math.pi) / 2
        ks_ok = ks <= 0.02
        mean_ok = abs(mean - target_mean) <= 0.02
        return CheckOutcome(
            11,
            "first-match scaling law",
            ks_ok and mean_ok,
            f"KS vs 1-exp(-z^2) = {ks:.4f} (tol 0.02); mean = {mean:.4f}, "
            f"target {target_mean:.4f}, tol 0.02 (n=10^4, T=20000)",
        )

    def check_12(self) -> CheckOutcome:
        lucky = self.run_game_large["L"]
        pmf = empirical_pmf(lucky)
        kmax = max(pmf) + 40
        target_pmf = {k: limits.poisson_ln2_pmf(k) for k in range(kmax + 1)}
        tv = tv_distance(pmf, target_pmf)
        mean = float(lucky.mean())
        tv_ok = tv <= 0.02
        mean_ok = abs(mean - math.log(2)) <= 0.01
        return CheckOutcome(
            12,
            "lucky moves vs Poisson(ln 2)",
            tv_ok and mean_ok,
            f"TV = {tv:.4f} (tol 0.02); mean = {mean:.4f}, target "
            f"{math.log(2):.4f}, tol 0.01 (n=4096, T=50000)",
        )

    def check_13(self) -> CheckOutcome:
        n = 4096
        data = self.run_game_large
        obs = np.stack(
            [data[f"B{i}"] - limits.block_fraction_limit(i) * n for i in range(1, 5)],
            axis=1,
        ) / math.sqrt(n)
        cov = empirical_cov(obs)
        target = limits.block_cov_matrix(4)
        dev = float(np.abs(cov - target).max())
        return CheckOutcome(
            13,
            "block-count covariance matrix",
            dev <= 0.03,
            f"max |cov - target| over i,j<=4 = {dev:.4f}, tol 0.03 "
            f"(n=4096, T=50000)",
        )

    def check_14(self) -> CheckOutcome:
        n, trials = 10**4, 10**4
        batch = insertion_process_batch(n, trials, self.seed + 114)
        est = float((batch.good_counts / n).mean())
        target = 2 * math.log(2)
        return CheckOutcome(
            14,
            "good-interval growth rate",
            abs(est - target) <= 0.01,
            f"mean s/n = {est:.5f}, target {target:.5f}, tol 0.01 "
            f"(n=10^4, T=10^4)",
        )

    def check_15(self) -> CheckOutcome:
        n, trials = 10**5, 1000
        counts = urn_counts_batch(n, trials, self.seed + 115, max_type=4096, chunk=1000)
        devs = []
        for i in range(1, 5):
            est = float((counts[:, i] / n).mean())
            devs.append(abs(est - limits.block_fraction_limit(i)))
        ok = max(devs) <= 0.01
        return CheckOutcome(
            15,
            "urn type fractions",
            ok,
            f"max |counts[i]/n - 4/(i+2)_3| over i<=4 = {max(devs):.5f}, "
            f"tol 0.01 (n=10^5, T=1000)",
        )

    # -- driver ---------------------------------------------------------------

    def run_all(self, only=None) -> list[CheckOutcome]:
        ids = sorted(only) if only else range(1, 16)
        return [getattr(self, f"check_{cid}")() for cid in ids]
