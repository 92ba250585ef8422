"""Identity suites with structured pass/fail reports."""
from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from . import dt, oracle, series
from .motive import LEF, ONE, ZERO, TateClass, euler_char, is_effective, lefschetz
from .series import MotiveSeries, exp_series, log_series, substitute

SUITES = ("axioms", "identities", "euler", "effectivity", "oracle")

IDENTITIES = (
    "local-product",
    "omega-exp",
    "closed-form",
    "rank1-omega",
    "vc-weight",
)


@dataclass
class Case:
    identity: str
    params: dict
    status: str
    first_discrepancy: Optional[dict] = None
    elapsed_ms: Optional[float] = None

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "params": self.params,
            "status": self.status,
            "first_discrepancy": self.first_discrepancy,
        }
        if timing:
            out["elapsed_ms"] = self.elapsed_ms
        return out


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.cases)

    def to_json(self, timing: bool = False) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": [c.to_json(timing) for c in self.cases],
        }


def _render(x: Any) -> str:
    if isinstance(x, TateClass):
        return x.to_lefschetz_str()
    return str(x)


def first_discrepancy(expected: Sequence, actual: Sequence) -> Optional[dict]:
    """Lowest degree where two coefficient sequences differ, or None."""
    for d, (e, a) in enumerate(zip(expected, actual)):
        if e != a:
            return {"degree": d, "expected": _render(e), "actual": _render(a)}
    if len(expected) != len(actual):
        d = min(len(expected), len(actual))
        return {"degree": d, "expected": f"length {len(expected)}", "actual": f"length {len(actual)}"}
    return None


# A check returns None on success or a discrepancy dict.
Check = Callable[[], Optional[dict]]


def _run(identity: str, params: dict, check: Check) -> Case:
    start = time.perf_counter()
    try:
        disc = check()
    except Exception as exc:  # a crash is a failing case, reported at degree -1
        disc = {"degree": -1, "expected": "no error", "actual": f"{type(exc).__name__}: {exc}"}
    elapsed = round((time.perf_counter() - start) * 1000.0, 3)
    return Case(identity, params, "fail" if disc else "pass", disc, elapsed)


# -- identity checks ---------------------------------------------------------

def check_local_product(r: int, N: int) -> Optional[dict]:
    expected = substitute(dt.z_affine(r, N), (-1) ** r)
    actual = series.power(dt.p_punctual(r, N), LEF**3)
    return first_discrepancy(expected.coeffs, actual.coeffs)


def check_omega_exp(r: int, N: int) -> Optional[dict]:
    gen = MotiveSeries([ZERO] + [dt.omega(r, n) for n in range(1, N + 1)], N)
    return first_discrepancy(dt.p_punctual(r, N).coeffs, exp_series(gen).coeffs)


def check_closed_form(r: int, N: int, Y: dt.ThreefoldInput) -> Optional[dict]:
    a = dt.z_threefold(Y, r, N, "power")
    b = dt.z_threefold(Y, r, N, "closed_form")
    return first_discrepancy(b.coeffs, a.coeffs)


def rank1_omega_closed_form(n: int) -> TateClass:
    """(-1)^n L^(-3/2) (L^(n/2) - L^(-n/2)) / (L^(1/2) - L^(-1/2)), by exact division."""
    num = lefschetz(n) - lefschetz(-n)
    den = lefschetz(1) - lefschetz(-1)
    # (x^n - x^-n)/(x - x^-1) = sum_{j=0}^{n-1} x^(n-1-2j) with x = L^(1/2)
    quotient = sum((lefschetz(n - 1 - 2 * j) for j in range(n)), ZERO)
    if quotient * den != num:
        raise ArithmeticError("division is not exact")
    return lefschetz(-3) * quotient * (-1) ** n


def check_rank1_omega(nmax: int) -> Optional[dict]:
    expected = [rank1_omega_closed_form(n) for n in range(1, nmax + 1)]
    actual = [dt.omega(1, n) for n in range(1, nmax + 1)]
    disc = first_discrepancy(expected, actual)
    if disc:
        disc["degree"] += 1
    return disc


def check_vc_weight(r: int, N: int) -> Optional[dict]:
    try:
        dt.vc_weight_series(r, N)
    except dt.IdentityViolation as exc:
        text = str(exc)
        degree = int(text.split("t^")[1].split(":")[0]) if "t^" in text else -1
        return {"degree": degree, "expected": "LHS = RHS", "actual": text}
    return None


def check_euler_macmahon(r: int, N: int) -> Optional[dict]:
    """chi of each coefficient of Z_r(A^3, t) against signed colored plane partition counts."""
    chis = [euler_char(c) for c in dt.z_affine(r, N)]
    expected = [(-1) ** (r * n) * oracle.colored_plane_partitions(r, n) for n in range(N + 1)]
    return first_discrepancy(expected, chis)


def check_threefold_euler(r: int, N: int, Y: dt.ThreefoldInput) -> Optional[dict]:
    chis = [euler_char(c) for c in dt.z_threefold(Y, r, N)]
    return first_discrepancy(dt.macmahon_power(r * Y.euler, N), chis)


def check_effectivity(r: int, N: int) -> Optional[dict]:
    """Signed coefficients (-1)^(rn) P_{r,n} and (-1)^(rn) [Quot_{A^3}(O^r, n)]_vir are effective."""
    signed = {
        "p_punctual": dt.p_punctual(r, N),
        "z_affine": substitute(dt.z_affine(r, N), (-1) ** r),
    }
    for name, s in signed.items():
        for n, c in enumerate(s):
            if not is_effective(c):
                return {"degree": n, "expected": f"effective {name}", "actual": _render(c)}
    return None


# -- power structure axioms --------------------------------------------------

def _random_class(rng: random.Random, terms: int = 3, span: int = 4, mag: int = 3) -> TateClass:
    return TateClass({rng.randint(-span, span): rng.randint(-mag, mag) for _ in range(terms)})


def _random_unit_series(rng: random.Random, N: int) -> MotiveSeries:
    return MotiveSeries([ONE] + [_random_class(rng) for _ in range(N)], N)


def check_axioms(instances: int, N: int, seed: int = 0) -> list[tuple[str, dict, Check]]:
    """Seven power-structure axioms plus Exp/Log consistency over random data."""
    rng = random.Random(seed)
    samples = []
    for _ in range(instances):
        A = _random_unit_series(rng, N)
        B = _random_unit_series(rng, N)
        m = _random_class(rng, terms=2, span=3, mag=2)
        m2 = _random_class(rng, terms=2, span=3, mag=2)
        e = rng.randint(1, 3)
        samples.append((A, B, m, m2, e))

    def pw(A, m):
        return series.power(A, m)

    one_plus_t = MotiveSeries([ONE, ONE], N)
    axioms: dict[str, Callable] = {
        "axiom-1-zero": lambda A, B, m, m2, e: (MotiveSeries.one(N), pw(A, ZERO)),
        "axiom-2-one": lambda A, B, m, m2, e: (A, pw(A, ONE)),
        "axiom-3-product": lambda A, B, m, m2, e: (pw(A, m) * pw(B, m), pw(A * B, m)),
        "axiom-4-sum": lambda A, B, m, m2, e: (pw(A, m) * pw(A, m2), pw(A, m + m2)),
        "axiom-5-composite": lambda A, B, m, m2, e: (pw(pw(A, m), m2), pw(A, m * m2)),
        "axiom-6-linear": lambda A, B, m, m2, e: (
            MotiveSeries([ONE, m], 1),
            pw(one_plus_t, m).truncate(1),
        ),
        "axiom-7-substitution": lambda A, B, m, m2, e: (
            substitute(pw(A, m), 1, e),
            pw(substitute(A, 1, e), m),
        ),
        "exp-log-inverse": lambda A, B, m, m2, e: (A, exp_series(log_series(A))),
        "exp-homomorphism": lambda A, B, m, m2, e: (
            exp_series(log_series(A) + log_series(B)),
            A * B,
        ),
    }

    def make(fn):
        def check():
            for s in samples:
                expected, actual = fn(*s)
                disc = first_discrepancy(expected.coeffs, actual.coeffs)
                if disc:
                    return disc
            return None

        return check

    return [(name, {"instances": instances, "order": N, "seed": seed}, make(fn)) for name, fn in axioms.items()]


# -- suites ------------------------------------------------------------------

THREEFOLDS = {name: dt.ThreefoldInput(motive=m, name=name) for name, m in dt.NAMED_THREEFOLDS.items()}


def _identity_cases(order: int, ranks: Sequence[int], only: Optional[str] = None):
    cases = []
    for r in ranks:
        cases.append(("local-product", {"r": r, "N": order}, lambda r=r: check_local_product(r, order)))
        cases.append(("omega-exp", {"r": r, "N": order}, lambda r=r: check_omega_exp(r, order)))
        for name, Y in THREEFOLDS.items():
            cases.append(
                ("closed-form", {"r": r, "N": order, "Y": name}, lambda r=r, Y=Y: check_closed_form(r, order, Y))
            )
        cases.append(("vc-weight", {"r": r, "N": order}, lambda r=r: check_vc_weight(r, order)))
    nmax = min(order, 8) if order > 0 else 8
    cases.append(("rank1-omega", {"r": 1, "nmax": nmax}, lambda: check_rank1_omega(nmax)))
    if only:
        cases = [c for c in cases if c[0] == only]
    return cases


def _euler_cases(order: int, ranks: Sequence[int]):
    cases = []
    for r in ranks:
        cases.append(("euler-macmahon", {"r": r, "N": order}, lambda r=r: check_euler_macmahon(r, order)))
        Y = THREEFOLDS["P3"]
        cases.append(
            ("threefold-euler", {"r": r, "N": order, "Y": "P3"}, lambda r=r: check_threefold_euler(r, order, Y))
        )
    return cases


def _effectivity_cases(order: int, ranks: Sequence[int]):
    return [("effectivity", {"r": r, "N": order}, lambda r=r: check_effectivity(r, order)) for r in ranks]


def check_oracle_closed_form(r: int, q: int) -> Optional[dict]:
    expected = q**3 * (q**r - 1) // (q - 1)
    got = [oracle.count_quot_points(r, 1, q), oracle.count_ncquot_points(r, 1, q)]
    return first_discrepancy([expected, expected], got)


def check_oracle_structural(r: int, n: int, q: int) -> Optional[dict]:
    quot = oracle.count_quot_points(r, n, q)
    nc = oracle.count_ncquot_points(r, n, q)
    if quot > nc:
        return {"degree": n, "expected": f"quot <= ncquot ({nc})", "actual": str(quot)}
    for perm in ((1, 2, 0), (2, 0, 1), (1, 0, 2)):
        got = (oracle.count_quot_points(r, n, q, loop_order=perm), oracle.count_ncquot_points(r, n, q, loop_order=perm))
        if got != (quot, nc):
            return {"degree": n, "expected": str((quot, nc)), "actual": f"{got} for loop order {perm}"}
    dim = 2 * n * n + r * n
    if nc != oracle.ncquot_count_recursive(r, n, q) or nc < q**dim:
        return {
            "degree": n,
            "expected": f"{oracle.ncquot_count_recursive(r, n, q)} (recursion), at least q^{dim}",
            "actual": str(nc),
        }
    return None


def check_plane_partitions(r: int, N: int) -> Optional[dict]:
    expected = dt.macmahon_power(r, N)
    return first_discrepancy(expected, [oracle.colored_plane_partitions(r, n) for n in range(N + 1)])


def _oracle_cases(order: int, ranks: Sequence[int]):
    cases = []
    for r in ranks:
        if r > 4:
            continue
        for q in (2, 3, 5):
            cases.append(("oracle-rank-n1", {"r": r, "n": 1, "q": q}, lambda r=r, q=q: check_oracle_closed_form(r, q)))
    for r in ranks:
        if r <= 2:
            cases.append(("oracle-structural", {"r": r, "n": 2, "q": 2}, lambda r=r: check_oracle_structural(r, 2, 2)))
    N = min(order, 8)
    for r in ranks:
        if r <= 3:
            cases.append(("plane-partitions", {"r": r, "N": N}, lambda r=r: check_plane_partitions(r, N)))
    return cases


def build_cases(suite: str, order: int, ranks: Sequence[int], *, instances: int = 100, identity: Optional[str] = None):
    if suite == "axioms":
        return check_axioms(instances, order)
    if suite == "identities":
        return _identity_cases(order, ranks, identity)
    if suite == "euler":
        return _euler_cases(order, ranks)
    if suite == "effectivity":
        return _effectivity_cases(order, ranks)
    if suite == "oracle":
        return _oracle_cases(order, ranks)
    if suite == "all":
        out = []
        for s in SUITES:
            out.extend(build_cases(s, order, ranks, instances=instances))
        return out
    raise ValueError(f"unknown suite {suite!r}")


def run_suite(
    suite: str,
    order: int = 8,
    ranks: Sequence[int] = (1, 2, 3),
    *,
    instances: int = 100,
    identity: Optional[str] = None,
    threads: int = 1,
) -> VerificationReport:
    cases = build_cases(suite, order, ranks, instances=instances, identity=identity)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _run(*c), cases))
    else:
        results = [_run(*c) for c in cases]
    return VerificationReport(suite, results)
