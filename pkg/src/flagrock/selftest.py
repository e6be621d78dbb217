"""Oracle-versus-closed-form invariant suite used by ``flagrock selftest``."""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass

from .errors import ConsistencyError
from .exterior import exterior_ops
from .nilpotent import (
    check_hormander,
    nilpotentize,
    oracle_nilpotent_violations,
    strongly_orthogonal_sequence,
)
from .orbit import (
    bl_and_A,
    canonical_form,
    check_hypothesis_H,
    check_induction_hypotheses,
    check_rep_homomorphism,
    choose_polarization,
    default_weights,
    realize_rep,
)
from .realframe import verify_frame_relations
from .rootsys import (
    ParabolicData,
    StructureConstants,
    all_roots,
    build_parabolic,
    oracle_violations,
    structure_constants,
    valid_parameters,
)
from .symbol import symbol_violations

FAULTS = ("structure-constants",)


def corrupt(sc: StructureConstants) -> StructureConstants:
    """Flip the sign of the first nonzero entry (falsification hook).

    Without nonzero entries a spurious one is added instead.
    """
    table = dict(sc.table)
    if table:
        key = min(table)
        table[key] = -table[key]
    else:
        a, b = all_roots(sc.n)[:2]
        table[(a, b)] = 1
    return StructureConstants(sc.n, table)


@dataclass
class CheckResult:
    invariant: str
    instances: int
    seconds: float


def _checks(pd: ParabolicData, fault: str | None) -> list[tuple[str, Callable[[], list[str]]]]:
    sc = structure_constants(pd)
    if fault == "structure-constants":
        sc = corrupt(sc)

    def rep_checks() -> list[str]:
        if pd.degenerate:
            return []
        n = nilpotentize(pd, sc)
        gamma = strongly_orthogonal_sequence(pd)
        l = canonical_form(gamma, default_weights(gamma))
        sf = bl_and_A(l, n)
        if not check_hypothesis_H(sf):
            return []
        rep = realize_rep(l, choose_polarization(sf, pd), n)
        out = []
        if not check_rep_homomorphism(rep):
            out.append(f"{pd.key()}: pi_l is not a homomorphism")
        if not check_induction_hypotheses(rep):
            out.append(f"{pd.key()}: induction hypotheses fail")
        return out

    return [
        ("structure-constants", lambda: sc.violations() + oracle_violations(pd, sc)),
        ("frame-brackets", lambda: verify_frame_relations(pd, sc).diffs),
        ("nilpotent-brackets", lambda: nilpotentize(pd, sc).violations()
         + oracle_nilpotent_violations(nilpotentize(pd, sc))),
        ("hormander", lambda: [] if check_hormander(pd, nilpotentize(pd, sc))
         else [f"{pd.key()}: bracket-generating fails"]),
        ("exterior-anticommutation", lambda: exterior_ops(pd).anticommutation_violations()),
        ("rep-homomorphism", rep_checks),
        ("laplacian-symbol", lambda: symbol_violations(pd)),
    ]


def run_selftest(max_n: int = 6, fault: str | None = None,
                 log: Callable[[str], None] | None = None) -> list[CheckResult]:
    """Run every invariant on every instance with p + q <= max_n.

    Raises ConsistencyError naming the first failing invariant.
    """
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    instances = [build_parabolic(*k) for k in valid_parameters(max_n)]
    totals: dict[str, CheckResult] = {}
    for pd in instances:
        for name, check in _checks(pd, fault):
            t0 = time.perf_counter()
            bad = check()
            res = totals.setdefault(name, CheckResult(name, 0, 0.0))
            res.instances += 1
            res.seconds += time.perf_counter() - t0
            if bad:
                raise ConsistencyError(name, f"{pd.key()}: {bad[0]}")
    results = list(totals.values())
    if log:
        for r in results:
            log(f"ok  {r.invariant:<26} {r.instances:>3} instances  {r.seconds:6.2f} s")
    return results
