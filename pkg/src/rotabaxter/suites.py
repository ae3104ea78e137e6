"""Named check suites with expected verdicts.

A check passes when its verdict matches the expectation, so known
counterexamples (the diamond poset, the star product probe, the quotient
pair operator) are pinned as expected failures rather than hidden.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from . import field_theory as ft
from . import operators as ops
from . import poset as ps
from . import qcalc, species
from .operators import CheckReport
from .series import MultiIndex, divided

DEFAULT_SEED = 0
SUITES = ("laurent", "integration", "qcalc", "species", "poset", "field")


@dataclass(frozen=True)
class Check:
    id: str
    expect: str  # "holds" or "fails"
    identity: str
    run: Callable[[object, Optional[int], Optional[int]], CheckReport]


@dataclass
class CheckResult:
    check: Check
    report: CheckReport

    @property
    def ok(self) -> bool:
        return self.report.verdict == self.check.expect

    def to_json(self) -> dict:
        return {"id": self.check.id, "expect": self.check.expect, "identity": self.check.identity,
                "ok": self.ok, "report": self.report.to_json()}


def _or(value, default):
    return default if value is None else value


# -- laurent: weight -1 projections ------------------------------------------

def _laurent_checks() -> List[Check]:
    neg = ops.laurent_negative_operator()
    pj = ops.projection_operator({"x1", "x2"})
    return [
        Check("laurent.negative_part", "holds", "P(f)P(g) + P(fg) = P(P(f)g) + P(fP(g)), P(f) = f_<0",
              lambda s, o, n: ops.check_rb_identity(neg, _or(n, 500), _or(o, 8), s)),
        Check("laurent.negative_part.idempotent", "holds", "P(P(f)) = P(f)",
              lambda s, o, n: ops.check_idempotent(neg, _or(n, 200), _or(o, 8), s)),
        Check("laurent.negative_part.ker_im", "holds", "Ker(P), Im(P) closed under + and *",
              lambda s, o, n: ops.kernel_image_closure_check(neg, _or(n, 100), _or(o, 8), s, ideal=False)),
        Check("laurent.negative_part.kernel_ideal", "fails", "Ker(P) absorbs products",
              lambda s, o, n: ops.kernel_image_closure_check(neg, _or(n, 100), _or(o, 8), s, ideal=True)),
        Check("divided.p_J", "holds", "weight -1 identity for the support projection p_J",
              lambda s, o, n: ops.check_rb_identity(pj, _or(n, 200), _or(o, 4), s)),
        Check("divided.p_J.ker_im", "holds", "Ker(p_J) ideal, Im(p_J) subring",
              lambda s, o, n: ops.kernel_image_closure_check(pj, _or(n, 50), _or(o, 4), s, ideal=True)),
        Check("lift.matrix", "holds", "entrywise P on 2x2 matrices is Rota-Baxter of the same weight",
              lambda s, o, n: ops.check_rb_identity(ops.lift_coefficientwise(ops.q_zero_evaluation(), "matrix"),
                                                    _or(n, 100), _or(o, 4), s)),
        Check("lift.series", "holds", "coefficientwise P on word series is Rota-Baxter of the same weight",
              lambda s, o, n: ops.check_rb_identity(ops.lift_coefficientwise(ops.q_zero_evaluation(), "series"),
                                                    _or(n, 100), _or(o, 3), s)),
        Check("pairs.projection", "holds", "P(a, b) = (a, a): idempotent, weight -1, multiplicative",
              lambda s, o, n: ops.pair_semiring_check(6)[0]),
        Check("pairs.quotient", "fails", "P(a, b) = (0, b - a): idempotent, weight -1, multiplicative",
              lambda s, o, n: ops.pair_semiring_check(6)[1]),
    ]


# -- integration: weight 0 divided powers ------------------------------------

def _iterated(a: int, b: int) -> Check:
    return Check("integration.iterated(%d,%d)" % (a, b), "holds",
                 "P^a(f)P^b(g) = sum_i binom(b-1+a-i, b-1) P^(a+b-i)(P^i(f) g) + symmetric",
                 lambda s, o, n: ops.iterated_identity_check(ops.integration_operator(), a, b,
                                                             _or(n, 50), _or(o, 10), s))


def _integration_checks() -> List[Check]:
    geo = ops.substitution_geometric_sum(divided({2: 1, 3: 1}, 10), 10)
    return [
        Check("integration.rb", "holds", "P(f)P(g) = P(P(f)g) + P(fP(g)), P = integral from 0",
              lambda s, o, n: ops.check_rb_identity(ops.integration_operator(), _or(n, 500), _or(o, 10), s)),
    ] + [_iterated(a, b) for a in (1, 2, 3) for b in (1, 2, 3)] + [
        Check("integration.geometric_sum", "holds", "sum of F^n for a nilpotent substitution F, weight -1",
              lambda s, o, n: ops.check_rb_identity(geo, _or(n, 100), 10, s)),
        Check("integration.shift_xq", "holds", "sum of S^n for the (x, q) shift, weight -1",
              lambda s, o, n: ops.shift_operator_rb(_or(o, 6), _or(n, 100), s)),
    ]


# -- qcalc ----------------------------------------------------------------

def _inversions_all(n_max: int) -> CheckReport:
    count = 0
    for n in range(n_max + 1):
        for k in range(n + 1):
            count += 1
            r = qcalc.inversion_gaussian_check(n, k)
            if not r.holds:
                return CheckReport("inversions", None, count, n_max, None, "fails", r.witness)
    return CheckReport("inversions", None, count, n_max, None, "holds")


def _qcalc_checks() -> List[Check]:
    L = lambda name: qcalc.qspecies_from_linear(species.builtin_species(name, 7))
    return [
        Check("qcalc.twisted", "holds", "P(f)P(g) = P(P(f)g) + P(f S(P(g))), P = q-integral, S = q-shift",
              lambda s, o, n: ops.check_twisted_rb(ops.q_integration_operator(), _or(n, 200), _or(o, 8), s)),
        Check("qcalc.twisted.qpoly", "holds", "same identity with Z[q] coefficients",
              lambda s, o, n: ops.check_twisted_rb(ops.q_integration_operator("qpoly"), _or(n, 50), _or(o, 6), s)),
        Check("qcalc.pascal", "holds", "binom(n,k)_q = binom(n-1,k)_q + q^(n-k) binom(n-1,k-1)_q",
              lambda s, o, n: qcalc.q_pascal_check(12)),
        Check("qcalc.inversions", "holds", "sum over k-subsets of q^inversions = binom(n,k)_q",
              lambda s, o, n: _inversions_all(10)),
        Check("qcalc.species.E_L", "holds", "twisted bijection Pq(F)Pq(G) -> Pq(Pq(F)G) + Pq(F Sq(Pq(G)))",
              lambda s, o, n: qcalc.twisted_species_check(L("E"), L("L"), 7)),
        Check("qcalc.species.L_E", "holds", "twisted bijection, F = L, G = E",
              lambda s, o, n: qcalc.twisted_species_check(L("L"), L("E"), 7)),
        Check("qcalc.species.X_L", "holds", "twisted bijection, F = X, G = L",
              lambda s, o, n: qcalc.twisted_species_check(L("X"), L("L"), 7)),
    ]


# -- species ----------------------------------------------------------------

def _witness_check(a: str, b: str, n_max: int) -> CheckReport:
    total = 0
    for n in range(1, n_max + 1):
        F, G = species.builtin_species(a, n_max), species.builtin_species(b, n_max)
        try:
            w = species.weight0_bijection_witness(F, G, n)
        except species.BijectionError as err:
            return CheckReport("bijection(%s,%s)" % (a, b), 0, total, n_max, None, "fails",
                               {"n": n, "error": str(err), "structure": repr(err.structure)})
        total += len(w.mapping)
    return CheckReport("bijection(%s,%s)" % (a, b), 0, total, n_max, None, "holds")


def _graded_sets(seed, samples: int) -> CheckReport:
    for i in range(samples):
        rng = ops.sample_rng(seed, i)
        a = species.GradedSet.from_grades(rng.randint(-4, 4) for _ in range(rng.randint(0, 6)))
        b = species.GradedSet.from_grades(rng.randint(-4, 4) for _ in range(rng.randint(0, 6)))
        lhs, rhs = species.gradedset_rb_sides(a, b)
        if lhs != rhs:
            return CheckReport("graded_sets", -1, samples, None, seed, "fails",
                               {"sample": i, "a": list(a.grades), "b": list(b.grades)})
    return CheckReport("graded_sets", -1, samples, None, seed, "holds")


def _species_checks() -> List[Check]:
    out = [
        Check("species.valuation", "holds", "|F+G| = |F|+|G|, |FG| = |F||G|, |P(F)| = integral of |F|",
              lambda s, o, n: species.valuation_laws_check(_or(o, 8))),
        Check("species.graded_sets", "holds", "negative-part functor on graded sets, weight -1",
              lambda s, o, n: _graded_sets(s, _or(n, 200))),
    ]
    for a in ("E", "X", "L"):
        for b in ("E", "X", "L"):
            out.append(Check("species.bijection(%s,%s)" % (a, b), "holds",
                             "P(F)P(G) ~ P(P(F)G) + P(FP(G)) by the block holding the maximum",
                             lambda s, o, n, a=a, b=b: _witness_check(a, b, _or(o, 8))))
    return out


# -- poset ----------------------------------------------------------------

def _all_locally_chain(strict: bool) -> CheckReport:
    count = 0
    for X in ps.locally_chain_posets(5):
        r = ps.exhaustive_poset_check(X, strict)
        count += r.samples
        if not r.holds:
            return r
    return CheckReport("locally_chain_posets<=5:%s" % ("P_<" if strict else "P_<="),
                       1 if strict else -1, count, None, None, "holds")


def poset_checks_for(X: ps.FinitePoset) -> List[Check]:
    expect = "holds" if X.is_locally_chain() else "fails"
    return [
        Check("poset.%s.P_le" % X.name, expect, "P_<=(f)(j) = sum of f(i) over i <= j, weight -1",
              lambda s, o, n: ps.exhaustive_poset_check(X, False)),
        Check("poset.%s.P_lt" % X.name, expect, "P_<(f)(j) = sum of f(i) over i < j, weight +1",
              lambda s, o, n: ps.exhaustive_poset_check(X, True)),
    ]


def _poset_checks() -> List[Check]:
    return [
        Check("poset.locally_chain.P_le", "holds", "P_<= on every poset of size <= 5 with chain down-sets",
              lambda s, o, n: _all_locally_chain(False)),
        Check("poset.locally_chain.P_lt", "holds", "P_< on every poset of size <= 5 with chain down-sets",
              lambda s, o, n: _all_locally_chain(True)),
    ] + poset_checks_for(ps.diamond()) + [
        Check("poset.incidence.P_A", "fails", "P_A(f)(j) = sum A(i,j) f(i) for a random incidence element A",
              lambda s, o, n: ps.incidence_rb_counterexample(ps.chain(3), _or(n, 100), s)),
    ]


# -- field ----------------------------------------------------------------

def _euler_lagrange_example() -> CheckReport:
    U = ft.Universe(1, 1)
    phi, phi1, phi2 = U.phi(1), U.phi(1, 1), U.phi(1, 2)
    l = ft.PhaseSeries.monomial(U, {phi1: 2}) - ft.PhaseSeries.monomial(U, {phi: 2})
    got = ft.euler_lagrange(l, 1, 1)
    want = ft.PhaseSeries(U, {MultiIndex.single(phi): -1, MultiIndex.single(phi2): -1})
    verdict = "holds" if got == want else "fails"
    return CheckReport("euler_lagrange", None, 1, None, None, verdict,
                       None if got == want else {"got": ft.phase_to_json(got), "want": ft.phase_to_json(want)})


def _commutator_generators() -> CheckReport:
    U = ft.Universe(1, 1)
    k = ft.PhaseSeries.var(U, U.phi(1), hbar_order=3)
    kb = ft.PhaseSeries.var(U, U.phi(1).bar(), hbar_order=3)
    got = ft.moyal_star(k, kb) - ft.moyal_star(kb, k)
    want = ft.PhaseSeries.var(U, ft.HBAR, hbar_order=3) * 2
    ok = got == want
    return CheckReport("moyal_generators", None, 1, 3, None, "holds" if ok else "fails",
                       None if ok else {"got": ft.phase_to_json(got)})


def _field_checks() -> List[Check]:
    U = ft.Universe(1, 2)
    J = [U.phi(1)]
    return [
        Check("field.euler_lagrange", "holds", "e(phi_1^2/2! - phi^2/2!) = -phi - phi_2",
              lambda s, o, n: _euler_lagrange_example()),
        Check("field.moyal.generators", "holds", "k*kbar - kbar*k = 2 hbar",
              lambda s, o, n: _commutator_generators()),
        Check("field.moyal.associativity", "holds", "(f*g)*h = f*(g*h) through hbar^2, degree <= 3",
              lambda s, o, n: ft.moyal_associativity_check(_or(n, 50), 2, s)),
        Check("field.moyal.commutator", "holds", "f*g - g*f = 2 hbar {f, g} through hbar^2",
              lambda s, o, n: ft.moyal_commutator_check(_or(n, 50), s)),
        Check("field.p_J.classical", "holds", "p_J weight -1 with the commutative product (hbar order 0)",
              lambda s, o, n: ft.star_pJ_check(J, _or(n, 200), 0, s, U)),
        Check("field.p_J.star_probe", "fails", "p_J weight -1 with the star product at hbar order 1",
              lambda s, o, n: ft.star_pJ_check(J, _or(n, 20), 1, s, U)),
    ]


SUITE_CHECKS: Dict[str, Callable[[], List[Check]]] = {
    "laurent": _laurent_checks,
    "integration": _integration_checks,
    "qcalc": _qcalc_checks,
    "species": _species_checks,
    "poset": _poset_checks,
    "field": _field_checks,
}


def suite_checks(name: str) -> List[Check]:
    if name == "all":
        return [c for s in SUITES for c in SUITE_CHECKS[s]()]
    if name not in SUITE_CHECKS:
        raise KeyError("unknown suite %r; choose from all, %s" % (name, ", ".join(SUITES)))
    return SUITE_CHECKS[name]()


def run_checks(checks: List[Check], seed=DEFAULT_SEED, order: Optional[int] = None,
               samples: Optional[int] = None, progress: Optional[Callable[[CheckResult, float], None]] = None
               ) -> List[CheckResult]:
    out = []
    for c in checks:
        start = time.perf_counter()
        r = CheckResult(c, c.run(seed, order, samples))
        if progress:
            progress(r, time.perf_counter() - start)
        out.append(r)
    return out


def suite_report(name: str, results: List[CheckResult], seed, order, samples) -> dict:
    return {
        "suite": name,
        "seed": seed,
        "order": order,
        "samples": samples,
        "ok": all(r.ok for r in results),
        "checks": [r.to_json() for r in results],
    }


def dump_json(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run_suite(name: str, seed=DEFAULT_SEED, order: Optional[int] = None, samples: Optional[int] = None,
              progress=None):
    """Run a suite; returns (exit code, JSON report)."""
    results = run_checks(suite_checks(name), seed, order, samples, progress)
    report = suite_report(name, results, seed, order, samples)
    return (0 if report["ok"] else 1), report
