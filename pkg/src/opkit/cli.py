"""Command-line surface: plan, certify, reduce, verify, symmetry, system.

Usage:
    opkit <mode> --job <file.json> [--human] [--order <lex|grlex|grevlex>]
                 [--seed <n>]

The job file is a single JSON object; all output goes to stdout as JSON
(sorted keys, stable ordering) unless --human asks for prose.  Exit codes:
0 success, 2 input error, 3 resource cap exceeded, 4 verification or
feasibility failure.

Job fields (mode-dependent):
    variables    list of variable names (required)
    factors      list of expression strings (plan/certify/reduce/symmetry/system)
    lambdas      list of rationals "a/b"; replaces factors with (x + l_i)
    instance     {"kind": "truncated_derivative", "max_degree": n} or
                 {"kind": "matrices", "generators": [grid, ...]} with grids
                 of rational strings, row-major
    f            vector of rational strings, or "random-in-range"
    g            list of vectors (system mode)
    constraints  list of expression strings (system mode)
    certificate  {"alpha": [[..]..], "cofactors": ["expr", ..]} (verify mode)
    dual_certificate  {"beta": [[..]..], "cofactors": [["expr", ..], ..]}
    symmetry     matrix grid: an explicit S to decompose (symmetry mode)
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .backend import (Matrix, OperatorInstance, affine_sets_equal, as_vector,
                      instantiate, kernel_basis,
                      make_truncated_derivative_instance, solve_affine)
from .certify import (Certificate, DualCertificate, UnivariateSpec,
                      dual_certificate, dual_to_alpha,
                      univariate_certificate, univariate_factors,
                      verify_certificate)
from .errors import (InputError, IntegrabilityError, MembershipError,
                     OpkitError, ParseError, ResourceLimitError,
                     VerificationError)
from .planner import SetSystem, plan_decomposition
from .poly import (DEFAULT_ORDER, MonomialOrder, Polynomial,
                   format_polynomial, parse_polynomial, product)
from .reducer import (find_system_certificate, integrability_violations,
                      recombined_solution_set, split, system_map_B,
                      system_map_F, system_split, verify_system_certificate)
from .symmetry import (FormalSymmetry, enumerate_formal_symmetries,
                       formal_from_generalized, generalized_from_formal,
                       induced_kernel_map, is_formal_symmetry)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RESOURCE = 3
EXIT_VERIFICATION = 4

MODES = ("plan", "certify", "reduce", "verify", "symmetry", "system")


class JobSpec:
    """Validated job file contents."""

    def __init__(self, data: dict, order: MonomialOrder, seed: int):
        if not isinstance(data, dict):
            raise InputError("job file must contain a JSON object")
        self.order = order
        self.seed = seed
        self.variables = data.get("variables")
        if (not isinstance(self.variables, list) or not self.variables
                or not all(isinstance(v, str) for v in self.variables)):
            raise InputError("'variables' must be a nonempty list of names")
        self.raw = data
        self.lambdas: Optional[UnivariateSpec] = None
        if "lambdas" in data:
            if "factors" in data:
                raise InputError("give either 'lambdas' or 'factors', not both")
            if len(self.variables) != 1:
                raise InputError("'lambdas' requires exactly one variable")
            self.lambdas = UnivariateSpec.of(
                [self._rational(v, "lambdas") for v in data["lambdas"]])
            self.factors = univariate_factors(self.lambdas)
        elif "factors" in data:
            raw = data["factors"]
            if not isinstance(raw, list) or not raw:
                raise InputError("'factors' must be a nonempty list of expressions")
            self.factors = [parse_polynomial(s, self.variables) for s in raw]
        else:
            self.factors = None

    @staticmethod
    def _rational(value, where: str) -> Fraction:
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad rational {value!r} in {where!r}") from None

    def require_factors(self) -> list[Polynomial]:
        if self.factors is None:
            raise InputError("this mode requires 'factors' (or 'lambdas')")
        return self.factors

    def instance(self) -> Optional[OperatorInstance]:
        desc = self.raw.get("instance")
        if desc is None:
            return None
        if not isinstance(desc, dict) or "kind" not in desc:
            raise InputError("'instance' must be an object with a 'kind'")
        kind = desc["kind"]
        if kind == "truncated_derivative":
            max_degree = desc.get("max_degree")
            if not isinstance(max_degree, int) or max_degree < 1:
                raise InputError("'max_degree' must be a positive integer")
            return make_truncated_derivative_instance(
                len(self.variables), max_degree)
        if kind == "matrices":
            grids = desc.get("generators")
            if not isinstance(grids, list) or len(grids) != len(self.variables):
                raise InputError(
                    "'generators' must list one matrix per variable")
            mats = [Matrix.from_strings(g) for g in grids]
            return OperatorInstance.of(mats)
        raise InputError(f"unknown instance kind {kind!r}")

    def vector(self, key: str, dimension: int, rng: random.Random,
               in_range_of: Optional[Matrix] = None) -> Optional[tuple]:
        raw = self.raw.get(key)
        if raw is None:
            return None
        if raw == "random-in-range":
            if in_range_of is None:
                raise InputError(f"'{key}': random-in-range needs an instance")
            u = [Fraction(rng.randint(-9, 9)) for _ in range(dimension)]
            return in_range_of.apply(u)
        if not isinstance(raw, list) or len(raw) != dimension:
            raise InputError(f"'{key}' must be a vector of length {dimension}")
        return as_vector([self._rational(v, key) for v in raw])

    def index_family(self, raw, what: str) -> SetSystem:
        factors = self.require_factors()
        if not isinstance(raw, list):
            raise InputError(f"{what} must be a list of index lists")
        try:
            sets = [[int(i) for i in J] for J in raw]
        except (TypeError, ValueError):
            raise InputError(f"{what} must contain integer indices") from None
        return SetSystem.of(len(factors) - 1, sets)


def load_job(path: str, order: MonomialOrder, seed: int) -> JobSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read job file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"job file is not valid JSON: {exc}") from None
    return JobSpec(data, order, seed)


# ---------------------------------------------------------------------------
# Mode implementations; each returns a JSON-ready dict.
# ---------------------------------------------------------------------------

def _fmt(job: JobSpec, p: Polynomial) -> str:
    return format_polynomial(p, job.variables)


def cmd_plan(job: JobSpec) -> dict:
    factors = job.require_factors()
    plan = plan_decomposition(factors, job.order)
    return {
        "mode": "plan",
        "ok": True,
        "order": job.order.value,
        "variables": list(job.variables),
        "factors": [_fmt(job, p) for p in factors],
        "coincidence_edges": plan.graph.canonical_edges(),
        "components": [list(c) for c in plan.components],
        "grouped_factors": [_fmt(job, p) for p in plan.grouped_factors],
        "beta_min": plan.beta_min.canonical(),
        "alpha": plan.alpha_opt.canonical() if plan.alpha_opt else None,
        "decomposition_available": plan.alpha_opt is not None,
    }


def _certificates(job: JobSpec) -> tuple[dict, list, Certificate]:
    """Shared by certify/reduce/symmetry: plan, dual certs, alpha cert."""
    factors = job.require_factors()
    out = cmd_plan(job)
    if job.lambdas is not None:
        cert = univariate_certificate(job.lambdas)
        ok, _ = verify_certificate(cert, factors)
        out["lambdas"] = [str(l) for l in job.lambdas.lambdas]
        out["dual_certificates"] = []
        out["alpha_certificate"] = _alpha_cert_json(job, cert, ok)
        return out, factors, cert
    if not out["decomposition_available"]:
        raise VerificationError(
            "no decomposition is available for these factors "
            "(no factor subset generates the unit ideal)")
    plan_beta = job.index_family(out["beta_min"], "beta_min")
    dual = dual_certificate(factors, plan_beta, job.order)
    duals_json = []
    for J, items in dual.sorted_items():
        duals_json.append({
            "J": sorted(J),
            "cofactors": [{"j": j, "Q": _fmt(job, q)} for j, q in items],
            "verified": True,
        })
    cert = dual_to_alpha(dual, factors)
    ok, _ = verify_certificate(cert, factors)
    out["dual_certificates"] = duals_json
    out["alpha_certificate"] = _alpha_cert_json(job, cert, ok)
    return out, factors, cert


def _alpha_cert_json(job: JobSpec, cert: Certificate, ok: bool) -> dict:
    return {
        "alpha": cert.alpha.canonical(),
        "cofactors": [{"J": sorted(J), "Q": _fmt(job, q)}
                      for J, q in cert.sorted_items()],
        "verified": ok,
    }


def cmd_certify(job: JobSpec) -> dict:
    out, _, _ = _certificates(job)
    out["mode"] = "certify"
    return out


def cmd_reduce(job: JobSpec) -> dict:
    out, factors, cert = _certificates(job)
    out["mode"] = "reduce"
    inst = job.instance()
    report, _ = split(cert, factors, job.variables)
    out["report"] = report.to_json_dict()
    if inst is None:
        return out
    nvars = factors[0].variable_count
    p_full = instantiate(product(factors, nvars), inst)
    rng = random.Random(job.seed)
    f = job.vector("f", inst.dimension, rng, in_range_of=p_full)
    if f is None:
        raise InputError("reduce with an instance needs 'f'")
    out["instance"] = {"dimension": inst.dimension}
    out["f"] = [str(v) for v in f]
    direct = solve_affine(p_full, f)
    out["f_in_range"] = not direct.is_empty()
    _, subsolutions = split(cert, factors, job.variables, inst, f)
    subs_json = []
    for J in cert.alpha:
        sol = subsolutions[J]
        subs_json.append({
            "J": sorted(J),
            "solvable": not sol.is_empty(),
            "kernel_dim": None if sol.is_empty() else sol.dimension(),
        })
    out["subproblem_solutions"] = subs_json
    if direct.is_empty():
        out["solution_sets_equal"] = None
        out["recombined_solves"] = None
        return out
    recombined = recombined_solution_set(cert, factors, inst, subsolutions)
    solves = (not recombined.is_empty()
              and list(p_full.apply(recombined.particular)) == list(f))
    out["recombined_solves"] = solves
    out["recombined_particular"] = (
        None if recombined.is_empty()
        else [str(v) for v in recombined.particular])
    out["solution_sets_equal"] = affine_sets_equal(direct, recombined)
    if not (solves and out["solution_sets_equal"]):
        raise VerificationError("reduced system failed to reproduce the solution set")
    return out


def cmd_verify(job: JobSpec) -> dict:
    factors = job.require_factors()
    checks = []
    all_ok = True
    raw_cert = job.raw.get("certificate")
    if raw_cert is not None:
        alpha = job.index_family(raw_cert.get("alpha"), "certificate.alpha")
        exprs = raw_cert.get("cofactors")
        members = sorted(alpha.sets, key=sorted)
        if not isinstance(exprs, list) or len(exprs) != len(members):
            raise InputError("certificate cofactors must match alpha, in "
                             "canonical (sorted) order")
        cofactors = {J: parse_polynomial(s, job.variables)
                     for J, s in zip(members, exprs)}
        cert = Certificate(alpha, cofactors)
        ok, residual = verify_certificate(cert, factors)
        checks.append({"kind": "alpha", "verified": ok,
                       "residual": _fmt(job, residual)})
        all_ok &= ok
    raw_dual = job.raw.get("dual_certificate")
    if raw_dual is not None:
        beta = job.index_family(raw_dual.get("beta"), "dual_certificate.beta")
        exprs = raw_dual.get("cofactors")
        members = sorted(beta.sets, key=sorted)
        if not isinstance(exprs, list) or len(exprs) != len(members):
            raise InputError("dual cofactors must match beta, in canonical order")
        cofactors = {}
        for J, row in zip(members, exprs):
            indices = sorted(J)
            if not isinstance(row, list) or len(row) != len(indices):
                raise InputError(f"need one cofactor per index of {indices}")
            cofactors[J] = {j: parse_polynomial(s, job.variables)
                            for j, s in zip(indices, row)}
        dual = DualCertificate(beta, cofactors)
        ok, residual = verify_certificate(dual, factors)
        checks.append({"kind": "dual", "verified": ok,
                       "residual": _fmt(job, residual)})
        all_ok &= ok
    if not checks:
        raise InputError("verify mode needs 'certificate' or 'dual_certificate'")
    out = {"mode": "verify", "ok": bool(all_ok), "checks": checks,
           "order": job.order.value}
    if not all_ok:
        raise CommandFailed(out, EXIT_VERIFICATION)
    return out


def cmd_symmetry(job: JobSpec) -> dict:
    out, factors, cert = _certificates(job)
    out["mode"] = "symmetry"
    singletons = {frozenset((i,)) for i in range(len(factors))}
    if set(cert.alpha.sets) != singletons:
        raise VerificationError(
            "symmetry mode needs a singleton-family certificate; "
            "regroup the factors first")
    inst = job.instance()
    if inst is None:
        raise InputError("symmetry mode requires an 'instance'")
    nvars = factors[0].variable_count
    p_full = instantiate(product(factors, nvars), inst)
    kernel = kernel_basis(p_full)
    out["instance"] = {"dimension": inst.dimension}
    out["operator_kernel_dim"] = len(kernel)

    raw_s = job.raw.get("symmetry")
    if raw_s is not None:
        basis = [Matrix.from_strings(raw_s)]
        explicit = True
    else:
        from .symmetry import SYMMETRY_DIMENSION_CAP
        cap = job.raw.get("symmetry_cap", SYMMETRY_DIMENSION_CAP)
        if not isinstance(cap, int) or cap < 1:
            raise InputError("'symmetry_cap' must be a positive integer")
        basis = enumerate_formal_symmetries(p_full, dimension_cap=cap)
        explicit = False
    out["symmetry_space_dimension"] = (None if explicit else len(basis))

    pairs = [(i, j) for i in range(len(factors)) for j in range(len(factors))]
    reports = []
    reconstructed = []
    for idx, S in enumerate(basis):
        witness = is_formal_symmetry(S, p_full)
        if witness is None:
            raise VerificationError("the supplied matrix is not a formal symmetry")
        sym = FormalSymmetry(S, witness)
        entry = {"index": idx, "identities_hold": True,
                 "reconstructions_hold": True}
        if explicit:
            entry["S"] = S.to_strings()
            entry["S_prime"] = witness.to_strings()
            entry["generalized"] = []
        for i, j in pairs:
            gen = generalized_from_formal(sym, cert, i, j, factors, inst)
            back = formal_from_generalized(gen, cert, factors, inst)
            reconstructed.append(back.S)
            if explicit:
                entry["generalized"].append({
                    "i": i, "j": j,
                    "S_ij": gen.S_ij.to_strings(),
                    "S_prime_ij": gen.S_prime_ij.to_strings(),
                    "verified": True,
                })
        reports.append(entry)
    out["decompositions"] = reports

    if kernel and not explicit:
        induced = [induced_kernel_map(S, p_full) for S in basis]
        rebuilt = [induced_kernel_map(S, p_full) for S in reconstructed]
        from .backend import spans_equal
        flat = lambda ms: [tuple(v for row in m._entries for v in row)
                           for m in ms if m is not None]
        dim_a = len(kernel) ** 2
        a, b = flat(induced), flat(rebuilt)
        from .backend import _rank_of_vectors
        out["generation"] = {
            "induced_dimension": _rank_of_vectors(a),
            "reconstructed_dimension": _rank_of_vectors(b),
            "equal": spans_equal(a, b),
        }
        if not out["generation"]["equal"]:
            raise VerificationError("generated symmetry spans differ on the kernel")
    else:
        out["generation"] = None
    return out


def cmd_system(job: JobSpec) -> dict:
    factors = job.require_factors()
    raw_constraints = job.raw.get("constraints")
    if not isinstance(raw_constraints, list) or not raw_constraints:
        raise InputError("system mode needs a nonempty 'constraints' list")
    constraints = [parse_polynomial(s, job.variables) for s in raw_constraints]
    out = {
        "mode": "system",
        "ok": True,
        "order": job.order.value,
        "variables": list(job.variables),
        "factors": [_fmt(job, p) for p in factors],
        "constraints": [_fmt(job, r) for r in constraints],
    }
    sys_cert = find_system_certificate(factors, constraints, job.order)
    out["certificate_found"] = sys_cert is not None
    if sys_cert is None:
        out["ok"] = False
        raise CommandFailed(out, EXIT_VERIFICATION)
    ok, _ = verify_system_certificate(sys_cert, factors, constraints)
    out["certificate"] = {
        "Q": [_fmt(job, q) for q in sys_cert.q_cofactors],
        "S": [_fmt(job, s) for s in sys_cert.s_cofactors],
        "verified": ok,
    }
    inst = job.instance()
    if inst is None:
        return out
    nvars = factors[0].variable_count
    p_full = instantiate(product(factors, nvars), inst)
    rng = random.Random(job.seed)
    f = job.vector("f", inst.dimension, rng, in_range_of=p_full)
    raw_g = job.raw.get("g")
    if f is None or raw_g is None:
        raise InputError("system mode with an instance needs 'f' and 'g'")
    if not isinstance(raw_g, list) or len(raw_g) != len(constraints):
        raise InputError("'g' must list one vector per constraint")
    gs = [as_vector([job._rational(v, "g") for v in g]) for g in raw_g]
    violations = integrability_violations(factors, constraints, f, gs, inst)
    out["integrability"] = {"ok": not violations, "violations": violations}
    if violations:
        out["ok"] = False
        raise CommandFailed(out, EXIT_VERIFICATION)
    report = system_split(sys_cert, factors, constraints, f, gs, inst)
    out["subsystems"] = list(report.subsystems)
    out["solutions"] = [
        {"solvable": not sol.is_empty(),
         "kernel_dim": None if sol.is_empty() else sol.dimension()}
        for sol in report.solutions
    ]
    if all(not sol.is_empty() for sol in report.solutions):
        parts = [sol.particular for sol in report.solutions]
        u = system_map_B(sys_cert, factors, constraints, inst, parts, gs)
        solves = (list(p_full.apply(u)) == list(f)
                  and all(list(instantiate(r, inst).apply(u)) == list(g)
                          for r, g in zip(constraints, gs)))
        back = system_map_F(factors, inst, u)
        out["round_trips"] = {
            "recombined_solves_system": solves,
            "FB_is_identity_on_parts": list(back) == list(map(tuple, parts)),
        }
        if not all(out["round_trips"].values()):
            raise VerificationError("system round trips failed")
    return out


class CommandFailed(Exception):
    """Carries a JSON report that should be printed before a failure exit."""

    def __init__(self, report: dict, code: int):
        super().__init__(f"exit {code}")
        self.report = report
        self.code = code


# ---------------------------------------------------------------------------
# Rendering and entry point
# ---------------------------------------------------------------------------

def _render_human(report: dict) -> str:
    lines = [f"mode: {report.get('mode')}   ok: {report.get('ok')}"]
    for key in sorted(report):
        if key in ("mode", "ok"):
            continue
        value = report[key]
        if isinstance(value, (list, dict)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


def _emit(report: dict, human: bool) -> None:
    if human:
        print(_render_human(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="opkit",
        description="exact decomposition certificates for commuting "
                    "polynomial operators")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--job", required=True, help="path to the JSON job file")
    parser.add_argument("--human", action="store_true",
                        help="prose output instead of JSON")
    parser.add_argument("--order", default=DEFAULT_ORDER.value,
                        choices=[o.value for o in MonomialOrder])
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for random-in-range vectors")
    args = parser.parse_args(argv)

    handlers = {
        "plan": cmd_plan,
        "certify": cmd_certify,
        "reduce": cmd_reduce,
        "verify": cmd_verify,
        "symmetry": cmd_symmetry,
        "system": cmd_system,
    }
    try:
        job = load_job(args.job, MonomialOrder.from_name(args.order), args.seed)
        report = handlers[args.mode](job)
    except CommandFailed as failed:
        _emit(failed.report, args.human)
        return failed.code
    except (ParseError, InputError) as exc:
        print(f"opkit: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"opkit: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (VerificationError, MembershipError, IntegrabilityError) as exc:
        print(f"opkit: verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except OpkitError as exc:
        print(f"opkit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(report, args.human)
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
