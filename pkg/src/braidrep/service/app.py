"""HTTP service exposing the representation toolkit.

Every successful payload carries ``"schema": 1`` and a ``"command"`` key so
clients can render it without knowing which endpoint produced it.  Domain
errors map to HTTP 400 with an ``exit_code`` hint (2 for bad input, 3 for an
exhausted search budget); a verification that runs but fails stays HTTP 200
with ``ok: false``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..analysis import (
    DiagonalConjugator,
    burnside_irreducible,
    conjugate_spec,
    find_invariant_vector,
    forbidden_audit,
    generic_irreducibility,
    kernel_witness,
)
from ..catalog import builtin_catalog, enumerate_families, expected_family_count
from ..classifier import BlockLayout, classify_group
from ..errors import BraidRepError, BudgetExceeded, InvalidChoice
from ..lkb import LKBRep, full_lkb, full_sigma_at_t1, m2wb3_extension, welded_lkb
from ..localrep import (
    ExplicitRep,
    LocalRepSpec,
    RepLike,
    verify_representation,
)
from ..matrix import Matrix
from ..presentations import Presentation, build_presentation
from ..symalg import RationalFunction
from .models import (
    AnalyzeRequest,
    ClassifyRequest,
    LKBRequest,
    PresentRequest,
    VerifyRequest,
)

SCHEMA = 1


def parse_value(text: str) -> RationalFunction:
    """Parse a parameter value: a rational number, a variable, or 1/variable."""
    s = text.strip()
    try:
        return RationalFunction.constant(Fraction(s))
    except (ValueError, ZeroDivisionError):
        pass
    if s.startswith("1/") and s[2:].isidentifier():
        return RationalFunction.variable(s[2:], -1)
    if s.isidentifier():
        return RationalFunction.variable(s)
    raise InvalidChoice(
        f"cannot parse parameter value {text!r}; use a rational number, "
        "a variable name, or 1/<variable>"
    )


def _parse_params(raw: dict[str, str]) -> dict[str, RationalFunction]:
    return {name: parse_value(text) for name, text in raw.items()}


def _presentation_for(spec: RepLike) -> Presentation:
    k = spec.k if spec.k >= 1 else 1
    return build_presentation(spec.group, spec.n, k)


def _resolved_spec(
    family: str,
    n: int,
    k: Optional[int],
    params: dict[str, str],
) -> RepLike:
    spec = builtin_catalog(family, n, k)
    if params:
        spec = spec.substitute(_parse_params(params))
    return spec


def _matrix_rows(m: Matrix) -> list[list[str]]:
    return [
        [str(m.entry(i, j)) for j in range(m.ncols)]
        for i in range(m.nrows)
    ]


def _base_payload(command: str, **extra) -> dict:
    payload = {"schema": SCHEMA, "command": command}
    payload.update(extra)
    return payload


def _report_payload(report) -> dict:
    first = report.first_violation
    return {
        "ok": report.ok,
        "checked": report.checked,
        "first_violation": None if first is None else str(first),
        "side_conditions": [str(c) for c in report.side_conditions],
        "verdicts": [v.to_json() for v in report.verdicts],
    }


def _lkb_rep(req: LKBRequest) -> LKBRep:
    if req.variant == "full":
        return full_lkb(req.n)
    if req.variant == "welded":
        return welded_lkb(req.n)
    if req.n != 3:
        raise InvalidChoice(f"the m2wb3 extension is defined at n=3, got n={req.n}")
    return m2wb3_extension()


def _lkb_presentation(rep: LKBRep) -> Presentation:
    explicit = rep.to_explicit()
    k = explicit.k if explicit.k >= 1 else 1
    return build_presentation(explicit.group, explicit.n, k)


_LKB_DEFAULT_SAMPLE = {
    "full": {"t": Fraction(3), "q": Fraction(2)},
    "welded": {"q": Fraction(2)},
    "m2wb3": {"q": Fraction(2), "b": Fraction(3)},
}


def create_app() -> FastAPI:
    app = FastAPI(title="braidrep")

    @app.exception_handler(BraidRepError)
    async def _domain_error(request: Request, exc: BraidRepError) -> JSONResponse:
        code = 3 if isinstance(exc, BudgetExceeded) else 2
        return JSONResponse(
            status_code=400,
            content={
                "schema": SCHEMA,
                "error": {
                    "type": type(exc).__name__,
                    "message": str(exc),
                    "exit_code": code,
                },
            },
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={
                "schema": SCHEMA,
                "error": {
                    "type": "ValueError",
                    "message": str(exc),
                    "exit_code": 2,
                },
            },
        )

    @app.get("/health")
    def health() -> JSONResponse:
        return JSONResponse({"status": "ok", "schema": SCHEMA})

    @app.post("/present")
    def present(req: PresentRequest) -> JSONResponse:
        pres = build_presentation(req.group, req.n, req.k)
        data = pres.to_json()
        payload = _base_payload(
            "present",
            group=data["group"],
            n=data["n"],
            k=data["k"],
            generators=data["generators"],
            relations=data["relations"],
        )
        if req.show_forbidden:
            payload["forbidden"] = data["forbidden"]
        return JSONResponse(payload)

    @app.post("/classify")
    def classify(req: ClassifyRequest) -> JSONResponse:
        result = classify_group(req.group, req.k, cap=req.cap)
        layout = BlockLayout(req.k)
        by_name = {s.name: s for s in enumerate_families(req.group, req.k, 3)}
        families = []
        for row in result.rows:
            spec = by_name[row.family]
            blocks = {"sigma": str(spec.sigma_block)}
            for a, b in enumerate(spec.rho_blocks):
                blocks[f"rho^{a}"] = str(b)
            families.append({
                "family": row.family,
                "blocks": blocks,
                "side_conditions": [str(c) for c in spec.side_conditions],
                "free_parameters": list(
                    row.branch.free_variables(layout.variables)
                ),
                "branch": row.branch.to_json(),
            })
        payload = _base_payload(
            "classify",
            group=req.group,
            k=req.k,
            count=result.count,
            expected=expected_family_count(req.group, req.k),
            bijective=result.bijective,
            families=families,
            unmatched_branches=[b.to_json() for b in result.unmatched_branches],
            unmatched_families=list(result.unmatched_families),
        )
        return JSONResponse(payload)

    @app.post("/verify")
    def verify(req: VerifyRequest) -> JSONResponse:
        spec = _resolved_spec(req.family, req.n, req.k, req.params)
        pres = _presentation_for(spec)
        report = verify_representation(spec, pres, threads=req.threads)
        payload = _base_payload(
            "verify",
            family=spec.name,
            group=spec.group,
            n=spec.n,
            k=spec.k,
            params=dict(req.params),
            **_report_payload(report),
        )
        return JSONResponse(payload)

    @app.post("/analyze")
    def analyze(req: AnalyzeRequest) -> JSONResponse:
        spec = _resolved_spec(req.family, req.n, req.k, req.params)
        if req.conjugate is not None:
            if not isinstance(spec, LocalRepSpec):
                raise InvalidChoice(
                    "diagonal conjugation applies to 2-local specs only"
                )
            ladder = DiagonalConjugator.geometric(
                parse_value(req.conjugate), spec.n
            )
            spec = conjugate_spec(spec, ladder)
        payload = _base_payload(
            "analyze",
            family=spec.name,
            group=spec.group,
            n=spec.n,
            k=spec.k,
            check=req.check,
            params=dict(req.params),
        )
        if req.conjugate is not None:
            payload["conjugate"] = req.conjugate
        if req.check == "irreducible":
            verdict = generic_irreducibility(
                spec, samples=req.samples, seed=req.seed
            )
            if verdict.agree:
                summary = f"{verdict.kind} (generic, {verdict.samples} samples)"
            else:
                summary = f"Mixed outcomes across {verdict.samples} samples"
            payload["verdict"] = verdict.to_json()
            payload["summary"] = summary
            payload["seed"] = req.seed
        elif req.check == "invariant":
            if not isinstance(spec, LocalRepSpec):
                raise InvalidChoice(
                    "the invariant-vector search applies to 2-local specs only"
                )
            vec = find_invariant_vector(spec)
            payload["found"] = vec is not None
            payload["vector"] = None if vec is None else [str(v) for v in vec]
        elif req.check == "witness":
            pres = _presentation_for(spec)
            cert = kernel_witness(
                spec, pres, length=req.length, budget=req.budget
            )
            payload["found"] = cert is not None
            payload["certificate"] = None if cert is None else cert.to_json()
            if cert is not None:
                payload["certified"] = cert.certified
        elif req.check == "forbidden":
            pres = _presentation_for(spec)
            audit = forbidden_audit(spec, pres, threads=req.threads)
            payload["audit"] = audit.to_json()
        return JSONResponse(payload)

    @app.post("/lkb")
    def lkb(req: LKBRequest) -> JSONResponse:
        rep = _lkb_rep(req)
        payload = _base_payload(
            "lkb",
            variant=req.variant,
            n=req.n,
            check=req.check,
            dim=rep.dim,
        )
        if req.check == "matrices":
            payload["basis"] = [list(pair) for pair in rep.basis]
            payload["matrices"] = {
                str(g): _matrix_rows(m) for g, m in rep.matrices.items()
            }
        elif req.check == "relations":
            explicit = rep.to_explicit()
            pres = _lkb_presentation(rep)
            report = verify_representation(explicit, pres, threads=req.threads)
            payload.update(_report_payload(report))
        elif req.check == "t1":
            if req.variant != "full":
                raise InvalidChoice(
                    "the t=1 comparison evaluates the full variant; "
                    f"got variant {req.variant!r}"
                )
            welded = welded_lkb(req.n)
            differences = []
            for kgen in range(1, req.n):
                at_t1 = full_sigma_at_t1(req.n, kgen)
                target = welded.matrices[
                    next(
                        g for g in welded.matrices
                        if g.kind == "s" and g.index == kgen
                    )
                ]
                for i in range(at_t1.nrows):
                    for j in range(at_t1.ncols):
                        if at_t1.entry(i, j) != target.entry(i, j):
                            differences.append({
                                "generator": f"s{kgen}",
                                "row": i,
                                "col": j,
                                "full_t1": str(at_t1.entry(i, j)),
                                "welded": str(target.entry(i, j)),
                            })
            payload["equal"] = not differences
            payload["differences"] = differences
        elif req.check == "irreducible":
            sample = dict(_LKB_DEFAULT_SAMPLE[req.variant])
            for name, text in req.params.items():
                sample[name] = Fraction(text)
            verdict = burnside_irreducible(rep.to_explicit(), sample)
            payload["verdict"] = verdict.to_json()
            payload["sample"] = {
                name: str(value) for name, value in sorted(sample.items())
            }
        elif req.check == "witness":
            explicit = rep.to_explicit()
            pres = _lkb_presentation(rep)
            cert = kernel_witness(
                explicit, pres, length=req.length, budget=req.budget
            )
            payload["found"] = cert is not None
            payload["certificate"] = None if cert is None else cert.to_json()
            payload["budget"] = req.budget
            payload["length"] = req.length
        return JSONResponse(payload)

    return app


app = create_app()
