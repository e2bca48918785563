"""Reports for every command: JSON documents and rich console rendering.

Each ``build_*`` function runs one analysis and returns an
:class:`AnalysisReport` whose ``fields`` hold JSON-ready values under the
stable names documented in the README.
"""

import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from omega_nil.analysis import (
    PERIODIC_CLASSIFICATION,
    FreenessReport,
    Presentation,
    PronilDescriptor,
    Verdict,
    flow_invariants,
    freeness_report,
    m_phi,
    perfectness_test,
    presentation_endomorphism,
    pronil_descriptor,
)
from omega_nil.errors import ParseError, PreconditionError
from omega_nil.finquot import (
    Exhausted,
    FiniteGroup,
    NotFound,
    QuotientCertificate,
    quotient_search,
)
from omega_nil.finquot.action import SearchResult
from omega_nil.finquot.groups import SL2
from omega_nil.intlinalg import (
    IntPoly,
    char_poly,
    incidence_matrix,
    pseudodeterminant,
    reciprocal_poly,
    reduce_mod_p,
    xi_pair,
)
from omega_nil.returns import (
    Connection,
    ReturnData,
    connection_order,
    find_connections,
    return_substitution,
)
from omega_nil.shiftlang import (
    Aperiodic,
    Periodic,
    PeriodicityVerdict,
    classify_periodicity,
    structural_flags,
)
from omega_nil.words import (
    Alphabet,
    FreeGroupEndo,
    Substitution,
    format_endomorphism,
    format_substitution,
    format_word,
    parse_word,
)

PDET_SIGN_NOTE = "pdet sign: lc(χ^rev)·(-1)^deg(χ^rev), the product of non-zero eigenvalues"


@dataclass
class AnalysisReport:
    command: str
    fields: dict[str, Any] = field(default_factory=dict)
    conclusion: str | None = None
    established: bool = True

    def to_json(self) -> dict[str, Any]:
        return {"command": self.command, **self.fields, "conclusion": self.conclusion}

    def write_json(self, path: Path) -> None:
        path.write_text(json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n")

    def render(self, console: Console) -> None:
        for title, value in self.fields.items():
            if isinstance(value, dict):
                console.print(_section_panel(title, value))
            else:
                console.print(f"[cyan]{escape(title)}:[/cyan] {escape(_plain(value))}")
        if self.conclusion:
            color = "green" if self.established else "yellow"
            console.print(f"[{color}]{escape(self.conclusion)}[/{color}]")


def _plain(value: Any) -> str:
    if isinstance(value, list):
        return ", ".join(_plain(v) for v in value) if value else "none"
    if isinstance(value, dict):
        return ", ".join(f"{k}={_plain(v)}" for k, v in value.items())
    if value is None:
        return "-"
    return str(value)


def _section_panel(title: str, values: dict[str, Any]) -> Panel:
    table = Table(show_header=False, box=None)
    table.add_column(style="bold")
    table.add_column()
    for key, value in values.items():
        table.add_row(escape(key), escape(_plain(value)))
    return Panel(table, title=escape(title), border_style="cyan")


# ── JSON renderings ─────────────────────────────────────────────────


def polynomial_json(poly: IntPoly) -> dict[str, Any]:
    return {
        "coefficients": list(poly.coeffs),
        "expanded": str(poly),
        "factored": poly.factored(),
    }


def periodicity_json(verdict: PeriodicityVerdict, alphabet: Alphabet) -> dict[str, Any]:
    if isinstance(verdict, Periodic):
        return {"verdict": "periodic", "period": format_word(verdict.period, alphabet)}
    if isinstance(verdict, Aperiodic):
        return {"verdict": "aperiodic"}
    return {"verdict": "unknown", "bound": verdict.bound}


def connection_json(c: Connection, alphabet: Alphabet) -> dict[str, Any]:
    return {
        "u": format_word(c.u, alphabet),
        "v": format_word(c.v, alphabet),
        "order": c.order,
    }


def returns_json(data: ReturnData, alphabet: Alphabet) -> dict[str, Any]:
    out: dict[str, Any] = {
        "connection": connection_json(data.connection, alphabet),
        "return_words": [format_word(r, alphabet) for r in data.returns],
    }
    if data.derived is not None:
        out["return_substitution"] = format_substitution(data.derived)
        out["image_lengths"] = [len(image) for image in data.derived.images]
    return out


def descriptor_json(d: PronilDescriptor) -> dict[str, Any]:
    return {
        "source": d.source,
        "generic_rank": d.generic_rank,
        "overrides": {str(p): rank for p, rank in sorted(d.overrides.items())},
        "pdet": d.pdet,
        "classification": d.classification(),
        "quotient_criterion": d.quotient_criterion(),
        "procyclic_quotients": d.procyclic_quotients(),
    }


def verdict_json(v: Verdict) -> dict[str, Any]:
    return {"status": v.label(), "witness": list(v.witness)}


def freeness_json(f: FreenessReport) -> dict[str, Any]:
    return {
        "perfect": f.perfect,
        "not_absolutely_free": verdict_json(f.not_absolutely_free),
        "not_relatively_free": verdict_json(f.not_relatively_free),
        "weak_test": verdict_json(f.weak_test),
        "constant_length": verdict_json(f.constant_length),
    }


def freeness_conclusion(f: FreenessReport) -> tuple[str, bool]:
    """Headline verdict and whether it is established."""
    if f.not_relatively_free.established:
        return f"not relatively free (witness p={f.not_relatively_free.witness[0]})", True
    if f.weak_test.established:
        p1, p2 = f.weak_test.witness
        return f"not relatively free (witnesses p1={p1}, p2={p2})", True
    if f.not_absolutely_free.established or f.constant_length.established:
        return "not absolutely free; relative freeness inconclusive", True
    return "all freeness tests inconclusive", False


def certificate_json(c: QuotientCertificate, group: FiniteGroup) -> dict[str, Any]:
    out: dict[str, Any] = {
        "group": group.name,
        "group_order": group.order,
        "tuple": [group.describe(h) for h in c.tuple_],
        "period": c.period,
        "generated_order": c.generated_order,
    }
    if isinstance(group, SL2):
        out["field"] = {"n": group.n, "polynomial": list(group.field.polynomial)}
    return out


# ── Builders ────────────────────────────────────────────────────────


def resolve_connection(s: Substitution, text: str) -> Connection:
    """Parse ``u,v`` in the display names of ``s`` and compute its order."""
    if text.count(",") != 1:
        raise ParseError(f"Expected a connection as 'u,v', got '{text}'")
    left, right = text.split(",")
    u, v = parse_word(left, s.alphabet), parse_word(right, s.alphabet)
    order = connection_order(s, u, v)
    if order is None:
        raise PreconditionError(f"({left.strip()}, {right.strip()}) is not a connection")
    return Connection(u, v, order)


def _input_json(s: Substitution) -> dict[str, Any]:
    flags = structural_flags(s)
    return {
        "substitution": format_substitution(s),
        "proper": flags.proper,
        "constant_length": flags.constant_length,
    }


def _periodic_report(command: str, s: Substitution, verdict: Periodic) -> AnalysisReport:
    return AnalysisReport(
        command,
        {"input": _input_json(s), "periodicity": periodicity_json(verdict, s.alphabet)},
        conclusion=f"periodic: the group is {PERIODIC_CLASSIFICATION}",
    )


def _choose_connection(
    s: Substitution, connection: str | None, max_len: int | None
) -> tuple[Connection, list[Connection]]:
    connections = find_connections(s, max_len)
    if connection is not None:
        return resolve_connection(s, connection), connections
    if not connections:
        raise PreconditionError("No connection found; raise --max-len")
    return connections[0], connections


def _prime_reductions(poly: IntPoly, primes: Iterable[int]) -> dict[str, str]:
    return {str(p): str(reduce_mod_p(poly, p)) for p in primes}


def build_analyze_report(
    s: Substitution,
    connection: str | None = None,
    max_len: int | None = None,
    periodicity_bound: int | None = None,
) -> AnalysisReport:
    verdict = classify_periodicity(s, periodicity_bound)
    if isinstance(verdict, Periodic):
        return _periodic_report("analyze", s, verdict)

    chosen, connections = _choose_connection(s, connection, max_len)
    data = return_substitution(s, chosen)
    assert data.derived is not None
    presentation = (
        presentation_endomorphism(s)
        if connection is None and structural_flags(s).proper
        else Presentation(data.derived, f"return substitution at {_pair(chosen, s.alphabet)}", data)
    )

    m_s = incidence_matrix(s)
    rev_s = reciprocal_poly(char_poly(m_s))
    rev_power = reciprocal_poly(char_poly(m_s**chosen.order))
    rev_ret = reciprocal_poly(char_poly(incidence_matrix(data.derived)))
    xi1, xi2 = xi_pair(rev_power, rev_ret)
    freeness = freeness_report(s, chosen, presentation)
    flow = flow_invariants(s, chosen, data)
    conclusion, established = freeness_conclusion(freeness)

    fields: dict[str, Any] = {
        "input": _input_json(s),
        "periodicity": periodicity_json(verdict, s.alphabet),
        "connections": [connection_json(c, s.alphabet) for c in connections],
        "returns": returns_json(data, s.alphabet),
        "polynomials": {
            "char_poly": polynomial_json(char_poly(m_s)),
            "reciprocal": polynomial_json(rev_s),
            "return_reciprocal": polynomial_json(rev_ret),
            "return_reductions": _prime_reductions(rev_ret, sorted(flow.pdet_primes)),
            "pdet": pseudodeterminant(m_s),
            "pdet_convention": PDET_SIGN_NOTE,
        },
        "xi": {"xi1": polynomial_json(xi1), "xi2": polynomial_json(xi2)},
        "m_phi": m_phi(s, chosen, data),
        "descriptor": descriptor_json(freeness.descriptor),
        "freeness": freeness_json(freeness),
        "flow_invariants": {
            "generic_degree": flow.generic_degree,
            "prime_degrees": {str(p): d for p, d in flow.prime_degrees},
            "pdet_primes": sorted(flow.pdet_primes),
        },
    }
    return AnalysisReport("analyze", fields, conclusion, established)


def _pair(c: Connection, alphabet: Alphabet) -> str:
    return f"({format_word(c.u, alphabet)}, {format_word(c.v, alphabet)})"


def build_returns_report(
    s: Substitution, connection: str | None = None, max_len: int | None = None
) -> AnalysisReport:
    chosen, connections = _choose_connection(s, connection, max_len)
    data = return_substitution(s, chosen)
    fields = {
        "input": _input_json(s),
        "connections": [connection_json(c, s.alphabet) for c in connections],
        "returns": returns_json(data, s.alphabet),
    }
    return AnalysisReport("returns", fields)


def build_nilquotient_report(
    e: Substitution | FreeGroupEndo,
    connection: str | None = None,
    periodicity_bound: int | None = None,
) -> AnalysisReport:
    """Descriptor of the maximal pronilpotent quotient.

    Free-group endomorphisms are taken as the presentation itself;
    substitutions go through :func:`presentation_endomorphism`.
    """
    if isinstance(e, FreeGroupEndo):
        descriptor = pronil_descriptor(e, "direct (free-group endomorphism)")
        fields: dict[str, Any] = {"input": {"endomorphism": format_endomorphism(e)}}
    else:
        verdict = classify_periodicity(e, periodicity_bound)
        if isinstance(verdict, Periodic):
            return _periodic_report("nilquotient", e, verdict)
        chosen = resolve_connection(e, connection) if connection else None
        presentation = presentation_endomorphism(e, chosen)
        descriptor = pronil_descriptor(
            presentation.endomorphism, presentation.source, presented=True
        )
        fields = {"input": _input_json(e)}
        if presentation.returns is not None:
            fields["returns"] = returns_json(presentation.returns, e.alphabet)
    fields["perfect"] = descriptor.generic_rank == 0 and not descriptor.overrides
    fields["descriptor"] = descriptor_json(descriptor)
    return AnalysisReport(
        "nilquotient", fields, descriptor.classification(), established=True
    )


def build_freeness_report(
    s: Substitution,
    connection: str | None = None,
    periodicity_bound: int | None = None,
) -> AnalysisReport:
    verdict = classify_periodicity(s, periodicity_bound)
    if isinstance(verdict, Periodic):
        return _periodic_report("freeness", s, verdict)
    chosen = resolve_connection(s, connection) if connection else None
    freeness = freeness_report(s, chosen)
    conclusion, established = freeness_conclusion(freeness)
    fields = {
        "input": _input_json(s),
        "freeness": freeness_json(freeness),
        "descriptor": descriptor_json(freeness.descriptor),
    }
    return AnalysisReport("freeness", fields, conclusion, established)


def build_invariants_report(
    s: Substitution,
    connection: str | None = None,
    max_len: int | None = None,
    periodicity_bound: int | None = None,
) -> AnalysisReport:
    verdict = classify_periodicity(s, periodicity_bound)
    if isinstance(verdict, Periodic):
        return _periodic_report("invariants", s, verdict)
    chosen, _ = _choose_connection(s, connection, max_len)
    data = return_substitution(s, chosen)
    flow = flow_invariants(s, chosen, data)
    fields = {
        "input": _input_json(s),
        "connection": connection_json(chosen, s.alphabet),
        "m_phi": m_phi(s, chosen, data),
        "flow_invariants": {
            "generic_degree": flow.generic_degree,
            "prime_degrees": {str(p): d for p, d in flow.prime_degrees},
            "pdet_primes": sorted(flow.pdet_primes),
        },
    }
    return AnalysisReport("invariants", fields)


def build_quotient_report(
    e: FreeGroupEndo,
    group: FiniteGroup,
    budget: int | None = None,
    exhaustive: bool | None = None,
) -> AnalysisReport:
    result: SearchResult = quotient_search(e, group, budget, exhaustive)
    fields: dict[str, Any] = {
        "input": {"endomorphism": format_endomorphism(e)},
        "group": {"name": group.name, "order": group.order},
        "perfect": perfectness_test(e),
    }
    if isinstance(result, QuotientCertificate):
        fields["certificate"] = certificate_json(result, group)
        return AnalysisReport(
            "quotient", fields, f"{group.name} is a continuous quotient", True
        )
    if isinstance(result, Exhausted):
        fields["search"] = {"verdict": "exhausted", "tuples": result.tuples_examined}
        return AnalysisReport(
            "quotient", fields, f"{group.name} is not a continuous quotient", True
        )
    assert isinstance(result, NotFound)
    fields["search"] = {"verdict": "not_found", "budget": result.budget, "steps": result.steps}
    return AnalysisReport(
        "quotient", fields, "no certificate within budget (inconclusive)", False
    )

