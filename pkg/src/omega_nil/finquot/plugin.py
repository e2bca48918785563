"""Built-in finite-group providers and group-spec resolution.

A provider claims a spec by prefix (``sl2:``, ``perm:``) and returns ``None``
for anything else. Third-party providers register under the
``omega_nil_groups`` entry-point group.
"""

import re

import pluggy
from sympy.combinatorics import Permutation

from omega_nil.errors import GroupSpecError, PreconditionError
from omega_nil.finquot._hookspec import PROJECT_NAME, GroupProviderSpec, hookimpl
from omega_nil.finquot.groups import FiniteGroup, PermGroup, sl2_over_gf2n

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class SL2Provider:
    """Claims ``sl2:<n>``."""

    @hookimpl
    def fq_parse_group(self, spec: str) -> FiniteGroup | None:
        if not spec.startswith("sl2:"):
            return None
        value = spec.removeprefix("sl2:").strip()
        try:
            n = int(value)
        except ValueError as e:
            raise GroupSpecError(f"Expected an integer after 'sl2:', got '{value}'") from e
        try:
            return sl2_over_gf2n(n)
        except PreconditionError as e:
            raise GroupSpecError(str(e)) from e


def _parse_cycles(text: str) -> list[list[int]]:
    if _CYCLE_RE.sub("", text).strip():
        raise GroupSpecError(f"Cannot read cycle notation '{text}'")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        try:
            points = [int(x) for x in body.replace(",", " ").split()]
        except ValueError as e:
            raise GroupSpecError(f"Non-integer point in cycle '({body})'") from e
        if len(set(points)) != len(points) or any(p < 0 for p in points):
            raise GroupSpecError(f"Invalid cycle '({body})'")
        cycles.append(points)
    return cycles


class PermProvider:
    """Claims ``perm:<generator>,<generator>,...`` with generators in cycle notation."""

    @hookimpl
    def fq_parse_group(self, spec: str) -> FiniteGroup | None:
        if not spec.startswith("perm:"):
            return None
        body = spec.removeprefix("perm:").strip()
        generators = [
            _parse_cycles(part) for part in re.split(r",(?![^()]*\))", body) if part.strip()
        ]
        degree = 1 + max((p for g in generators for c in g for p in c), default=0)
        perms = [Permutation(g, size=degree) for g in generators]
        return PermGroup(perms, degree, spec)


SL2_PROVIDER = SL2Provider()
PERM_PROVIDER = PermProvider()


def plugin_manager() -> pluggy.PluginManager:
    pm = pluggy.PluginManager(PROJECT_NAME)
    pm.add_hookspecs(GroupProviderSpec)
    pm.register(SL2_PROVIDER, name="sl2")
    pm.register(PERM_PROVIDER, name="perm")
    pm.load_setuptools_entrypoints(PROJECT_NAME)
    return pm


def parse_group_spec(spec: str) -> FiniteGroup:
    """Resolve ``spec`` through the registered providers.

    Raises:
        GroupSpecError: If no provider claims ``spec`` or the claiming
            provider rejects it.
    """
    group = plugin_manager().hook.fq_parse_group(spec=spec.strip())
    if group is None:
        raise GroupSpecError(f"No group provider understands '{spec}'")
    return group
