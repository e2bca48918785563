"""Hook specifications for finite-group providers."""

from typing import TYPE_CHECKING

import pluggy

if TYPE_CHECKING:
    from omega_nil.finquot.groups import FiniteGroup

PROJECT_NAME = "omega_nil_groups"

hookspec = pluggy.HookspecMarker(PROJECT_NAME)
hookimpl = pluggy.HookimplMarker(PROJECT_NAME)


class GroupProviderSpec:
    @hookspec(firstresult=True)
    def fq_parse_group(self, spec: str) -> "FiniteGroup | None":
        """Build the group named by ``spec``, or return ``None`` if not owned."""
