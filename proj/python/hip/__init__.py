"""Threat actor name normalization, alias graph construction, and analytics.

The heavy lifting lives in the compiled extension; this package re-exports
its surface. Typical use:

    import hip
    hip.normalize("The Gorgon Group")        # 'GORGON'
    g = hip.build("manifest.json")
    g.query("apt 32")["members"]
"""

from ._hip import (
    Graph,
    HipError,
    __version__,
    alias_pair_count,
    attribute,
    build,
    correlate,
    load,
    mig,
    normalize,
)

__all__ = [
    "Graph",
    "HipError",
    "__version__",
    "alias_pair_count",
    "attribute",
    "build",
    "correlate",
    "load",
    "mig",
    "normalize",
]
