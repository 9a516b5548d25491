"""Selects the compiled kernels when available, numpy fallback otherwise.

Set MICROSWIM_BACKEND=python to force the fallback, =compiled to require the
extension (ImportError if missing); default is auto.
"""

import os

_requested = os.environ.get("MICROSWIM_BACKEND", "auto").strip().lower()

if _requested in ("auto", "", "compiled"):
    try:
        from microswim import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "MICROSWIM_BACKEND=compiled but microswim._core is not built; "
                "run `python setup.py build_ext --inplace` or reinstall"
            )
        from microswim import _purepy as _impl

        BACKEND = "python"
elif _requested in ("python", "purepy", "numpy"):
    from microswim import _purepy as _impl

    BACKEND = "python"
else:
    raise ValueError(
        f"unrecognized MICROSWIM_BACKEND={_requested!r}; "
        "use auto, compiled, or python"
    )

connection_restricted = _impl.connection_restricted
oracle_resistance = _impl.oracle_resistance
