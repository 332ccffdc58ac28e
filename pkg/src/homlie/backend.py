"""Kernel backend selection.

The hot loops (minor expansion of alternating forms, coboundary assembly,
and the Lax-flow stepper) exist twice: compiled (homlie._core, Cython) and
pure numpy (homlie._core_py).  The compiled module is preferred when it
imported cleanly; setting the environment variable HOMLIE_PURE_PYTHON to a
nonempty value forces the fallback.  ``BACKEND`` records the choice.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("HOMLIE_PURE_PYTHON"):
    from . import _core_py as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _core_py as _impl

BACKEND = "python" if _impl.__name__.endswith("_core_py") else "cython"

__all__ = ["BACKEND", "wedge_coefficients", "assemble_coboundary", "rk4_flow"]


def _float_c(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def _intp_c(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.intp)


def wedge_coefficients(args, combos) -> np.ndarray:
    """Coordinates of the wedge of the columns of ``args`` (shape (m, k))
    over the lexicographic multi-index basis ``combos`` (shape (C, k)):
    entry c is the determinant of the rows ``combos[c]`` of ``args``."""
    return _impl.wedge_coefficients(_float_c(args), _intp_c(combos))


def assemble_coboundary(bracket_table, twist_table, combos_out, combos_in) -> np.ndarray:
    """Coboundary matrix between multi-index coefficient spaces; see the
    kernel modules for the exact convention."""
    return _impl.assemble_coboundary(
        _float_c(bracket_table),
        _float_c(twist_table),
        _intp_c(combos_out),
        _intp_c(combos_in),
    )


def rk4_flow(l0, beta, dt: float, nsteps: int) -> tuple[np.ndarray, int, bool]:
    """Advance the twisted Lax flow by ``nsteps`` RK4 steps of size ``dt``,
    re-symmetrizing after each step.  Returns (state, steps_done, ok)."""
    l0 = _float_c(l0)
    beta = _float_c(beta)
    if l0.shape != beta.shape or l0.ndim != 2 or l0.shape[0] != l0.shape[1]:
        raise ValueError("state and involution must be square matrices of equal shape")
    if nsteps < 0:
        raise ValueError("nsteps must be nonnegative")
    return _impl.rk4_flow(l0, beta, float(dt), int(nsteps))
