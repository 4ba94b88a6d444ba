"""Batched dyadic kernels with a compiled core and a numpy fallback.

The compiled module ``_ckernels`` is built from Cython when a compiler is
available at install time. If it cannot be imported, the numpy
implementation in ``_pykernels`` is used. Both expose the same functions:

electric(k, R)
    Electric Green's dyadics for separations ``R`` of shape ``(N, 3)``.
magnetic(k, R)
    Magnetic Green's dyadics.
bundle(k, R, v)
    Green's dyadics, lag densities and their k-derivatives.
iso_levi(X, Y)
    Orientation-averaged Levi-Civita contraction of dyadic pairs.
fixed_levi(X, Y, a, b)
    The same contraction for fixed dipole directions.
fixed_contract(X, Y, a, b)
    Four-dipole contraction of one dyadic pair over batches of directions.
"""
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_API = ("electric", "magnetic", "bundle", "iso_levi", "fixed_levi", "fixed_contract")

BACKEND = ""


def available_backends():
    """Names of the importable backends."""
    return tuple(_BACKENDS)


def use_backend(name):
    """Route the module-level kernel functions to backend ``name``."""
    global BACKEND
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable backend {name!r}; have {available_backends()}"
        ) from None
    g = globals()
    for fn in _API:
        g[fn] = getattr(mod, fn)
    BACKEND = name


def get_backend(name):
    """Return the backend module ``name`` without switching."""
    return _BACKENDS[name]


cross_matrix = _pykernels.cross_matrix
use_backend("compiled" if _ckernels is not None else "python")
