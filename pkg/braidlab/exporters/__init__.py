from ._base import CircuitExporter
from ._registry import (
    resolve,
    import_all,
    register,
    available,
)
