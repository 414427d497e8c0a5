import pydoc
from functools import partial
from typing import Callable, Dict, List, Type

from ._base import CircuitExporter

ExporterFactory = Callable[..., CircuitExporter]

_exporters: Dict[str, ExporterFactory] = {}


def _new(exporter_class, *args, **kwargs) -> CircuitExporter:
    return exporter_class(*args, **kwargs)


def resolve(name: str) -> ExporterFactory:
    import_all()
    maker = _exporters.get(name)
    if maker is None:
        maker = pydoc.locate(name)
        if maker is not None:
            if not (isinstance(maker, type) and issubclass(maker, CircuitExporter)):
                raise ValueError(f"Custom exporter '{name}' is not derived from CircuitExporter")
            return partial(_new, maker)

    if maker is None:
        raise ValueError(f"Unknown circuit format: '{name}'")
    return maker


def register(name: str, exporter_class: Type[CircuitExporter]):
    _exporters[name] = partial(_new, exporter_class)


def available() -> List[str]:
    import_all()
    return sorted(_exporters)


def import_all():
    import importlib

    for mod in ("braidlab.exporters.native", "braidlab.exporters.qasm"):
        importlib.import_module(mod)
