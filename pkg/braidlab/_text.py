from pathlib import Path
from typing import Any, Dict, List, Optional, Union

PathLike = Union[str, Path]


def read_sysfs_int(path: PathLike) -> Optional[int]:
    """Integer content of a cgroup file, ``None`` when missing or set to ``max``."""
    try:
        return int(Path(path).read_text().strip())
    except (OSError, ValueError):
        return None


def parse_float_grid(s: str) -> List[float]:
    """
    Grid of exchange constants or angles.

    Accepts ``start:stop:step`` (stop included when it lands on the grid)
    or a comma separated list ``1,2.5,4``.
    """
    import numpy as np

    s = s.strip()
    if ":" in s:
        parts = s.split(":")
        try:
            if len(parts) != 3:
                raise ValueError
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f'Grid "{s}" is not <start>:<stop>:<step>') from None
        if step <= 0 or stop < start:
            raise ValueError(f'Grid "{s}" has no points')
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    try:
        out = [float(p) for p in s.split(",") if p.strip()]
    except ValueError:
        raise ValueError(f'Grid "{s}" is not a list of numbers') from None
    if not out:
        raise ValueError("Grid has no points")
    return out


def _is_url(s: str) -> bool:
    from urllib.parse import urlparse

    r = urlparse(s)
    return bool(r.scheme and r.netloc)


def load_config_document(s: str) -> Dict[str, Any]:
    """
    Experiment config from a URL, a YAML/JSON file or inline YAML text.
    """
    import fsspec
    import yaml

    if _is_url(s):
        with fsspec.open(s, mode="r") as f:
            doc = yaml.safe_load(f)
        source = s
    else:
        path = Path(s)
        try:
            txt = path.read_text()
            source = str(path)
        except (OSError, ValueError):
            txt, source = s, "inline config"
        doc = yaml.safe_load(txt)

    if not isinstance(doc, dict):
        raise ValueError(f"Experiment config must be a mapping of sections, {source} is not")
    return doc
