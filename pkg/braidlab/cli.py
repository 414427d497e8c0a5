from ._cli_common import main
from . import _cli_verify
from . import _cli_effective
from . import _cli_holonomy
from . import _cli_braid
from . import _cli_tomography
from . import _cli_sweep
from . import _cli_export
