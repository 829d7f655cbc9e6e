from . import averages
from . import conf
from . import curves
from . import diagnostics
from . import errors
from . import fileio
from . import frequency
from . import grid
from . import partition
from . import search
from . import sets
from . import sweep
from . import util

__version__ = "0.1.0"
