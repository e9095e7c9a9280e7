from .constants import *
from .errors import *
from .core import *
from .data_loader import *
from .sampling import *
