from .problem import *
from .simplex import *
