from .models import *
from .classify import *
from .report import *
