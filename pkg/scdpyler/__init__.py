# __init__.py - initialization of the scdpyler toolkit

# Core model
from .source_span import *
from .diagnostic import *
from .cardinality import *
from .derivation import *
from .coupling import *
from .properties import *
from .dimension import *
from .system import *
from .association import *
from .model_unit import *
# Front end
from .lexer import *
from .parser import *
from .formatter import *
# Levels
from .loader import *
from .resolver import *
# Checks and analysis
from .valuation import *
from .analysis import *
from .validator import *
# Exports
from .jsonutil import *
from .dotutil import *
from .corpus import *
from .utils import *

__version__ = "1.0.0"
