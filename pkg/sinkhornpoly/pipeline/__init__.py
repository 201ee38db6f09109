# __init__.py

from sinkhornpoly.pipeline.data import *
from sinkhornpoly.pipeline.store import *
from sinkhornpoly.pipeline.writer import *
from sinkhornpoly.pipeline.campaign import *
