"""Explicit-state reachability for labeled Petri nets with hash-set,
decision-tree, decision-diagram and hybrid state stores."""

from .expr import parse_boolean, parse_numeric, eval_bool, eval_num
from .generators import generate_model
from .mdd import Mdd, MddManager
from .mdt import Mdt
from .model import LpnModule, LpnSystem, ModelError, Transition, compose
from .modelfile import load_model, parse_model
from .reach import Limits, ReachReport, dfs_reach, reach
from .statespace import StateSpace
from .stores import make_store

__version__ = "0.1.0"
