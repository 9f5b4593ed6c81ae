"""Exact resource theory of common-cause boxes in Bell scenarios.

Boxes, local deterministic operations, exact LOSR convertibility, the M_CHSH
and M_NPR monotones, and experiments on the resulting preorder.
"""

from .box import T2222, Box, BoxType, CorrelatorForm, chsh, is_free, make_box, mix
from .catalog import l_empty, l_npr_b, noisy_pr, pr_box
from .errors import ApproxUnsound, CCBoxError
from .monotones import m_chsh_closed, m_npr_closed
from .ordering import Relation, classify, convertible
from .scalar import Approx

__version__ = "0.1.0"
