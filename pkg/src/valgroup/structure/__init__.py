"""Conjugacy, centralizers, Nielsen reduction and CSA checks, all with
bounded (ball-restricted) semantics."""

from .centralizers import *  # noqa: F401,F403
from .conjugacy import *  # noqa: F401,F403
from .csa import *  # noqa: F401,F403
from .nielsen import *  # noqa: F401,F403
