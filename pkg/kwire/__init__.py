"""Nonequilibrium correlations and current in a biased quantum wire."""

from .model import ModelParams, Side, SiteIndexError
from .observables import correlation, current

__all__ = ["ModelParams", "Side", "SiteIndexError", "correlation", "current"]
