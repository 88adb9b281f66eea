from . import core, families, analysis, mub, search

__all__ = ["core", "families", "analysis", "mub", "search"]
