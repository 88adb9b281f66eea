from . import gen, census, exclude, dephase, verify, search, scan

__all__ = ["gen", "census", "exclude", "dephase", "verify", "search", "scan"]
