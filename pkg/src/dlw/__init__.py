"""Default-logic workbench: operational semantics for default logics and
translations of regular semantics into normal default logic."""

__version__ = "0.1.0"
