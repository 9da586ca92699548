# app/commands/__init__.py

from app.commands import convert, dims, evaluate, export, relations, verify

__all__ = ["convert", "dims", "evaluate", "export", "relations", "verify"]
