"""``python -m cowordmap`` runs the command-line interface."""

from .cli import entrypoint

entrypoint()
