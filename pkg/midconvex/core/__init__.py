from .base import BaseEngine
from .bounds import BoundEngine
from .checker import Checker

__all__ = ["BaseEngine", "BoundEngine", "Checker"]
