"""
Base exporter interface.

Exporters write run results to files with a frozen, documented layout.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any


class Exporter(ABC):
    """Abstract base class for exporters"""

    @abstractmethod
    def export(self, data: Any, path: Path) -> Path:
        """
        Write data to path.

        Args:
            data: Records or samples to export
            path: Output file

        Returns:
            The written path
        """
        pass
