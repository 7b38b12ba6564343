"""
Labeling budget guard
Bounds the number of outcome labelings the exact deciders may enumerate
"""
import logging
from typing import Any, Dict, Optional, Tuple

from .config import config
from .errors import TooLarge

logger = logging.getLogger(__name__)


class LabelingBudget:
    """Tracks labeling-space sizes and enforces the cap"""

    def __init__(self, cap: Optional[int] = None):
        self.cap = cap if cap is not None else config.LABELING_CAP
        self.checks = 0
        self.largest = 0
        self.refused = 0

    def is_budget_exceeded(self, n_vertices: int, d: int) -> Tuple[bool, str]:
        """
        Check whether d^n labelings fit under the cap

        Returns:
            Tuple of (is_exceeded, reason)
        """
        size = d ** n_vertices
        self.checks += 1
        self.largest = max(self.largest, size)
        if size > self.cap:
            return True, f"{d}^{n_vertices} = {size} labelings exceeds cap {self.cap}"
        return False, ""

    def check(self, n_vertices: int, d: int) -> None:
        exceeded, reason = self.is_budget_exceeded(n_vertices, d)
        if exceeded:
            self.refused += 1
            logger.warning(f"⚠️ {reason}")
            raise TooLarge(reason)

    def get_usage_summary(self) -> Dict[str, Any]:
        return {
            "cap": self.cap,
            "checks": self.checks,
            "largest": self.largest,
            "refused": self.refused,
            "budget_exceeded": self.refused > 0,
        }
