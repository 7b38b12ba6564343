"""
Configuration management for ctxlab
Settings come from the environment (or a .env file); CLI flags override them
"""

import os
from typing import Dict, Optional

from dotenv import load_dotenv

# Load environment variables from .env file if it exists
load_dotenv()


def _flag(value: Optional[str], default: bool) -> bool:
    if value is None or value == "":
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Configuration class for ctxlab analyses"""

    # Decider limits
    LABELING_CAP: int = int(os.getenv('CTXLAB_LABELING_CAP') or 4096)
    MAX_CIRCLE_LEN: int = int(os.getenv('CTXLAB_MAX_CIRCLE_LEN') or 12)

    # Outcome group ℤ_d used when an input file does not say
    DEFAULT_D: int = int(os.getenv('CTXLAB_DEFAULT_D') or 2)

    # Batch mode
    WORKERS: int = int(os.getenv('CTXLAB_WORKERS') or 0)  # 0 = os.cpu_count()

    # Run the secondary deciders and fail loudly on disagreement
    CROSS_CHECK: bool = _flag(os.getenv('CTXLAB_CROSS_CHECK'), True)

    LOG_LEVEL: str = (os.getenv('CTXLAB_LOG_LEVEL') or 'INFO').upper()

    @classmethod
    def validate_settings(cls) -> Dict[str, bool]:
        """Check that every setting is usable"""
        return {
            'labeling_cap': cls.LABELING_CAP > 0,
            'max_circle_len': cls.MAX_CIRCLE_LEN >= 1,
            'default_d': cls.DEFAULT_D >= 2,
            'workers': cls.WORKERS >= 0,
            'log_level': cls.LOG_LEVEL in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'),
        }

    @classmethod
    def get_missing_config(cls) -> list:
        """Names of settings holding unusable values"""
        names = {
            'labeling_cap': 'CTXLAB_LABELING_CAP',
            'max_circle_len': 'CTXLAB_MAX_CIRCLE_LEN',
            'default_d': 'CTXLAB_DEFAULT_D',
            'workers': 'CTXLAB_WORKERS',
            'log_level': 'CTXLAB_LOG_LEVEL',
        }
        return [names[key] for key, ok in cls.validate_settings().items() if not ok]

    @classmethod
    def get_settings_status(cls) -> str:
        """Get a human-readable status of the configuration"""
        validation = cls.validate_settings()
        status_lines = ["⚙️ CTXLAB SETTINGS", ""]
        status_lines.append(f"{'✅' if validation['labeling_cap'] else '❌'} Labeling cap: {cls.LABELING_CAP}")
        status_lines.append(f"{'✅' if validation['max_circle_len'] else '❌'} Max circle length: {cls.MAX_CIRCLE_LEN}")
        status_lines.append(f"{'✅' if validation['default_d'] else '❌'} Default d: {cls.DEFAULT_D}")
        workers = cls.WORKERS or os.cpu_count()
        status_lines.append(f"{'✅' if validation['workers'] else '❌'} Batch workers: {workers}")
        cross = "on" if cls.CROSS_CHECK else "off"
        status_lines.append(f"{'✅' if cls.CROSS_CHECK else '⚠️'} Decider cross-check: {cross}")
        status_lines.append(f"{'✅' if validation['log_level'] else '❌'} Log level: {cls.LOG_LEVEL}")
        return "\n".join(status_lines)


# Global config instance
config = Config()
