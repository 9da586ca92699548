# scripts/build_relation_tables.py

import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.append(str(Path(__file__).parent.parent))

from app.config import get_settings
from app.core.relations import DEFAULT_GENERATORS, build_system, deligne_bound

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


# (level, top weight) pairs precomputed into the cache
TABLES = [
    # ========== MULTIPLE ZETA VALUES ==========
    (1, 6),
    # ========== ALTERNATING SUMS ==========
    (2, 4),
    # ========== LEVELS 3 AND 4 ==========
    (3, 3),
    (4, 3),
    # ========== NONSTANDARD CHAINS ==========
    (6, 3),
    (8, 2),
]

GENERATOR_SETS = [
    DEFAULT_GENERATORS,
    DEFAULT_GENERATORS + ("nonstandard",),
]


def build_tables():
    cache_dir = get_settings().cache_dir
    for names in GENERATOR_SETS:
        for level, top in TABLES:
            if "nonstandard" in names and level not in (6, 8):
                continue
            for weight in range(1, top + 1):
                system = build_system(level, weight, names, cache_dir=cache_dir)
                bound = deligne_bound(weight, level)
                marker = "✓" if system.dimension == bound else "•"
                logger.info(f"{marker} N={level} w={weight} [{','.join(names)}]: dimension {system.dimension}, bound {bound}")


if __name__ == "__main__":
    logger.info(f"🚀 building relation tables into {get_settings().cache_dir}")
    build_tables()
    logger.info("✅ relation tables ready")
