# config.py
import logging
import os
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# load_dotenv() 会自动查找同目录下的 .env 文件
load_dotenv()


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        logger.critical("CRITICAL ERROR: %s=%r is not a positive integer. Please check your .env file.", name, raw)
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


# --- 构造规模 ---
STAGES = _positive_int("NOETH_STAGES", 8)
SEARCH_BUDGET = _positive_int("NOETH_SEARCH_BUDGET", 1_000_000)
LOOKAHEAD = _positive_int("NOETH_LOOKAHEAD", 8)

# --- 随机语料 ---
# 0 也是合法的种子
_seed_raw = os.getenv("NOETH_SEED", "0")
try:
    SEED = int(_seed_raw)
except ValueError:
    logger.critical("CRITICAL ERROR: NOETH_SEED=%r is not an integer.", _seed_raw)
    raise ValueError(f"NOETH_SEED must be an integer, got {_seed_raw!r}")

# --- 并行与日志 ---
WORKERS = _positive_int("NOETH_WORKERS", 4)
LOG_LEVEL = os.getenv("NOETH_LOG_LEVEL", "WARNING").upper()

if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
    logger.warning("WARNING: unknown NOETH_LOG_LEVEL %r, falling back to WARNING.", LOG_LEVEL)
    LOG_LEVEL = "WARNING"

_configured = False


def setup_logging(level: str = None):
    """配置根 logger（只生效一次）；诊断信息写到 stderr。"""
    global _configured
    if _configured:
        return
    logging.basicConfig(
        level=getattr(logging, (level or LOG_LEVEL).upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    _configured = True
    logger.debug("Config: .env file loaded and all configs set.")
