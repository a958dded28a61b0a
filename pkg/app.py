# app.py 负责命令行的构建和启动
import argparse
import functools
import logging
import sys
from typing import Callable, Dict, Optional, Sequence, Tuple

import config  # 必须首先导入，以加载 .env
import handlers
from ORDERS.errors import ConstructionError, NeedsMoreStages, OrderSpecError
from REVERSAL.report_utils import write_text
from REVERSAL.true_stages import Injection, load_injection
from REVERSAL.verification_orchestrator import ChainVerificationOrchestrator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """用法错误抛异常而不是直接退出，由 main 统一映射为退出码 2。"""

    def error(self, message):
        raise ValueError(message)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--injection", help="injection JSON file; identity when omitted")
    parser.add_argument("--stages", type=int, default=config.STAGES)
    parser.add_argument("--budget", type=int, default=config.SEARCH_BUDGET)
    parser.add_argument("--format", dest="fmt", choices=("json", "dot", "text"), default="json")
    parser.add_argument("--seed", type=int, default=config.SEED)
    parser.add_argument("--out", help="write output here instead of stdout")
    parser.add_argument("--workers", type=int, default=config.WORKERS)
    parser.add_argument("--lookahead", type=int, default=config.LOOKAHEAD)
    parser.add_argument("--power", choices=("flat", "sharp"))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noeth", description="Computable wqo and Noetherian-space constructions.")
    parser.add_argument("--log-level", default=None, help="overrides NOETH_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    verify = sub.add_parser("verify", help="run a construction and check it")
    verify.add_argument("target", choices=handlers.VERIFY_TARGETS + tuple(handlers.TARGET_ALIASES))
    verify.add_argument("--instances", type=int, default=50, help="random instances for verify translate")
    verify.add_argument("--len", dest="length", type=int, default=10, help="prefix length")
    _add_common(verify)

    export = sub.add_parser("export", help="emit a structure deterministically")
    export.add_argument("target", choices=handlers.EXPORT_TARGETS)
    _add_common(export)

    search = sub.add_parser("search", help="bounded bad-prefix search")
    search.add_argument("target", choices=handlers.SEARCH_TARGETS)
    search.add_argument("--order", dest="order_path", help="order spec JSON file")
    search.add_argument("--len", dest="length", type=int, default=10)
    _add_common(search)
    return parser


class App:

    def __init__(self, workers: int = config.WORKERS):
        """
        初始化函数：把依赖绑定到各命令的处理函数上。
        """
        self.workers = workers
        self.commands: Dict[str, Callable[[handlers.RunConfig], Tuple[int, str]]] = {
            "verify": functools.partial(handlers.cmd_verify,
                                        orchestrator_cls=ChainVerificationOrchestrator, workers=workers),
            "export": functools.partial(handlers.cmd_export, workers=workers),
            "search": handlers.cmd_search,
        }

    def run(self, run_config: handlers.RunConfig) -> Tuple[int, str]:
        return self.commands[run_config.command](run_config)


def _run_config(args: argparse.Namespace) -> handlers.RunConfig:
    injection = load_injection(args.injection) if args.injection else Injection.identity()
    return handlers.RunConfig(
        command=args.command,
        target=args.target,
        injection=injection,
        stages=args.stages,
        budget=args.budget,
        fmt=args.fmt,
        seed=args.seed,
        out=args.out,
        order_path=getattr(args, "order_path", None),
        length=getattr(args, "length", 10),
        power=args.power,
        lookahead=args.lookahead,
        instances=getattr(args, "instances", 50),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    命令行入口。

    返回:
    - 0：成功；1：某项检查失败或搜索没有结果；2：配置或用法错误，或规模超出资源限制。
    """
    try:
        args = build_parser().parse_args(argv)
        config.setup_logging(args.log_level)
        if args.workers < 1:
            raise ValueError(f"--workers must be positive, got {args.workers}")
        run_config = _run_config(args)
        code, text = App(workers=args.workers).run(run_config)
        printed = write_text(text, run_config.out)
    except (OrderSpecError, FileNotFoundError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, NeedsMoreStages) as e:
        logger.error("construction failed: %s", e)
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except (RecursionError, MemoryError) as e:
        logger.error("resource limit reached: %r", e)
        print(f"error: resource limit reached ({type(e).__name__}); lower --stages or --budget", file=sys.stderr)
        return EXIT_USAGE
    if printed is not None:
        sys.stdout.write(printed)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
