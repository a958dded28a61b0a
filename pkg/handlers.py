# handlers.py
import itertools
import json
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Type

from ORDERS.base_order import BadPrefix, FinSubset
from ORDERS.builtin_orders import OmegaStarOrder, RadoOrder
from ORDERS.order_spec import load_order
from ORDERS.order_tools import find_bad_prefix, is_bad_prefix, random_finite_order
from ORDERS.powerset import PowerMode, all_subsets, flat_leq, power_order, sharp_leq
from ORDERS.symbolic import SymbolicSubset
from REVERSAL.flat_chain import FlatChain
from REVERSAL.report_utils import Report, render_report, report_schema
from REVERSAL.sharp_chain import SharpChain
from REVERSAL.true_stages import Injection, is_true, true_set_at
from REVERSAL.verification_orchestrator import ChainVerificationOrchestrator, chain_report
from REVERSAL.xi_order import (FLAT_POSET, SHARP_POSET, SINGLETON, FalseVerdict, TrueVerdict,
                               XiOrder, anchor_log_json, decode_from_bad, placement_check, xi_to_dot)
from SPACES.alex_upper import AlexandroffSpace
from SPACES.chain_extraction import LookaheadInconclusive, bad_from_chain
from SPACES.noetherian import Grew, ascending_from_bad, bad_from_ascending, closed_complement_scan, stabilization_scan
from SPACES.power_space import In, PowerSpace, closed_member
from SPACES.translate import translate_flat, translate_sharp

logger = logging.getLogger(__name__)

VERIFY_TARGETS = ("flat-chain", "sharp-chain", "round-trip", "translate", "placement", "decode", "extract")
# 旧的目标名
TARGET_ALIASES = {"prop38": "round-trip", "lemma43": "placement"}
EXPORT_TARGETS = ("xi", "truestages", "chain", "schema")
SEARCH_TARGETS = ("bad",)


@dataclass
class RunConfig:
    """一次 CLI 调用的全部参数；构造时校验。"""
    command: str
    target: str
    injection: Injection = field(default_factory=Injection.identity)
    stages: int = 8
    budget: int = 1_000_000
    fmt: str = "json"
    seed: int = 0
    out: Optional[str] = None
    order_path: Optional[str] = None
    length: int = 10
    power: Optional[str] = None
    lookahead: int = 8
    instances: int = 50

    def __post_init__(self):
        targets = {"verify": VERIFY_TARGETS, "export": EXPORT_TARGETS, "search": SEARCH_TARGETS}
        if self.command == "verify":
            self.target = TARGET_ALIASES.get(self.target, self.target)
        if self.command not in targets:
            raise ValueError(f"unknown command {self.command!r}")
        if self.target not in targets[self.command]:
            raise ValueError(f"unknown {self.command} target {self.target!r}")
        for name in ("stages", "budget", "length", "lookahead", "instances"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name} must be positive, got {getattr(self, name)}")
        if self.fmt not in ("json", "dot", "text"):
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.power is not None and self.power not in ("flat", "sharp"):
            raise ValueError(f"--power must be flat or sharp, got {self.power!r}")


def _verify_chain(config: RunConfig, orchestrator_cls, workers: int) -> Report:
    if config.target == "flat-chain":
        chain = FlatChain(config.injection, config.stages)
    else:
        chain = SharpChain(config.injection, config.stages)
    orchestrator = orchestrator_cls(chain, num_threads=workers)
    return orchestrator.verify(config.stages)


def _round_trip(order, length: int, budget: int) -> Dict[str, Any]:
    bad = find_bad_prefix(order, length, budget)
    if not isinstance(bad, BadPrefix):
        return {"ok": False, "reason": f"no bad prefix of length {length} within budget {budget}"}
    chain = ascending_from_bad(order, bad)
    space = AlexandroffSpace(order)
    ascending = stabilization_scan(space, chain, length, bad.seq, length + 1)
    descending = closed_complement_scan(space, chain, length, bad.seq, length + 1)
    recovered = bad_from_ascending(order, chain, length, budget)
    strict = sum(isinstance(r, Grew) for r in ascending)
    ok = (strict == length and all(isinstance(r, Grew) for r in descending)
          and isinstance(recovered, BadPrefix) and len(recovered) == length)
    return {
        "ok": ok,
        "bad": list(bad.seq),
        "strict_steps": strict,
        "recovered": list(recovered.seq) if isinstance(recovered, BadPrefix) else None,
    }


def _verify_round_trips(config: RunConfig) -> Report:
    orders = [OmegaStarOrder(), power_order(RadoOrder(), PowerMode.SHARP)]
    details = {order.name: _round_trip(order, config.length, config.budget) for order in orders}
    failed = next((name for name, d in details.items() if not d["ok"]), None)
    return Report(command="round-trip", ok=failed is None, details=details, counterexample=failed)


def translation_counterexample(order, generators: List[FinSubset], points) -> Optional[Dict[str, Any]]:
    """对每个有限 x 比较翻译出的闭集与生成元控制关系；返回第一个不一致之处。"""
    flat = translate_flat(order, generators)
    sharp = translate_sharp(order, generators) if all(len(e) for e in generators) else None
    for x in points:
        expected_flat = any(flat_leq(order, x, e) for e in generators)
        if flat(x).member != expected_flat:
            return {"mode": "flat", "x": list(x.elems), "generators": [list(e.elems) for e in generators]}
        if sharp is not None:
            expected_sharp = any(sharp_leq(order, x, e) for e in generators)
            got = isinstance(closed_member(sharp, SymbolicSubset.fin(order, x.elems), 0), In)
            if got != expected_sharp:
                return {"mode": "sharp", "x": list(x.elems), "generators": [list(e.elems) for e in generators]}
    return None


def _verify_translate(config: RunConfig) -> Report:
    rng = random.Random(config.seed)
    checked = 0
    for _ in range(config.instances):
        order = random_finite_order(rng, rng.randint(1, 6))
        codes = list(range(order.size))
        subsets = [s for s in all_subsets(codes, 3)]
        generators = [rng.choice(subsets) for _ in range(rng.randint(0, 3))]
        bad = translation_counterexample(order, generators, subsets)
        checked += 1
        if bad is not None:
            logger.error("translation disagreement: %s", bad)
            return Report(command="translate", ok=False, details={"instances": checked}, counterexample=bad)
    return Report(command="translate", ok=True, details={"instances": checked, "seed": config.seed})


def _verify_placement(config: RunConfig) -> Report:
    failures = []
    for pointed in (SINGLETON, FLAT_POSET, SHARP_POSET):
        order = XiOrder(config.injection, pointed, config.stages + 1)
        for m in range(1, config.stages + 1):
            for n in range(m):
                if not placement_check(config.injection, pointed, m, n, order=order):
                    failures.append({"poset": pointed.poset.name, "m": m, "n": n})
    return Report(command="placement", ok=not failures, stages=config.stages,
                  injection=config.injection.to_json(), details={"failures": len(failures)},
                  counterexample=failures[0] if failures else None)


def _extraction_details(result, check) -> Dict[str, Any]:
    if isinstance(result, BadPrefix):
        return {"outcome": "BadPrefix", "prefix": list(result.seq), "ok": check(result.seq)}
    if isinstance(result, LookaheadInconclusive):
        return {"outcome": "LookaheadInconclusive", "candidates": list(result.candidates),
                "window": result.window, "found": list(result.found), "ok": False}
    return {"outcome": "NotFoundWithinBudget", "budget": result.budget, "spent": result.spent,
            "exhaustive": result.exhaustive, "ok": False}


def _verify_extract(config: RunConfig) -> Report:
    """在两条反转链上运行 bad_from_chain，结果用 is_bad_prefix 复核；Sharp 模式使用 --lookahead。"""
    f, stages = config.injection, config.stages
    length = max(1, min(config.length, stages - 2))
    flat = FlatChain(f, stages)
    flat_result = bad_from_chain(PowerSpace(flat.order, PowerMode.FLAT), [flat.code(s) for s in range(stages)],
                                 length, config.budget, pool=flat.candidates(), lookahead=config.lookahead)
    flat_order = power_order(flat.order, PowerMode.FLAT)
    sharp = SharpChain(f, stages)
    sharp_result = bad_from_chain(PowerSpace(sharp.order, PowerMode.SHARP), [sharp.code(s) for s in range(stages)],
                                  length, config.budget, pool=sharp.candidates(), lookahead=config.lookahead)
    details = {
        "length": length,
        "lookahead": config.lookahead,
        "flat": _extraction_details(flat_result, lambda seq: is_bad_prefix(flat_order, seq)),
        "sharp": _extraction_details(sharp_result, lambda seq: is_bad_prefix(sharp.order, seq)),
    }
    failed = next((mode for mode in ("flat", "sharp") if not details[mode]["ok"]), None)
    return Report(command="extract", ok=failed is None, stages=stages, injection=f.to_json(),
                  details=details, counterexample=failed)


def _verify_decode(config: RunConfig) -> Report:
    f = config.injection
    order = XiOrder(f, SINGLETON, config.stages)
    bad = find_bad_prefix(order, config.stages, config.budget)
    if not isinstance(bad, BadPrefix):
        logger.warning("decode: no bad prefix of length %d within budget %d", config.stages, config.budget)
        return Report(command="decode", ok=False, stages=config.stages, injection=f.to_json(),
                      details={"bad_prefix": None, "outcome": "NotFoundWithinBudget", "budget": bad.budget,
                               "spent": bad.spent})
    verdicts = {}
    contradiction = None
    for n in range(config.stages):
        verdict = decode_from_bad(order, bad, n)
        verdicts[str(n)] = type(verdict).__name__
        truth = is_true(f, n)
        if (isinstance(verdict, TrueVerdict) and not truth) or (isinstance(verdict, FalseVerdict) and truth):
            contradiction = {"n": n, "verdict": verdicts[str(n)]}
            break
    return Report(command="decode", ok=contradiction is None, stages=config.stages, injection=f.to_json(),
                  details={"bad_prefix": [order.label(q) for q in bad.seq], "verdicts": verdicts},
                  counterexample=contradiction)


def cmd_verify(config: RunConfig, *,
               orchestrator_cls: Type[ChainVerificationOrchestrator] = ChainVerificationOrchestrator,
               workers: int = 4) -> Tuple[int, str]:
    """
    运行选定的验证。
    'orchestrator_cls' 与 'workers' 由 functools.partial 传入。

    返回:
    - (退出码, 报告文本)：全部检查通过为 0，否则为 1。
    """
    logger.info("verify %s: stages=%d budget=%d seed=%d", config.target, config.stages, config.budget, config.seed)
    if config.target in ("flat-chain", "sharp-chain"):
        report = _verify_chain(config, orchestrator_cls, workers)
    elif config.target == "round-trip":
        report = _verify_round_trips(config)
    elif config.target == "translate":
        report = _verify_translate(config)
    elif config.target == "placement":
        report = _verify_placement(config)
    elif config.target == "extract":
        report = _verify_extract(config)
    else:
        report = _verify_decode(config)
    fmt = "text" if config.fmt == "text" else "json"
    return (0 if report.ok else 1), render_report(report, fmt)


def _xi_json(order: XiOrder) -> Dict[str, Any]:
    codes = list(order.enumerate())
    return {
        "stages": order.stages,
        "elements": [order.label(c) for c in codes],
        "anchors": anchor_log_json(order.log),
        "leq": [[a, b] for a, b in itertools.product(codes, repeat=2) if a != b and order.leq(a, b)],
    }


def cmd_export(config: RunConfig, *, workers: int = 4) -> Tuple[int, str]:
    """导出 Ξ 结构、T_s 表、链报告或报告的 JSON schema；相同参数输出逐字节相同。"""
    f = config.injection
    if config.target == "xi":
        order = XiOrder(f, SINGLETON, config.stages)
        if config.fmt == "dot":
            return 0, xi_to_dot(order)
        return 0, json.dumps(_xi_json(order), indent=2) + "\n"
    if config.target == "truestages":
        table = [list(true_set_at(f, s).members) for s in range(config.stages)]
        return 0, json.dumps(table, separators=(",", ":")) + "\n"
    if config.target == "chain":
        mode = PowerMode(config.power or "flat")
        steps = chain_report(f, config.stages, mode, workers=workers)
        report = Report(command=f"{mode.value}-chain", ok=all(s.strict for s in steps), stages=config.stages,
                        injection=f.to_json(), steps=steps)
        return (0 if report.ok else 1), render_report(report, "text" if config.fmt == "text" else "json")
    return 0, json.dumps(report_schema(), indent=2) + "\n"


def cmd_search(config: RunConfig) -> Tuple[int, str]:
    """在 --order 给出的序（可选取幂序）上搜索坏前缀；找到为 0，否则为 1。"""
    if config.order_path is None:
        raise ValueError("search bad needs --order FILE")
    order = load_order(config.order_path)
    if config.power is not None:
        order = power_order(order, PowerMode(config.power))
    result = find_bad_prefix(order, config.length, config.budget)
    if isinstance(result, BadPrefix):
        report = Report(command="search-bad", ok=True, details={"order": order.name, "prefix": list(result.seq)})
    else:
        report = Report(command="search-bad", ok=False,
                        details={"order": order.name, "budget": result.budget, "spent": result.spent,
                                 "exhaustive": result.exhaustive})
    return (0 if report.ok else 1), render_report(report, "text" if config.fmt == "text" else "json")
