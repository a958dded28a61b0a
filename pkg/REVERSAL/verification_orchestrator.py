import concurrent.futures
import logging
from typing import Callable, List, Optional, Tuple, Union

from tqdm import tqdm

from ORDERS.powerset import PowerMode
from REVERSAL.flat_chain import FlatChain
from REVERSAL.report_utils import Report, StepEntry, build_step_entries
from REVERSAL.sharp_chain import SharpChain
from REVERSAL.true_stages import Injection

logger = logging.getLogger(__name__)


class ChainVerificationOrchestrator:
    """
    反推链的逐阶段验证编排器。
    仅负责：把每个阶段的分隔集 / Claim 检查分发到线程池，收集结果并按阶段排序合成报告。
    """

    def __init__(self,
                 chain: Union[FlatChain, SharpChain],
                 num_threads: int = 4,
                 show_progress: bool = True):
        """
        初始化验证编排器。

        :param chain: 一个 *已经构造好* 的 FlatChain 或 SharpChain。
        :param num_threads: 并行验证的线程数。
        :param show_progress: 是否显示 tqdm 进度条。
        """
        if not isinstance(chain, (FlatChain, SharpChain)):
            raise TypeError(f"chain must be a FlatChain or SharpChain, but got {type(chain)}")
        if num_threads < 1:
            raise ValueError(f"num_threads must be >= 1, got {num_threads}")

        self.chain = chain  # 依赖注入
        self.num_threads = num_threads
        self.show_progress = show_progress

    @property
    def mode(self) -> PowerMode:
        return PowerMode.FLAT if isinstance(self.chain, FlatChain) else PowerMode.SHARP

    def _prepare(self, stages: int):
        """先顺序构造生成元：阶段之间有递归依赖，缓存填好后各阶段的检查互不依赖。"""
        for s in range(stages + 1):
            self.chain.stage(s)

    def _verify_stage(self, s: int) -> StepEntry:
        report = self.chain.separator(s)
        claims = None
        if isinstance(self.chain, SharpChain):
            c = self.chain.claims(s)
            claims = {"antichain": c.antichain, "avoidance": c.avoidance, "persistence": c.persistence}
        strict = report.strict and (claims is None or all(claims.values()))
        return StepEntry(
            stage=s, case=report.case, n0=report.n0,
            separator=list(report.witness.elems),
            separator_labels=[self.chain.order.label(c) for c in report.witness],
            strict=strict, claims=claims,
        )

    def _run_parallel_verification(self, stages: int) -> List[Tuple[int, StepEntry]]:
        """使用线程池并行执行各阶段的验证。"""
        results = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.num_threads) as executor:
            future_dict = {executor.submit(self._verify_stage, s): s for s in range(stages)}
            with tqdm(total=len(future_dict), desc=f"Verifying {self.mode.value} chain",
                      disable=not self.show_progress) as pbar:
                for future in concurrent.futures.as_completed(future_dict):
                    s = future_dict[future]
                    try:
                        results.append((s, future.result()))
                    except Exception as e:
                        logger.error("stage %d failed: %s", s, e)
                        results.append((s, StepEntry(stage=s, strict=False, error=str(e))))
                    pbar.update(1)
        return results

    def _compose_report(self, results: List[Tuple[int, StepEntry]], stages: int) -> Report:
        steps = build_step_entries(results)
        failed = next((step for step in steps if not step.strict), None)
        return Report(
            command=f"{self.mode.value}-chain",
            ok=failed is None,
            stages=stages,
            injection=self.chain.f.to_json(),
            steps=steps,
            counterexample=failed.model_dump() if failed is not None else None,
        )

    def verify(self, stages: Optional[int] = None,
               progress: Optional[Callable[[float, str], None]] = None) -> Report:
        """
        执行完整的链验证流程：s < stages 的每一步都检查严格下降与指定的分隔集。
        """
        stages = self.chain.stages if stages is None else stages
        if stages > self.chain.stages:
            raise ValueError(f"chain was built for {self.chain.stages} stages, asked for {stages}")
        if progress:
            progress(0.1, "building generators")
        self._prepare(stages)
        if progress:
            progress(0.3, "verifying stages")
        results = self._run_parallel_verification(stages)
        if progress:
            progress(0.99, "composing report")
        return self._compose_report(results, stages)


def chain_report(f: Injection, stages: int, mode: PowerMode, workers: int = 4,
                 show_progress: bool = False) -> List[StepEntry]:
    """s < stages 的逐阶段报告，按阶段排序。"""
    chain = FlatChain(f, stages) if mode is PowerMode.FLAT else SharpChain(f, stages)
    orchestrator = ChainVerificationOrchestrator(chain, num_threads=workers, show_progress=show_progress)
    return orchestrator.verify(stages).steps
