"""Benchmark harness: lambda sweeps with competing methods, the speed/quality
comparison, clump-ring parity, and stability checks.

Every replicate derives its RNG streams from (base seed, lambda index,
replicate index, method index), so results are independent of worker
scheduling and any record can be replayed bit-for-bit from its stored seed.
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BisbmError
from .generate import PlantedInstance, interpolate_noise, make_clump_ring, sample_network
from .metrics import nmi
from .modularity import greedy_modularity
from .objective import ModelSpec, adjusted_score
from .search import is_local_optimum, kl_fit, search_from_partition

RAW_HEADER = ["method", "lambda", "replicate", "seed", "nmi", "score", "seconds", "pure_type"]
AGG_HEADER = ["method", "lambda", "nmi_q10", "nmi_median", "nmi_q90"]

REPRESENTATIONS = ("bipartite", "weighted-projection", "unweighted-projection")


@dataclass(frozen=True)
class SweepMethod:
    """One competitor: fitting method x model x input representation."""

    method: str  # "kl" or "modularity"
    representation: str
    model: ModelSpec | None = None
    label: str = ""

    def __post_init__(self):
        if self.method not in ("kl", "modularity"):
            raise BisbmError(f"unknown method {self.method!r}")
        if self.representation not in REPRESENTATIONS:
            raise BisbmError(f"unknown representation {self.representation!r}")
        if self.method == "kl":
            if self.model is None:
                raise BisbmError("kl method needs a model")
            if self.model.bipartite and self.representation != "bipartite":
                raise BisbmError("bipartite model cannot run on a projection")
            if not self.model.bipartite and self.representation == "bipartite":
                raise BisbmError(
                    "unipartite model in a sweep runs on a projection; use "
                    "run_perf_comparison for SBM fits on the bipartite graph"
                )
        if self.method == "modularity" and self.representation == "bipartite":
            raise BisbmError("modularity runs on a projection")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self):
        if self.method == "modularity":
            rep = "wproj" if self.representation == "weighted-projection" else "uproj"
            return f"modularity_{rep}"
        base = self.model.label()
        if self.representation == "bipartite":
            return base
        rep = "wproj" if self.representation == "weighted-projection" else "uproj"
        return f"{base}_{rep}"

    def to_dict(self):
        doc = {"method": self.method, "representation": self.representation,
               "label": self.label}
        if self.model is not None:
            doc["model"] = {
                "structure": self.model.structure,
                "corrected": self.model.corrected,
            }
        return doc

    @classmethod
    def from_dict(cls, doc):
        model = None
        if "model" in doc and doc["model"] is not None:
            model = ModelSpec(doc["model"]["structure"], bool(doc["model"]["corrected"]))
        return cls(
            method=doc["method"],
            representation=doc["representation"],
            model=model,
            label=doc.get("label", ""),
        )


@dataclass
class SweepConfig:
    """Full description of a lambda-sweep experiment."""

    instance: PlantedInstance
    lambdas: list
    methods: list
    replicates: int = 100
    restarts: int = 10
    side: str = "b"
    base_seed: int = 0

    def __post_init__(self):
        lams = [float(x) for x in self.lambdas]
        if not lams or any(not 0.0 <= x <= 1.0 for x in lams):
            raise BisbmError("lambda grid must be non-empty and inside [0, 1]")
        if self.replicates < 1:
            raise BisbmError("need at least one replicate")
        if self.side not in ("a", "b"):
            raise BisbmError("comparison side must be 'a' or 'b'")
        self.lambdas = lams

    def to_dict(self):
        return {
            "instance": self.instance.to_dict(),
            "lambdas": self.lambdas,
            "methods": [m.to_dict() for m in self.methods],
            "replicates": self.replicates,
            "restarts": self.restarts,
            "side": self.side,
            "base_seed": self.base_seed,
        }

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls(
                instance=PlantedInstance.from_dict(doc["instance"]),
                lambdas=doc["lambdas"],
                methods=[SweepMethod.from_dict(m) for m in doc["methods"]],
                replicates=int(doc.get("replicates", 100)),
                restarts=int(doc.get("restarts", 10)),
                side=doc.get("side", "b"),
                base_seed=int(doc.get("base_seed", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BisbmError(f"bad sweep config: {exc}") from None

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class SweepResult:
    config: SweepConfig
    records: list = field(default_factory=list)  # raw record dicts

    def aggregates(self):
        """Per (method, lambda): 10%, 50%, 90% NMI quantiles, quantile-ordered."""
        rows = []
        for m in self.config.methods:
            for lam in self.config.lambdas:
                vals = [
                    r["nmi"] for r in self.records
                    if r["method"] == m.label and r["lambda"] == lam
                ]
                q10, q50, q90 = np.quantile(vals, [0.1, 0.5, 0.9])
                rows.append({
                    "method": m.label, "lambda": lam,
                    "nmi_q10": float(q10), "nmi_median": float(q50),
                    "nmi_q90": float(q90),
                })
        return rows

    def median(self, label, lam):
        for row in self.aggregates():
            if row["method"] == label and row["lambda"] == lam:
                return row["nmi_median"]
        raise KeyError((label, lam))

    def raw_csv(self):
        return _csv_text(RAW_HEADER, (
            [r["method"], r["lambda"], r["replicate"], r["seed"], r["nmi"],
             r["score"], r["seconds"], int(r["pure_type"])]
            for r in self.records
        ))

    def aggregate_csv(self):
        return _csv_text(AGG_HEADER, (
            [row["method"], row["lambda"], row["nmi_q10"], row["nmi_median"],
             row["nmi_q90"]]
            for row in self.aggregates()
        ))


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return x


def _sample_seed(base_seed, lam_idx, rep):
    return int(np.random.SeedSequence(
        [int(base_seed), int(lam_idx), int(rep), 0xA11CE]
    ).generate_state(1)[0])


def _fit_seed(base_seed, lam_idx, rep, method_idx):
    return int(np.random.SeedSequence(
        [int(base_seed), int(lam_idx), int(rep), int(method_idx)]
    ).generate_state(1)[0])


def run_replicate(config, lam_idx, rep):
    """All methods on one sampled network; returns raw record dicts.

    The network is shared across methods (sampled from a seed derived from
    (base_seed, lambda index, replicate)); each method's fit draws its own
    stream keyed additionally by the method index.
    """
    inst = config.instance
    lam = config.lambdas[lam_idx]
    omega = interpolate_noise(inst, lam)
    net = sample_network(inst, _sample_seed(config.base_seed, lam_idx, rep), omega=omega)
    planted_side = inst.partition.restrict(inst.vertex_type, config.side)

    projections = {}

    def projection(weighted):
        key = bool(weighted)
        if key not in projections:
            projections[key] = net.projection(config.side, weighted=weighted)
        return projections[key]

    records = []
    for m_idx, m in enumerate(config.methods):
        seed = _fit_seed(config.base_seed, lam_idx, rep, m_idx)
        t0 = time.perf_counter()
        if m.method == "modularity":
            graph = projection(m.representation == "weighted-projection")
            part = greedy_modularity(graph)
            score = float("nan")
            pure = True
            inferred_side = part
        elif m.representation == "bipartite":
            k_a, k_b = inst.partition.k_a, inst.partition.k_b
            fit = kl_fit(net, m.model, k_a, k_b, restarts=config.restarts, seed=seed)
            score = fit.best_score
            pure = True
            inferred_side = fit.best_partition.restrict(net.vertex_type, config.side)
        else:
            graph = projection(m.representation == "weighted-projection")
            k_side = planted_side.num_groups
            fit = kl_fit(graph, m.model, k_side, 0, restarts=config.restarts,
                         seed=seed)
            score = fit.best_score
            pure = True
            inferred_side = fit.best_partition
        seconds = time.perf_counter() - t0
        records.append({
            "method": m.label, "lambda": lam, "replicate": rep, "seed": seed,
            "nmi": float(nmi(inferred_side, planted_side)), "score": float(score),
            "seconds": seconds, "pure_type": bool(pure),
        })
    return records


def _replicate_task(args):
    config_doc, lam_idx, rep = args
    config = SweepConfig.from_dict(config_doc)
    return run_replicate(config, lam_idx, rep)


def run_sweep(config, workers=1, progress=None):
    """Run the full sweep; reproducible from config.base_seed regardless of
    worker count."""
    tasks = [
        (lam_idx, rep)
        for lam_idx in range(len(config.lambdas))
        for rep in range(config.replicates)
    ]
    result = SweepResult(config=config)
    if workers and workers > 1:
        doc = config.to_dict()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for recs in pool.map(
                _replicate_task, [(doc, li, r) for li, r in tasks], chunksize=4
            ):
                result.records.extend(recs)
                if progress:
                    progress(len(result.records))
    else:
        for lam_idx, rep in tasks:
            result.records.extend(run_replicate(config, lam_idx, rep))
            if progress:
                progress(len(result.records))
    result.records.sort(key=lambda r: (r["method"], r["lambda"], r["replicate"]))
    return result


# ---------------------------------------------------------------------------
# speed/quality comparison
# ---------------------------------------------------------------------------

@dataclass
class PerfResult:
    """Interleaved single-restart fits of the bipartite and unipartite models
    on one graph, on a common score scale."""

    k_a: int
    k_b: int
    corrected: bool
    records: list = field(default_factory=list)

    def method_records(self, label):
        return [r for r in self.records if r["method"] == label]

    def summary(self):
        out = {}
        for label in ("bisbm", "sbm"):
            recs = self.method_records(label)
            scores = [r["adjusted_score"] for r in recs]
            times = [r["seconds"] for r in recs]
            out[label] = {
                "replicates": len(recs),
                "median_adjusted_score": float(np.median(scores)),
                "mean_seconds": float(np.mean(times)),
                "pure_type_fraction": float(np.mean([r["pure_type"] for r in recs])),
            }
        out["time_ratio_bisbm_over_sbm"] = (
            out["bisbm"]["mean_seconds"] / out["sbm"]["mean_seconds"]
        )
        return out

    def to_dict(self):
        return {
            "K_a": self.k_a, "K_b": self.k_b, "corrected": self.corrected,
            "summary": self.summary(), "records": self.records,
        }

    def csv(self):
        header = ["method", "replicate", "seed", "score", "adjusted_score",
                  "seconds", "pure_type"]
        return _csv_text(header, (
            [r["method"], r["replicate"], r["seed"], r["score"],
             r["adjusted_score"], r["seconds"], int(r["pure_type"])]
            for r in self.records
        ))


def run_perf_comparison(graph, k_a, k_b, replicates=200, seed=0, corrected=True,
                        progress=None):
    """Single-restart bipartite fits (k_a, k_b) vs unipartite fits (K = k_a+k_b)
    on the same graph, interleaved replicate-by-replicate to neutralize drift.

    Scores are compared on the common unipartite scale (adjusted_score), which
    coincides with the bipartite objective on pure-type partitions.
    """
    model_b = ModelSpec("bipartite", corrected)
    model_u = ModelSpec("unipartite", corrected)
    result = PerfResult(k_a=k_a, k_b=k_b, corrected=corrected)
    for rep in range(int(replicates)):
        for label, model in (("bisbm", model_b), ("sbm", model_u)):
            rep_seed = _fit_seed(seed, 0, rep, 0 if label == "bisbm" else 1)
            t0 = time.perf_counter()
            fit = kl_fit(graph, model, k_a, k_b, restarts=1, seed=rep_seed)
            seconds = time.perf_counter() - t0
            result.records.append({
                "method": label, "replicate": rep, "seed": rep_seed,
                "score": fit.best_score,
                "adjusted_score": float(
                    adjusted_score(graph, fit.best_partition, corrected)
                ),
                "seconds": seconds,
                "pure_type": bool(fit.pure_type_flags[0]),
            })
        if progress:
            progress(rep + 1)
    return result


# ---------------------------------------------------------------------------
# stability and clump parity
# ---------------------------------------------------------------------------

def run_stability_check(graph, p_init, model, mode="descend", engine=None):
    """mode="hold": report whether p_init is a single-move local optimum.
    mode="descend": run the sweep search from p_init; report NMI(final, init)
    and the per-sweep score trajectory."""
    if mode == "hold":
        return {
            "mode": "hold",
            "is_local_optimum": bool(is_local_optimum(graph, p_init, model)),
        }
    if mode != "descend":
        raise BisbmError(f"unknown stability mode {mode!r}")
    final, score, trajectory = search_from_partition(graph, p_init, model, engine=engine)
    return {
        "mode": "descend",
        "final_partition": final,
        "final_score": float(score),
        "initial_score": float(trajectory[0]),
        "trajectory": [float(t) for t in trajectory],
        "nmi_vs_init": float(nmi(final, p_init)),
    }


def run_clump_parity(num_clumps_list, clump_a=2, clump_b=2, corrected=True,
                     restarts=400, seed=0):
    """For each K in the list: a K-clump ring fitted by the bipartite model
    (K split evenly by type) and the unipartite model (K groups); records the
    nesting-adjusted best scores, the NMI between the two best partitions, and
    whether the unipartite partition is pure-type."""
    rows = []
    for idx, k in enumerate(num_clumps_list):
        k = int(k)
        graph, planted = make_clump_ring(k, clump_a, clump_b)
        k_a, k_b = (k + 1) // 2, k // 2
        model_b = ModelSpec("bipartite", corrected)
        model_u = ModelSpec("unipartite", corrected)
        fit_b = kl_fit(graph, model_b, k_a, k_b, restarts=restarts,
                       seed=_fit_seed(seed, idx, 0, 0))
        fit_u = kl_fit(graph, model_u, k_a, k_b, restarts=restarts,
                       seed=_fit_seed(seed, idx, 0, 1))
        rows.append({
            "K": k,
            "corrected": corrected,
            "bisbm_adjusted_score": float(
                adjusted_score(graph, fit_b.best_partition, corrected)
            ),
            "sbm_adjusted_score": float(
                adjusted_score(graph, fit_u.best_partition, corrected)
            ),
            "nmi_between": float(nmi(fit_b.best_partition, fit_u.best_partition)),
            "sbm_pure_type": bool(
                fit_u.best_partition.is_pure_type(graph.vertex_type)
            ),
            "bisbm_partition": fit_b.best_partition,
            "sbm_partition": fit_u.best_partition,
        })
    return rows
