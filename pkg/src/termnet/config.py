"""Pipeline configuration: one YAML document aggregating every stage's
options, with strict key checking so typos fail loudly."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

import yaml

from .embedding import TrainConfig
from .service import ServiceConfig


@dataclass
class CorpusSection:
    format: str = "jsonl"
    filter_kind: str | None = None


@dataclass
class PhrasingSection:
    algorithm: str = "stat"
    delta: float = 2.0
    threshold_pass1: float = 5.0
    threshold_pass2: float = 2.5
    max_phrase_len: int = 4
    cooccur_window: int = 3
    keep_fraction: float = 1 / 3


@dataclass
class DenoiseSection:
    min_count: int = 2
    stoplists: list[str] = field(default_factory=list)
    use_bundled_stoplists: bool = True
    lemma_lexicon: str | None = None


@dataclass
class PipelineConfig:
    seed: int = 1
    deterministic: bool = True
    corpus: CorpusSection = field(default_factory=CorpusSection)
    phrasing: PhrasingSection = field(default_factory=PhrasingSection)
    denoise: DenoiseSection = field(default_factory=DenoiseSection)
    train: TrainConfig = field(default_factory=TrainConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)


def _build_section(cls, data: dict, where: str):
    if not isinstance(data, dict):
        raise ValueError(f"config section {where!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(
            f"unknown keys in config section {where!r}: {sorted(unknown)}")
    return cls(**data)


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        raw: Any = yaml.safe_load(fh)
    if raw is None:
        return PipelineConfig()
    if not isinstance(raw, dict):
        raise ValueError("config root must be a mapping")
    sections = {
        "corpus": CorpusSection,
        "phrasing": PhrasingSection,
        "denoise": DenoiseSection,
        "train": TrainConfig,
        "service": ServiceConfig,
    }
    known_root = set(sections) | {"seed", "deterministic"}
    unknown = set(raw) - known_root
    if unknown:
        raise ValueError(f"unknown top-level config keys: {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    if "seed" in raw:
        kwargs["seed"] = int(raw["seed"])
    if "deterministic" in raw:
        kwargs["deterministic"] = bool(raw["deterministic"])
    for name, cls in sections.items():
        if name in raw:
            data = dict(raw[name]) if raw[name] else {}
            if name == "service" and "store_path" in data and data["store_path"]:
                data["store_path"] = str(data["store_path"])
            kwargs[name] = _build_section(cls, data, name)
    config = PipelineConfig(**kwargs)
    config.train.seed = config.seed
    config.train.deterministic = config.deterministic
    return config


DEFAULT_CONFIG_YAML = """\
# termnet pipeline configuration. Every key is optional; the values below
# are the defaults.

# master seed for all stochastic stages
seed: 1
# single-worker fixed-order mode; identical seeds then give byte-identical
# model files
deterministic: true

corpus:
  format: jsonl            # jsonl | tsv | text (text = one sentence per line)
  filter_kind: null        # keep only this record kind (utility | design | other)

phrasing:
  algorithm: stat          # stat | textrank | rake
  delta: 2.0               # discount subtracted from each bigram count; pairs
                           # seen fewer than this many times can never score
                           # above a positive threshold
  threshold_pass1: 5.0     # strict first-pass score threshold
  threshold_pass2: 2.5     # looser second-pass threshold, lets bigrams grow
                           # into 3- and 4-grams
  max_phrase_len: 4        # longest phrase, in underlying words
  cooccur_window: 3        # textrank: max token distance that links two words
  keep_fraction: 0.3333333333333333  # textrank: fraction of top-ranked words kept

denoise:
  min_count: 2             # drop terms seen fewer times than this
  stoplists: []            # extra stop-list files (one term per line)
  use_bundled_stoplists: true   # english + uspto + patent jargon lists
  lemma_lexicon: null      # optional "form lemma" override file

train:
  algorithm: skipgram      # skipgram | glove
  dim: 300                 # vector size
  window: 10               # context positions on each side of the target
  downsample_d: 0.0039     # frequency ceiling; more frequent terms are
                           # dropped from context windows with
                           # p = 1 - sqrt(d / f)
  negatives: 5             # noise tokens per positive context (skipgram)
  epochs: 5
  learning_rate: null      # null = per-algorithm default (0.025 / 0.05)
  min_count: 2
  seed: 1                  # overridden by the top-level seed
  x_max: 100.0             # glove weighting cap
  alpha_weight: 0.75       # glove weighting exponent
  cooccur_weighting: inverse_distance   # inverse_distance | flat
  deterministic: true      # overridden by the top-level flag
  workers: 1               # >1 enables lock-free parallel training
  precision: float32       # float32 | float64

service:
  store_path: null
  host: 127.0.0.1
  port: 8756
  max_k: 100               # largest allowed neighbor count per request
  max_tree_nodes: 500      # cap on projected tree size
  max_text_bytes: 65536    # adjacency request body limit
  cors_origins: ["*"]
  on_demand: true          # memory-map vectors instead of loading them all
"""


def default_config_yaml() -> str:
    return DEFAULT_CONFIG_YAML
