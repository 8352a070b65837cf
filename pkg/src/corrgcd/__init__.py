"""Code-agnostic soft-decision decoding over correlated Gaussian noise:
block-level rank-ordered guessing decoders, their guessing-codeword
integrations, and a Monte-Carlo BLER benchmark harness."""

from importlib import resources

from .blocks import (BlockClass, BlockPartition, ReliabilityTable, Scope,
                     block_loglik_tables, build_reliability_table, hard_demod,
                     make_partition)
from .channel import (ChannelModel, ebn0_to_sigma, loglik_block, loglik_chain,
                      modulate, sample_noise, transmit)
from .decoders import (DecodeResult, DecodeStatus, decode_gp, decode_gt,
                       decode_ml_oracle, decode_orbgrand_ai)
from .gf2 import (CodeError, LinearCode, build_crc_code, extend_base,
                  is_codeword, load_code, make_code_from_H, semi_systematize)
from .harness import (ConfigError, ExperimentConfig, SweepRow, build_code,
                      parse_config_file, run_point, run_sweep)
from .patterns import CAPPED, EXHAUSTED, Pattern, PatternState, rank_subsets

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a bundled data file, e.g. the CA-Polar [128,110] H matrix."""
    return resources.files(__package__).joinpath("data", name)
