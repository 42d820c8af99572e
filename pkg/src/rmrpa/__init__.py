"""Recursive projection-aggregation decoding of Reed-Muller codes, with sparse
multi-decoder variants and a Monte-Carlo BLER harness."""

from .budget import BudgetReport
from .channel import ChannelParams, ebn0_to_sigma, transmit
from .crc3 import CRC3_GSM, CrcSpec, crc_append, crc_check
from .estimators import RMEncoder, RPADecoder, SRPADecoder
from .fhtdec import decode_first_order, fht
from .rmcode import NotACodewordError, RmCode, build_code, encode, min_distance, recover_message
from .rpa import RpaConfig, aggregate, project_hard, project_soft, rpa_decode
from .srpa import SparsePlan, SrpaConfig, budget_formula, sample_plan, srpa_multi_decode, srpa_single_decode

__version__ = "0.1.0"
