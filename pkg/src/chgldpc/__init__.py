"""Check-hybrid GLDPC codes: construction, hard-decision decoding, trapping-set
analysis, super-check placement and error-correction verification."""

from .component import ComponentCode, bdd_decode, component_from_name, make_bch_31_21, make_repetition
from .decoders import (DEFAULT_MAX_ITERS, HybridCode, decode, decode_batch, gallager_b_decode,
                       make_hybrid, pbf_decode)
from .errors import InternalError, RefusalError
from .gf2 import BinaryMatrix, expand_gldpc_matrix, gf2_rank, read_alist, write_alist
from .hybrid import (PlacementPlan, RateReport, array_layout, check_lower_rows_girth,
                     harmful_instances, place_rows, place_ts_guided, rate_lower_bound, rate_report)
from .sim import SimConfig, SimResult, run_sim
from .tanner import QcLayout, TannerGraph, build_permutation_code, girth, search_shifts
from .trapsets import (CriticalSet, TrappingSetInstance, check_fixed_set, critical_number,
                       elementary_orbits, enumerate_elementary_ts, find_critical_set_cw3,
                       find_critical_set_cw4, is_harmful, is_subdivision, min_critical_set_size)
from .verify import GecReport, check_six_error_pattern, find_min_failure, verify_gec

__all__ = [name for name in dir() if not name.startswith("_")]
