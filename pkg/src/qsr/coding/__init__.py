"""Code constructions: designs, entanglement-transmission families, classical codes, CET/CEG."""

from qsr.coding.cet import (
    CEGCode,
    CETCode,
    assemble_cet,
    average_performance,
    ceg_from_cet,
    ceg_performance,
    cet_performance,
    cet_performance_direct,
)
from qsr.coding.classical import ClassicalCode, pgm_code, pretty_good_measurement, sample_codewords
from qsr.coding.designs import (
    DesignReport,
    DesignUnavailable,
    UnitaryDesign,
    clifford_group,
    haar_twirl,
    make_design,
    pauli_mixing_design,
    verify_design,
)
from qsr.coding.entanglement import EtCodeFamily, decoupling_bound, output_typical_map, random_et_family
from qsr.coding.mixture import MixtureTerm, mixture_decomposition, reconstruct
from qsr.coding.recovery import bk_recovery

__all__ = [
    "CEGCode",
    "CETCode",
    "ClassicalCode",
    "DesignReport",
    "DesignUnavailable",
    "EtCodeFamily",
    "MixtureTerm",
    "UnitaryDesign",
    "assemble_cet",
    "average_performance",
    "bk_recovery",
    "ceg_from_cet",
    "ceg_performance",
    "cet_performance",
    "cet_performance_direct",
    "clifford_group",
    "decoupling_bound",
    "haar_twirl",
    "make_design",
    "mixture_decomposition",
    "output_typical_map",
    "pauli_mixing_design",
    "pgm_code",
    "pretty_good_measurement",
    "random_et_family",
    "reconstruct",
    "sample_codewords",
    "verify_design",
]
