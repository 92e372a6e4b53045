"""Completely multiplicative functions into roots of unity: avoidance search,
Hildebrand constants, block-divisible sequences, Hindman search and IP-witnesses."""

from ._core import (
    AvoidanceCertificate,
    CapExceeded,
    FormatError,
    InvalidCertificate,
    IPWitness,
    MultiplicativeFunction,
    UnsupportedMode,
    avoidance_search,
    estimated_digits,
    find_runs,
    fs_closure,
    fu_closure,
    generate_block_sequence,
    hildebrand_constant,
    ip_witness_direct,
    ip_witness_from_proof,
    monochromatic_fu_search,
    relabel,
    run_cli,
    verify_block_divisibility,
    verify_certificate,
    verify_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
