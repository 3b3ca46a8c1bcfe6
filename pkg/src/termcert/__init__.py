"""Verifier for termination certificates of first-order term rewrite systems."""

from .checker import CheckResult, Ko, Ok, Unsupported, check_certificate
from .cpf import ParseError, parse_cpf, parse_cpf_file, serialize_cpf

__all__ = [
    "CheckResult",
    "Ko",
    "Ok",
    "ParseError",
    "Unsupported",
    "check_certificate",
    "parse_cpf",
    "parse_cpf_file",
    "serialize_cpf",
]
