"""Order-n adaptive Huffman coding (EAHn): offline and online codecs, container, analysis."""

from .adaptive_code import BYTES, AdaptiveCodeTable, Alphabet, check_injectivity_bruteforce, encode_extension, verify_prefix_contexts
from .codec import ContextModel, EahnOutput, build_codebook, eahn_decode, eahn_encode, scan_frequencies
from .container import compress, decompress, inspect_container
from .entropy import check_context_bounds, compression_rate, eahn_entropy
from .errors import CorruptStreamError, EahnError, FormatError, MissingCodewordError
from .huffman import build_huffman
from .online import online_decode, online_encode
from .parallel import eahn_encode_parallel

__version__ = "0.1.0"

__all__ = [
    "BYTES",
    "AdaptiveCodeTable",
    "Alphabet",
    "ContextModel",
    "CorruptStreamError",
    "EahnError",
    "EahnOutput",
    "FormatError",
    "MissingCodewordError",
    "build_codebook",
    "build_huffman",
    "check_context_bounds",
    "check_injectivity_bruteforce",
    "compress",
    "compression_rate",
    "decompress",
    "eahn_decode",
    "eahn_encode",
    "eahn_encode_parallel",
    "eahn_entropy",
    "encode_extension",
    "inspect_container",
    "online_decode",
    "online_encode",
    "scan_frequencies",
    "verify_prefix_contexts",
]
