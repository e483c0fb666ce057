"""Partition finite groups into classes with equal character tables."""
from .cyclo import Cyclotomic, E, parse_cyclotomic, serialize
from .tables import CharacterTable, load_tables, save_tables
from .dixon import character_table
from .canon import table_fingerprint
from .pipeline import verify_isomorphic

__all__ = [
    "Cyclotomic", "E", "parse_cyclotomic", "serialize",
    "CharacterTable", "load_tables", "save_tables",
    "character_table", "table_fingerprint", "verify_isomorphic",
]
__version__ = "0.1.0"
