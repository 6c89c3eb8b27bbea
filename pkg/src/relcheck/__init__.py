"""Finite double categories of relations: construction, audit and comparison."""
from .category import (TableCategory, Category, LimitCone, Product, Pullback, Terminal,
                       BoundaryError, MissingStructure, UnknownMorphism, CategoryError,
                       compose, find_limit, is_limit, classify_morphism, as_table)
from .finset import FinSet, Fn, fn, bool_matrix, matrix_compose
from .factorization import (FactorizationSystem, LiftingSquare, epimono, factorize,
                            fill_diagonal, check_factorization_system)
from .double import (Cell, DoubleCategory, restrict, extend, companion, conjoint, tabulator,
                     tabulator_factor, local_product, kernel, cokernel, classify_cover_inclusion,
                     is_cartesian, is_opcartesian, paste)
from .spans import Proarrow, SpanDouble, RelDouble, build_rel_double, relation
from .table import SpanTable, TableDouble, span_control, table_copy, explicit_copy
from .audit import (Budget, AuditReport, Verdict, Witness, CONDITION_NAMES, audit, check,
                    replay_witness, derive_classes)
from .equivalence import (Equivalence, EquivalenceReport, build_F, build_G, adjunction_witness,
                          check_equivalence)
from .formats import (ParseError, parse_category, emit_category, parse_fs, emit_fs,
                      parse_double, emit_double, parse_report, emit_report)
