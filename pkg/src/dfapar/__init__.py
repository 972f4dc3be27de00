"""DFA minimisation, equivalence and inclusion checking with data-parallel kernels."""

from ._backend import kernels as _kernels
from .automaton import (
    ApartMatrix,
    Dfa,
    Lts,
    Partition,
    canonical_form,
    partition_from_apart,
    prune_unreachable,
    quotient,
    read_dfa,
    validate,
    write_dfa,
)
from .equivalence import ProductResult, check_equiv, check_inclusion, explore_product
from .errors import (
    AlphabetMismatchError,
    BudgetTimeout,
    DfaFormatError,
    InvalidPartitionError,
    MissingInitialError,
    ResourceError,
)
from .generators import (
    fib_word,
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_cycle,
    gen_fib,
    gen_memory_forgetful,
    gen_memory_perfect,
    gen_random_dfa,
)
from .lts import complete_to_dfa, determinize, load_aut
from .minimize import (
    ALGORITHMS,
    ElectionPolicy,
    RefinementReport,
    build_transitive_alphabet,
    minimize,
    moore_minimize,
    naive_pr,
    naive_pr_fused,
    sort_pr,
    trans_minimize,
    trans_pr,
)

BACKEND = _kernels.NAME

__version__ = "0.1.0"
