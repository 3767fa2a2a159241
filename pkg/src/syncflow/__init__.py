"""Decide NDI, NDS and RES for finite synchronous two-agent machines."""

from .machine import (H, L, InvalidMachine, Machine, MachineError, ResourceLimitExceeded, Run,
                      ValidationReport, View, enumerate_runs, fixture_fig1, fixture_fig2,
                      is_possible_view, is_scheduled, l_view_language, make_machine,
                      reachable_restriction, successors, validate_machine, view_of_run)
from .ndi import NdiWitness, check_ndi, delta_abo, ndi_witness_replay
from .nds import (KnowledgeCollection, NdsWitness, StrategyTable, check_nds, knowledge_update,
                  nds_step, strategy_excludes)
from .res import Partition, ReflexivityViolation, check_res, is_unwinding
from .reductions import (Nfa, PeekInstance, nfa_to_machine, nfa_universal, open_predicate,
                         peek_to_machine, solve_peek)
from .verdict import Status, Verdict

__all__ = [name for name in dir() if not name.startswith("_")]
