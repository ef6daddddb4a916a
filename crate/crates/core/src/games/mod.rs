//! Concrete problems, reductions, data structures and bound tracers.

pub mod bits;
pub mod cellprobe;
pub mod fks;
pub mod gt;
pub mod rank;
pub mod tracer;

pub use bits::BitString;
pub use cellprobe::{
    binary_search_predecessor, check_address_only, compile_cellprobe, grover_search,
    AddressOnlyReport, CellProbeScheme, ClassicalScheme, Compiled, CompiledProtocol, QuantumScheme,
};
pub use fks::{fks_build, fks_query, FksAnswer, FksAudit, FksCell, FksLookup, FksRankTable};
pub use gt::{gt_protocol, GtProtocol, GtRun};
pub use rank::{
    gt_self_reduce, par_answer, par_reduce_a, par_reduce_b, rank, GtBlockInstance, ParAInstance,
    ParBInstance, ParBReduction, ParInstance, Parity, RankParityParams,
};
pub use tracer::{
    trace_gt_bound, trace_predecessor_bound, GtStage, GtTrace, LnTwoMultiple, PredChecks,
    PredStage, PredTrace, PredecessorParams,
};
