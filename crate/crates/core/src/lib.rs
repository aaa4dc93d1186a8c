//! Causal structure of reversible channels.
//!
//! Given a reversible channel over named composite systems, either a
//! permutation of a finite product alphabet ([`ClassicalChannel`]) or a
//! unitary on a tensor-product Hilbert space ([`UnitaryChannel`]), this crate
//! decides three relations between an input subset and an output subset:
//!
//! * **signalling**: the input choice can change the output marginal;
//! * **memory decomposition**: the channel splits through an environment so
//!   that the input never reaches the output;
//! * **causal influence**: simulating an intervention on the input after the
//!   evolution needs access to the output. Decided through the T-process
//!   `(U ⊗ I) ∘ SWAP ∘ (U⁻¹ ⊗ I)` and its identity factors.
//!
//! Joint indices are big-endian mixed-radix: the leftmost subsystem is the
//! most significant digit.

pub mod automata;
pub mod causal;
pub mod channel;
pub mod classical;
pub mod error;
pub mod oracle;
pub mod quantum;
pub mod system;

pub use causal::{
    find_witness, has_causal_influence, hierarchy_report, neighbourhood, signalling_relation,
    t_process, CausalModel, HierarchyReport, MemoryDecomposition, NiwdClassification, NiwdVerdict,
    TProcessResult, Witness,
};
pub use channel::{embed, ReversibleChannel};
pub use classical::{apply_instrument, ClassicalChannel, ClassicalInstrument};
pub use error::{Error, Result};
pub use quantum::{partial_trace, DensityOperator, UnitaryChannel, DEFAULT_TOL};
pub use system::{CompositeSystem, SubsystemLabel, WireSet};
