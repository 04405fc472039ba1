//! The K3-graph of lattice triples, the table of complements `M⊥`, and the
//! exact weight/divisor bookkeeping behind the factorization of `τ_M`.

mod consistency;
mod graph;
mod table;

pub use consistency::{
    prop92_obstruction, prop92_rows, rhs_invariant, thm91_check, thm91_consistency, thm93_consistency, Affine, Check, Current,
    LiftData, Prop92Report, RhsValue, Thm91Report, Thm93Report,
};
pub use graph::{admissible, build_graph, table1_graph, K3Edge, K3Graph, K3Vertex};
pub use table::{table1, Table1Row};
