//! Quasigroups satisfying the identity `x*(y*(y*x)) = y`.
//!
//! * [`table`]: Cayley tables, Latin validation, parastrophes, translations,
//!   orthogonality and direct products.
//! * [`identity`]: a small language for two-variable identities and the
//!   built-in catalog of the seven classical orthogonality identities plus
//!   idempotency.
//! * [`modular`]: T-quasigroups over residue rings and the polynomial
//!   `k^5 + k^4 + 1` that governs them.
//! * [`search`]: a backtracking model finder.
//! * [`spectrum`]: designs, the `2^k` family and per-order existence reports.
//! * [`fixtures`]: nine reference tables.

pub mod arith;
pub mod fixtures;
pub mod identity;
pub mod modular;
pub mod search;
pub mod spectrum;
pub mod table;

pub use identity::{catalog, check_identity, parse_identity, t2, Identity, Term, Verdict};
pub use modular::{build_t_form, ConditionReport, TForm};
pub use search::{search, verify_witness, SearchMode, SearchOutcome, SearchSpec, SearchStatus};
pub use spectrum::{pbd_compose, spectrum_report, Pbd, SpectrumReport};
pub use table::{CayleyTable, Parastrophe, TableError, Translation};
