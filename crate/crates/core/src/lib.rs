//! Verification engine for multiplicity-free braided fusion categories given
//! by F- and R-symbols.
//!
//! The crate checks pentagon and hexagon coherence, F-unitarity, enumerates
//! every braiding of a fixed F numerically, and for each braiding enumerates
//! the ribbon structures (a torsor under sign characters of the fusion ring),
//! their quantum dimensions, the unique unitary one, and its modular data.

pub mod braiding;
pub mod catalog;
pub mod error;
pub mod fsymbols;
pub mod fusion_ring;
pub mod model;
pub mod modular;
pub mod numerics;
pub mod report;
pub mod ribbon;

pub use braiding::{check_hexagons, solve_braidings, HexagonSystem, RSymbolTable};
pub use error::{Error, Result};
pub use fsymbols::{FSymbolTable, GaugeTransformation};
pub use fusion_ring::{FusionRing, UNIT};
pub use model::{load_model, parse_model, Model, ModelFile};
pub use modular::{is_modular, modular_data, s_matrix, t_matrix, ModularData, Verdict};
pub use numerics::{Tolerance, C64};
pub use report::{run_report, Outcome, Report, RunOptions, Stage};
pub use ribbon::{
    canonical_twist, check_balancing, check_ribbon_condition, enumerate_ribbon_structures, quantum_dims,
    select_unitary_ribbon, sign_characters, RibbonStructure, SignCharacter, Twist,
};
