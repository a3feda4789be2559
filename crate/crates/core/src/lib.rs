//! Lower bounds for single-machine job sequencing problems from relaxed
//! decision diagrams and Lagrangian relaxation.
//!
//! A problem class is a dynamic-programming model ([`model::DpModel`]). The
//! diagram builder compiles it layer by layer, merging two nodes only when
//! their states agree on the model's exact key, so arc costs along every
//! path stay exact while the diagram admits sequences that repeat jobs. The
//! all-different constraint is then priced into the arcs with Lagrange
//! multipliers and the dual is solved by subgradient ascent with Polyak
//! steps ([`lagrangian::solve_dual`]).
//!
//! ```
//! use seqbound_core::prelude::*;
//!
//! let inst = JobInstance::tardiness(vec![3, 2, 2], vec![0, 1, 1], vec![5, 3, 5], vec![1, 1, 1]);
//! let model = TardinessModel::new(&inst).unwrap();
//! let diagram = compile_relaxed(&model, &BuildOptions::default()).unwrap();
//! let result = solve_dual(&diagram, &SubgradientConfig::new(4.0)).unwrap();
//! assert!(result.best_bound <= 4.0 + 1e-9);
//! ```

pub mod diagram;
pub mod error;
pub mod harness;
pub mod instance;
pub mod io;
pub mod jobset;
pub mod lagrangian;
pub mod model;
pub mod oracle;
pub mod solve;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::diagram::{
        compile_exact, compile_relaxed, merge_nodes, shortest_path, BuildOptions, LayeredDiagram,
    };
    pub use crate::error::{Error, Result};
    pub use crate::instance::{d_of_h, CommonDueDates, DurationTable, JobInstance, ProblemKind};
    pub use crate::jobset::JobSet;
    pub use crate::lagrangian::{
        solve_dual, theta, BoundResult, Certificate, DualVector, SubgradientConfig,
    };
    pub use crate::model::{DpModel, EtModel, TardinessModel, TspModel};
    pub use crate::oracle::{brute_force, check_relaxation};
}
