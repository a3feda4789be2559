pub mod canonical;
pub mod orlib;
pub mod targets;

pub use canonical::{from_json, read_canonical, to_json, write_canonical};
pub use orlib::{parse_bf, parse_cpw, InstanceSet};
pub use targets::{parse_targets, read_targets, Target, Targets};
