//! Configuration, sweeps and figure presets behind the `udw` binary.

pub mod config;
pub mod eval;
pub mod presets;
pub mod sweep;

pub use config::{parse_kv, ConfigError, Params};
pub use eval::{eval_point, EvalOutput};
pub use sweep::{run as run_sweep, write_csv, Axis, Row, SweepSpec};
