//! Text format, serializers, pictures and the command-line driver for the
//! subshift analyzer.

pub mod cli;
pub mod dsl;
pub mod json;
pub mod render;

pub use cli::run_cli;
pub use dsl::{parse_spec, print_spec, ParseError, SpecDocument};
