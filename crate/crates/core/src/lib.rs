//! Analysis of multidimensional subshifts of finite type through strip
//! transition matrices.

pub mod analyze;
pub mod bitmatrix;
pub mod block;
pub mod cubes;
pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod pattern;
mod search;
pub mod strip;
pub mod torus;

pub use analyze::{analyze, find_periodic, AnalysisReport, Budgets, Certificate, Status};
pub use bitmatrix::BitMatrix;
pub use cubes::{normalize_to_cubes, CubeSystem};
pub use error::{Result, SftError};
pub use matrix::StripMatrix;
pub use pattern::{normalization_length, width, Alphabet, FinitePattern, Grid, SftSpec, Symbol};
pub use strip::PeriodicStrip;
pub use torus::{PeriodicPoint, TorusConfig};
