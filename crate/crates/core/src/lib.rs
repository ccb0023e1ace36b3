//! Critical Fortuin-Kasteleyn planar maps through the hamburger-cheeseburger
//! bijection: words, maps, the bijection itself and the infinite-volume
//! construction.

pub mod bijection;
pub mod error;
pub mod infinite;
pub mod map;
pub mod sampler;
pub mod stats;
pub mod word;

pub use bijection::{psi, psi_inverse};
pub use error::{Error, Result};
pub use infinite::{infinite_ball, root_counts, BallCertificate, RootDegreeStats};
pub use map::{Ball, CombinatorialMap, SubgraphRootedMap};
pub use sampler::{InfiniteWordSource, ModelParams};
pub use stats::{Estimate, ExperimentConfig, OutputFormat, StatReport, Tolerances};
pub use word::{Letter, Matching, Partner, Reduction, Word};
