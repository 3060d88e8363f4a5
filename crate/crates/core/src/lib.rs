//! Random 2-dimensional hypertrees: exact integral homology, determinantal
//! sampling, exhaustive small-n census, and density certificates.
//!
//! A hypertree here is an n-vertex 2-complex with complete 1-skeleton,
//! C(n-1,2) triangles, and vanishing rational H1 and H2 — the 2-dimensional
//! analogue of a spanning tree. The crate samples them from the measure
//! that weights each hypertree by |H1|^2, computes H1 exactly over Z, and
//! evaluates the enumerative identities and density thresholds that govern
//! this model at small n.

pub mod census;
pub mod certificates;
pub mod complex;
pub mod error;
pub mod homology;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod mh;
pub mod rng;
pub mod sampler;
pub mod torsion_stats;

pub use complex::{boundary_matrix, projective_plane_6, BoundaryMatrix, Complex2, Triangle};
pub use error::{Error, Result};
pub use homology::{h1, h1_order, Homology, TorsionGroup};
pub use kernel::{build_kernel, DppKernel, KernelBackend};
pub use linalg::{IntMatrix, SnfResult};
pub use sampler::{SampleMethod, SampleRecord};
