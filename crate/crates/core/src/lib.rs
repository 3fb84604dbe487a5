//! Exact p-Wasserstein machinery for persistence diagrams.
//!
//! Three capabilities, built on one another:
//!
//! - **Distances** ([`diagram`], [`mod@wasserstein`]): the p-Wasserstein
//!   distance between finite diagrams as an exact minimum over partial
//!   matchings, computed by reduction to a balanced assignment problem and
//!   validated against literal enumeration.
//! - **Embeddings** ([`embedding`]): the isometric embedding of finite
//!   l^p point sets into diagram space, with verifiers for the exact
//!   isometry and for the cost bounds that force it.
//! - **Certificates** ([`hilbert`], [`probe`]): Schoenberg eigenvalue
//!   certificates deciding whether a finite metric space embeds
//!   isometrically into a Hilbert space, best-effort Euclidean embeddings
//!   with distortion reports, and seeded growth experiments over sampled
//!   families.

pub mod assignment;
pub mod diagram;
pub mod embedding;
pub mod error;
pub mod hilbert;
pub mod probe;
pub mod wasserstein;

pub use assignment::{solve_assignment, Assignment, AssignmentProblem};
pub use diagram::{matching_cost, DiagramPoint, Order, PartialMatching, PersistenceDiagram};
pub use embedding::{
    choose_truncation, embed_point, embedding_constant, lp_distance, project_head, project_tail,
    DeviantReport, EmbeddingSpec, IsometryReport, PointSet, DEFAULT_ISOMETRY_TOL,
};
pub use error::{Error, Result};
pub use hilbert::{
    certify, gram_from_distances, mds_embed, star_metric, CertificateRecord, DistortionReport,
    EmbeddingCertificate, FiniteMetricSpace, Verdict, DEFAULT_SPECTRAL_TOL,
};
pub use probe::{distortion_probe, growth_table_csv, Family, GrowthRow, DEFAULT_PROBE_CAP};
pub use wasserstein::{
    brute_force_wasserstein, build_assignment, distance_matrix, wasserstein, WassersteinResult,
    BRUTE_FORCE_LIMIT,
};
