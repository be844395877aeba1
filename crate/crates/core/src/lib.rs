//! Metrics and central tendencies for persistence diagrams.
//!
//! This crate computes the `d_p` family of distances between finite
//! persistence diagrams (`p = inf` being the bottleneck distance), geodesics
//! between diagrams, and the central tendencies the metrics induce on finite
//! sets of diagrams: the mean (minimizing the quadratic cost `F_2`) and the
//! median (minimizing the absolute cost `F_1`). Both an exhaustive search
//! over matchings and an alternating local search are provided, together
//! with diagnostics for non-uniqueness and numerical probes of the curvature
//! of diagram space.
//!
//! Diagrams are finite multisets of birth/death points above the diagonal;
//! countably many diagonal copies are implicit and absorb unmatched points.
//!
//! ```
//! use pdcentral::{dp_distance, Diagram, PNorm};
//!
//! let x: Diagram = "1 4\n3 5\n".parse().unwrap();
//! let y: Diagram = "0 5\n".parse().unwrap();
//! let (d, pairing) = dp_distance(&x, &y, PNorm::TWO).unwrap();
//! assert!(d > 0.0);
//! assert_eq!(pairing.pairs().len(), 2);
//! ```

pub mod assignment;
pub mod central;
pub mod diagram;
mod error;
pub mod geometry;
pub mod metric;
mod norm;
pub mod selection;

pub use central::{
    alternating_center, conjecture_probe, enumerate_matchings, evaluate_cost, exhaustive_center,
    median_point_bound, AlternatingOptions, AlternatingResult, CandidateResult, CenterOptions,
    CostFunctionValue, Matching, ProbeOptions, ProbeReport, Tendency, TendencyReport,
};
pub use diagram::{diagonal_projection, dist_to_diagonal, Diagram, Element, PlanePoint};
pub use error::{Error, Result};
pub use geometry::{alexandrov_defect, cat_counterexample, AlexandrovProbe, CatWitness};
pub use metric::{
    all_optimal_pairings, dp_distance, geodesic_from_pairing, geodesic_point, pairing_region,
    Pairing, PairingRegion, DEFAULT_ENUMERATION_CAP,
};
pub use norm::{lp_norm, PNorm};
pub use selection::Selection;
