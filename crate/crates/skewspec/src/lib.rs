//! Exact-arithmetic construction and verification of specification-
//! property witnesses for step skew products with a subshift-of-finite-
//! type base and piecewise-linear interval fibres.
//!
//! Given expanding, surjective fibre maps, a primitive base, and a
//! periodic base word whose fibre composite is mixing, the crate
//! computes a gap length M(eps) and, for any finite list of orbit
//! segments, an exactly periodic point of the skew product that traces
//! every segment within eps. Everything is computed over arbitrary-
//! precision rationals: images, preimages, metrics, witnesses and audits
//! are bit-exact, and the audit path is independent of the construction
//! path.
//!
//! Fibre maps are restricted to piecewise *linear* maps with rational
//! nodes (general monotone pieces are out of scope); that restriction is
//! what makes every inequality in the pipeline checkable without
//! tolerances.
//!
//! The `examples/` directory has one runnable example per capability;
//! the `skewspec` binary exposes the same operations as subcommands.
//!
//! ```
//! use skewspec::numeric::rat;
//! use skewspec::pwl::PwlMap;
//! use skewspec::skew::{OrbitSegmentSpec, SkewPoint, SkewSystem};
//! use skewspec::subshift::Sft;
//! use skewspec::witness::witness_auto;
//!
//! let sys = SkewSystem::new(
//!     Sft::golden_mean(),
//!     vec![PwlMap::tent(), PwlMap::valley()],
//! )?;
//! let segments = vec![OrbitSegmentSpec {
//!     point: SkewPoint::new("|1".parse()?, rat(1, 3))?,
//!     len: 4,
//! }];
//! let eps = rat(1, 4);
//! let report = witness_auto(&sys, &segments, &eps, 2)?;
//! assert!(report.audit.passes_at(&eps));
//!
//! // the witness is exactly periodic, not approximately
//! let r_k = *report.r.last().unwrap();
//! assert_eq!(sys.nonaut_compose(&report.eta, 0, r_k, &report.z)?, report.z);
//! # Ok::<(), skewspec::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod nonshrink;
pub mod numeric;
pub mod pwl;
pub mod skew;
pub mod subshift;
pub mod witness;

pub use error::{Error, Result};
