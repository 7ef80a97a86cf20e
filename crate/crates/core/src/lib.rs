//! Exact arithmetic for fully ramified Galois extensions of degree p^2 of
//! the local function field K0 = F_p((t)).
//!
//! The crate builds such extensions from Artin-Schreier data, computes their
//! ramification breaks, constructs and verifies a Galois scaffold (a pair of
//! group-algebra elements whose action shifts valuations by exact, prescribed
//! amounts), and decides whether the ring of integers is free over its
//! associated order in K0[G]. A small symbolic engine certifies the
//! supporting group-ring identities in truncated polynomial algebras.
//!
//! Modules:
//! - [`fp`], [`series`]: F_p scalars and sparse Laurent series with an
//!   explicit precision window.
//! - [`extension`]: reduction of the defining data, ramification breaks,
//!   the mu/eps decomposition, hypothesis flags.
//! - [`tower`]: arithmetic, Galois action and valuations in K1 and K2.
//! - [`group_algebra`]: K0[G], truncated exponentiation, scaffold elements.
//! - [`verify`]: sampling-based certification of the scaffold valuation law.
//! - [`order`]: integer break tables, the freeness criterion, the associated
//!   order basis and its field-side membership oracle.
//! - [`symbolic`]: exact residual checks for the group-ring identities.
//! - [`cli`]: the command-line pipeline.
//!
//! ```
//! use pscaffold::{build_extension, ExtensionKind, LaurentSeries, Prime};
//!
//! let p = Prime::new(3)?;
//! let beta1 = LaurentSeries::from_pairs(p, &[(-1, 1)]);
//! let beta2 = LaurentSeries::from_pairs(p, &[(-7, 1)]);
//! let ext = build_extension(p, ExtensionKind::Cyclic, &beta1, &beta2, None)?;
//! assert_eq!((ext.b1(), ext.b2()), (1, 19));
//!
//! let scaffold = pscaffold::build_scaffold(&ext)?;
//! let tower = pscaffold::Tower::new(ext)?;
//! let report = pscaffold::verify_valuation_law(&tower, &scaffold, 10, 0)?;
//! assert!(report.verdict);
//!
//! let order = pscaffold::associated_order_report(&tower, &scaffold)?;
//! assert!(order.free_by_r && order.generator_ok == Some(true));
//! # Ok::<(), pscaffold::Error>(())
//! ```

pub mod error;
pub mod extension;
pub mod fp;
pub mod cli;
pub mod group_algebra;
pub mod input;
pub mod order;
pub mod series;
pub mod symbolic;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
pub use extension::{build_extension, decompose_beta2, ExtensionData, ExtensionKind};
pub use fp::Prime;
pub use group_algebra::{build_scaffold, psi_product, truncated_exp, GroupAlgebraElement, Scaffold};
pub use order::{associated_order_report, dw_tables, freeness_by_r, freeness_by_w, OrderReport};
pub use series::{artin_schreier_reduce, Cutoff, LaurentSeries, Valuation};
pub use tower::{GaloisGen, K1Element, K2Element, Tower};
pub use verify::{c4_sufficiency_check, verify_valuation_law, ScaffoldReport};
