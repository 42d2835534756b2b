//! Bipath persistence over small prime fields.
//!
//! A bipath poset is two finite chains glued at a common bottom and top. Every
//! persistence module over it decomposes into interval modules, and the
//! multiset of intervals in that decomposition is the module's *arc code*.
//! This crate computes arc codes by restricting a bipath module to a finite
//! zigzag slice along a covering map, decomposing the slice with exact linear
//! algebra over GF(p), and reading the multiplicities back through a fixed
//! interval correspondence. On top of that it provides:
//!
//! * bottleneck/interleaving distances between bipath modules, computed by
//!   extending zigzag bars to blocks and matching Z-orbits of bars, and
//! * fibered arc codes and fibered barcodes of two-parameter grid modules,
//!   including a reduced-H0 builder for graph bifiltrations.
//!
//! Modules:
//! [`field`] exact dense linear algebra over GF(p);
//! [`zigzag`] finite zigzag representations and their barcodes;
//! [`bipath`] the bipath poset, covering map, slice restriction, arc codes;
//! [`distance`] blocks, interleaving predicate, orbit matching, bottleneck;
//! [`fibered`] grid modules, pullbacks along embeddings, line barcodes;
//! [`io`] the text formats and canonical JSON emitters used by the CLI.
//!
//! ```
//! use bipath_core::bipath::{BipathInterval, BipathModule, BipathPoset};
//! use bipath_core::distance::{bottleneck_distance, XRat};
//! use bipath_core::field::FieldSpec;
//!
//! let poset = BipathPoset::new(4, 3)?;
//! let field = FieldSpec::new(5)?;
//! let top = BipathInterval::Top { i: 1, j: 2 };
//! let module = BipathModule::interval_module(poset, field, &top)?;
//!
//! let arc_code = module.arc_code()?;
//! assert_eq!(arc_code.multiplicity(&top), 1);
//!
//! let empty = BipathModule::zero(poset, field).arc_code()?;
//! assert_eq!(bottleneck_distance(&arc_code, &empty, &poset)?, XRat::int(1));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

// index loops over matrix entries and rank tables read better than iterator
// chains here
#![allow(clippy::needless_range_loop)]

pub mod bipath;
pub mod distance;
pub mod fibered;
pub mod field;
pub mod io;
pub mod zigzag;

pub use bipath::{ArcCode, BipathInterval, BipathModule, BipathPoset};
pub use distance::{Block, MatchingResult, OrbitBlock, XRat};
pub use fibered::{BipathEmbedding, GridModule, MonotonePath};
pub use field::{FieldSpec, Matrix};
pub use zigzag::{DecInterval, DecKind, ZigzagRep, ZigzagShape, ZzBarcode, ZzInterval};
