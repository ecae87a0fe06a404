//! Exact computations with cyclic posets, their linearizations over a
//! truncated power-series ring, twisted matrix factorization categories,
//! and the discrete (m-)cluster categories of type A they generate.
//!
//! The crate is organized around the data flow
//! poset -> linearization -> matrix factorizations -> stable category:
//!
//! * [`poset`] — cyclic posets as reduced cocycles, covering posets,
//!   distance functions, admissible automorphisms, Frobenius cyclic posets.
//! * [`scalar`] — the coefficient ring k[t]/(t^N) over F_p.
//! * [`linear`] — the additive category of labeled matrices whose
//!   composition twists by t^{c(xyz)}, with the eta/xi/theta maps.
//! * [`mf`] — matrix factorization objects (V,d) with d^2 = t, the
//!   indecomposables E(x,y), validation and Krull-Schmidt decomposition.
//! * [`stable`] — the stable category over a cyclically ordered poset with
//!   successors: stable Homs, Ext, clusters, mutation, quivers.
//! * [`mcluster`] — the m-cluster category of Z_m * Z: lambda coordinates,
//!   rigidity, angulations, mutation partners, the doubled-strip picture.
//!
//! Every predicate lifted from a structural lemma is cross-checked in the
//! test suite against an independent brute-force oracle.

pub mod error;
pub mod export;
pub mod json;
pub mod linear;
pub mod mcluster;
pub mod mf;
pub mod poset;
pub mod scalar;
pub mod stable;
pub mod verify;

pub use error::{Error, Result};
pub use poset::{AdmissibleAutomorphism, CovElem, CyclicPoset, Elem, PosetParam};
pub use scalar::{Scalar, ScalarRing};
