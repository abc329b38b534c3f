//! Generalized Whittaker models for holomorphic discrete series of the
//! Hermitian groups `SU(p,q)`, computed on concrete matrix realizations.
//!
//! The crate is organised bottom-up:
//!
//! * [`matcore`] — dense complex matrices, structured `exp`/`log`.
//! * [`hermgroup`] — `SU(p,q)`, the Harish-Chandra decomposition `P⁺K_ℂP⁻`,
//!   the bounded domain and the universal cocycle/kernel.
//! * [`rootdata`] — strongly orthogonal roots, restricted roots, the maximal
//!   parabolic `𝔩 ⊕ 𝔫_{1/2} ⊕ 𝔫_1` and the complex structure on `𝔫_{1/2}`.
//! * [`pkn`] — the `P⁺K_ℂN_ℂ` factorization.
//! * [`fock`] — the Fock model of the nilradical.
//! * [`holods`] — holomorphic discrete series on the domain.
//! * [`whittaker`] — kernels, embeddings into `L²(G/N, ω)` and their norms.

pub mod error;
pub mod fock;
pub mod hermgroup;
pub mod holods;
pub mod matcore;
pub mod pkn;
pub mod quad;
pub mod rootdata;
pub mod sample;
pub mod whittaker;

pub use error::{Error, Result};
pub use fock::{FockSpace, FockVector, Oscillator};
pub use hermgroup::{DomainPoint, GroupElement, GroupTag, HCTriple};
pub use holods::{DSParams, DSStatus, HoloFunction, KRep};
pub use matcore::{BlockSpec, CMatrix, C64};
pub use pkn::{PKNTriple, Sign};
pub use rootdata::RootDatum;
pub use whittaker::WhittakerKernel;
