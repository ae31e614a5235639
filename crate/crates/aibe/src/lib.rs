//! Accountable-authority identity-based encryption.
//!
//! In ordinary identity-based encryption the key-issuing authority (PKG) can
//! silently re-distribute any user's decryption key. The schemes implemented
//! here make that risky for the authority: key issuance is an interactive
//! ceremony that leaves the user with one key out of exponentially many
//! *families*, with the family number hidden from the PKG. A leaked key — or
//! even an imperfect pirate decryption box — can then be traced back to
//! whichever party plausibly produced it.
//!
//! The crate provides:
//!
//! * [`groups`] — a symmetric bilinear-group abstraction with a BLS12-381
//!   backend and an insecure integer-exponent mock backend used as an exact
//!   test oracle;
//! * [`sigma`] — Pedersen commitments over two bases and the 3-move
//!   witness-indistinguishable proof of knowledge used by every ceremony;
//! * [`basic`] — the core scheme: commutative-blinding keys, blinded
//!   issuance, white-box key tracing and the weak black-box trace loop;
//! * [`cca`] — a hybrid variant with dual key components and authenticated
//!   symmetric encryption, rejecting malformed ciphertexts;
//! * [`gentry`] — an exponent-inversion variant with the same tracing
//!   mechanism;
//! * [`ibbe`] — identity-based *broadcast* encryption (plain and
//!   accountable) with constant-size ciphertexts;
//! * [`tracing`] — decoder models and the statistical experiment harness;
//! * [`codec`] — versioned binary/armored serialization for every artifact.

// The pervasive mock/curve enums have deliberately asymmetric variant
// sizes; boxing the curve arms would cost Copy semantics for nothing.
#![allow(clippy::large_enum_variant)]

pub mod basic;
pub mod cca;
pub mod codec;
pub mod error;
pub mod gentry;
pub mod groups;
pub mod ibbe;
pub mod sigma;
pub mod tracing;

pub use error::{CodecError, Error, Result};
pub use groups::{BackendKind, BilinearContext, Scalar, SourceElement, TargetElement};
