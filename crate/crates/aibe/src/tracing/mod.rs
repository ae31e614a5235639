//! Decoder models, the stateless-decoder contract and the statistical
//! experiment harness around the black-box trace loop.
//!
//! A pirate decryption box is abstracted as a [`Decoder`]: a bytes-in,
//! bytes-out decryption oracle. The trace loop feeds it ciphertexts whose
//! mask depends on the key family and incriminates the PKG exactly when the
//! box never answers correctly. Iterations are only independent if the box
//! is stateless — it must answer each query as if it were the first and
//! cannot self-destruct; [`harness::audit_statelessness`] spot-checks that
//! contract by shuffled replay.

pub mod decoders;
pub mod harness;

use crate::codec::SchemeId;
use crate::error::{Error, Result};

/// Parameters of the black-box trace loop.
#[derive(Debug, Clone, Copy)]
pub struct TraceParams {
    lambda: u32,
    epsilon: f64,
}

impl TraceParams {
    /// `lambda` is the soundness parameter, `epsilon` the decoder's claimed
    /// usefulness in `(0, 1]`.
    pub fn new(lambda: u32, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        if lambda == 0 {
            return Err(Error::UnsupportedLambda(0));
        }
        Ok(Self { lambda, epsilon })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of loop iterations, `L = ceil(16*lambda / epsilon)`.
    pub fn iterations(&self) -> u64 {
        (16.0 * self.lambda as f64 / self.epsilon).ceil() as u64
    }
}

/// Party incriminated by a trace run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Culprit {
    Pkg,
    User,
}

impl std::fmt::Display for Culprit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Culprit::Pkg => write!(f, "PKG"),
            Culprit::User => write!(f, "User"),
        }
    }
}

/// Result of a trace run: the verdict is `Pkg` iff the counter stayed zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceOutcome {
    pub culprit: Culprit,
    pub ctr: u64,
    pub iterations: u64,
}

impl TraceOutcome {
    pub(crate) fn from_ctr(ctr: u64, iterations: u64) -> Self {
        TraceOutcome {
            culprit: if ctr == 0 {
                Culprit::Pkg
            } else {
                Culprit::User
            },
            ctr,
            iterations,
        }
    }
}

/// One decryption query to a decoder.
///
/// `ciphertext` is a complete encoded artifact; `context` carries whatever
/// side information the scheme's decryption algorithm takes (the encoded
/// identity, or the encoded receiver set for broadcast ciphertexts).
pub struct DecoderQuery<'a> {
    pub scheme: SchemeId,
    pub ciphertext: &'a [u8],
    pub context: &'a [u8],
}

/// A stateless decryption oracle under trace.
///
/// Answers are encoded target-group elements (or raw plaintext, scheme
/// depending); `None` is the explicit no-answer. Any reply that fails to
/// parse as a plaintext counts as a miss in the trace loop.
pub trait Decoder: Sync {
    fn scheme(&self) -> SchemeId;

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>>;

    /// Whether the decoder promises to answer queries independently of
    /// history. The trace loop requires this; transports that cannot promise
    /// it still run, but their verdicts lean on an unverified assumption.
    fn stateless(&self) -> bool {
        true
    }

    /// The decoder's true per-ciphertext success rate, when known (built-in
    /// models know theirs; external boxes do not).
    fn known_usefulness(&self) -> Option<f64> {
        None
    }
}
