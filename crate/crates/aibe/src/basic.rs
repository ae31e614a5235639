//! The core accountable-authority IBE scheme.
//!
//! Keys have the commutative-blinding shape `(d1, d2, d3)` with
//! `d1 = (Y * h^{d3})^{1/x} * F(ID)^r`, `d2 = X^r`; the scalar `d3` is the
//! *key family number*. Issuance is a three-message ceremony: the user
//! commits to `t0` (perfectly hidden behind a Pedersen commitment with a
//! proof of knowledge), the PKG folds its own `t1` into a blinded key, and
//! the user unblinds and re-randomizes, ending with `d3 = t0 + t1` — a value
//! the PKG has no information about. Valid keys satisfy
//!
//! ```text
//! e(d1, X) = e(Y, g) * e(h, g)^{d3} * e(F(ID), d2)
//! ```
//!
//! which is both the user's acceptance test and the white-box trace: any
//! well-formed key betrays its family as `d3`.
//!
//! Black-box tracing feeds a decoder ciphertexts whose `C3` component uses a
//! mismatched exponent; decrypting those correctly requires knowing the
//! family number, so a box built by the PKG (which can otherwise decrypt
//! everything) gives itself away by never answering.
//!
//! Identity hashing is pluggable: `F(ID) = g^ID * Z`, or the bit-string
//! product hash over a public vector for adaptive security.

use crate::codec::{self, SchemeId};
use crate::error::{Error, Result};
use crate::groups::rand::ScalarSource;
use crate::groups::{BilinearContext, Scalar, SourceElement, TargetElement};
use crate::sigma::{
    self, CeremonyRequest, CommitMessage, CommitmentSession, PedersenBases, PokResponse,
};
use crate::tracing::{Decoder, DecoderQuery, TraceOutcome, TraceParams};

const IDENTITY_DOMAIN: &[u8] = b"aibe/identity-scalar/v1";
const IDENTITY_BITS_DOMAIN: &[u8] = b"aibe/identity-bits/v1";

/// An identity, as the scalar the schemes compute with, or as a bit string
/// when the master key carries the bit-product hash.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    Scalar(Scalar),
    Bits(Vec<bool>),
}

impl Identity {
    /// Maps an arbitrary string into `Z_p*` with a domain-separated hash.
    /// Raw scalars are also accepted (`Identity::Scalar`) for test vectors.
    pub fn from_str_scalar(ctx: &BilinearContext, s: &str) -> Identity {
        Identity::Scalar(ctx.hash_to_scalar(IDENTITY_DOMAIN, s.as_bytes()))
    }

    /// Maps an arbitrary string onto `n` bits for the bit-product hash.
    pub fn from_str_bits(s: &str, n: usize) -> Identity {
        use sha2::{Digest, Sha256};
        let mut bits = Vec::with_capacity(n);
        let mut counter = 0u32;
        while bits.len() < n {
            let mut h = Sha256::new();
            h.update(IDENTITY_BITS_DOMAIN);
            h.update((s.len() as u64).to_be_bytes());
            h.update(s.as_bytes());
            h.update(counter.to_be_bytes());
            let block = h.finalize();
            for byte in block {
                for i in 0..8 {
                    if bits.len() == n {
                        break;
                    }
                    bits.push((byte >> i) & 1 == 1);
                }
            }
            counter += 1;
        }
        Identity::Bits(bits)
    }

    pub fn scalar(&self) -> Option<&Scalar> {
        match self {
            Identity::Scalar(s) => Some(s),
            Identity::Bits(_) => None,
        }
    }
}

/// Identity-hash flavor carried by a master public key.
#[derive(Debug, Clone)]
pub enum IdentityHashMode {
    /// `F(ID) = g^ID * Z`.
    BonehBoyen,
    /// `F(ID) = u' * prod u_i^{ID_i}` over an `n`-bit identity.
    Waters {
        u_prime: SourceElement,
        u: Vec<SourceElement>,
    },
}

/// Requested hash flavor at setup time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashModeRequest {
    BonehBoyen,
    Waters { bits: usize },
}

/// Authority public material: `(X = g^x, Y, Z, h)` plus cached pairings so
/// encryption runs without any pairing evaluation.
#[derive(Debug, Clone)]
pub struct MasterPublicKey {
    pub(crate) ctx: BilinearContext,
    pub x: SourceElement,
    pub y: SourceElement,
    pub z: SourceElement,
    pub h: SourceElement,
    pub hash_mode: IdentityHashMode,
    /// Cached `e(g, h)`.
    pub e_g_h: TargetElement,
    /// Cached `e(g, Y)`.
    pub e_g_y: TargetElement,
}

impl MasterPublicKey {
    pub fn context(&self) -> &BilinearContext {
        &self.ctx
    }

    /// Commitment bases `(h, X)` used by the issuance ceremony.
    pub fn pedersen_bases(&self) -> PedersenBases {
        PedersenBases::new(self.h, self.x).expect("setup never emits identity elements")
    }
}

/// The master secret exponent `x`.
#[derive(Debug, Clone)]
pub struct MasterSecretKey {
    pub x: Scalar,
}

/// A traceable decryption key; `d3` is the family number.
#[derive(Debug, Clone, PartialEq)]
pub struct UserKey {
    pub d1: SourceElement,
    pub d2: SourceElement,
    pub d3: Scalar,
    pub identity: Identity,
}

/// The PKG's ceremony reply, still blinded by the user's commitment.
#[derive(Debug, Clone)]
pub struct BlindedKey {
    pub d1: SourceElement,
    pub d2: SourceElement,
    pub d3: Scalar,
}

/// `(X^s, F(ID)^s, e(g,h)^s, m * e(g,Y)^s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ciphertext {
    pub c1: SourceElement,
    pub c2: SourceElement,
    pub c3: TargetElement,
    pub c4: TargetElement,
}

/// Draws the master key pair. Tape order: `x`, then the exponents of `h`,
/// `Y`, `Z`, then the bit-hash vector if requested.
pub fn setup(
    ctx: &BilinearContext,
    mode: HashModeRequest,
    src: &mut dyn ScalarSource,
) -> (MasterPublicKey, MasterSecretKey) {
    let g = ctx.generator();
    let x = src.next_nonzero(ctx);
    let h = ctx.random_source(src);
    let y = ctx.random_source(src);
    let z = ctx.random_source(src);
    let hash_mode = match mode {
        HashModeRequest::BonehBoyen => IdentityHashMode::BonehBoyen,
        HashModeRequest::Waters { bits } => IdentityHashMode::Waters {
            u_prime: ctx.random_source(src),
            u: (0..bits).map(|_| ctx.random_source(src)).collect(),
        },
    };
    let x_pub = g.exp(&x);
    let e_g_h = ctx.pair(&g, &h);
    let e_g_y = ctx.pair(&g, &y);
    (
        MasterPublicKey {
            ctx: ctx.clone(),
            x: x_pub,
            y,
            z,
            h,
            hash_mode,
            e_g_h,
            e_g_y,
        },
        MasterSecretKey { x },
    )
}

/// The identity hash `F(ID)`.
pub fn identity_hash(mpk: &MasterPublicKey, id: &Identity) -> Result<SourceElement> {
    match (&mpk.hash_mode, id) {
        (IdentityHashMode::BonehBoyen, Identity::Scalar(s)) => {
            Ok(mpk.ctx.generator().exp(s).mul(&mpk.z))
        }
        (IdentityHashMode::Waters { u_prime, u }, Identity::Bits(bits)) => {
            if bits.len() != u.len() {
                return Err(Error::WatersLengthMismatch {
                    expected: u.len(),
                    got: bits.len(),
                });
            }
            let mut acc = *u_prime;
            for (bit, base) in bits.iter().zip(u) {
                if *bit {
                    acc = acc.mul(base);
                }
            }
            Ok(acc)
        }
        (IdentityHashMode::BonehBoyen, Identity::Bits(_)) => Err(Error::WatersLengthMismatch {
            expected: 0,
            got: 1,
        }),
        (IdentityHashMode::Waters { u, .. }, Identity::Scalar(_)) => {
            Err(Error::WatersLengthMismatch {
                expected: u.len(),
                got: 0,
            })
        }
    }
}

/// The user's private ceremony state between round 1 and finalize.
pub struct KeygenUserState {
    session: CommitmentSession,
}

impl KeygenUserState {
    /// Answers the verifier's challenge. Single use.
    pub fn respond(&mut self, challenge: &Scalar) -> Result<PokResponse> {
        self.session.respond(challenge)
    }

    pub fn commitment(&self) -> &SourceElement {
        self.session.commitment()
    }

    /// The secret opening this party committed to in round 1.
    pub fn witness(&self) -> &sigma::RepresentationWitness {
        self.session.witness()
    }

    /// Rebuilds the state from persisted witness material.
    pub fn resume(witness: sigma::RepresentationWitness, commitment: SourceElement) -> Self {
        Self {
            session: CommitmentSession::resume(witness, commitment),
        }
    }
}

/// Round 1: draw `(t0, theta)`, commit as `R = h^{t0} * X^{theta}` and open
/// the proof of knowledge.
pub fn keygen_user_round1(
    mpk: &MasterPublicKey,
    src: &mut dyn ScalarSource,
) -> (KeygenUserState, CommitMessage) {
    let bases = mpk.pedersen_bases();
    let (session, msg) = CommitmentSession::open(&mpk.ctx, &bases, src);
    (KeygenUserState { session }, msg)
}

/// Round 1 for the file ceremony: the challenge is derived by hashing, so
/// the whole proof fits one request message.
pub fn keygen_user_round1_ni(
    mpk: &MasterPublicKey,
    src: &mut dyn ScalarSource,
) -> (KeygenUserState, CeremonyRequest) {
    let bases = mpk.pedersen_bases();
    let (session, request) = CommitmentSession::open_ni(&mpk.ctx, &bases, src);
    (KeygenUserState { session }, request)
}

/// Verifier-side challenge draw for the interactive flow.
pub fn keygen_challenge(mpk: &MasterPublicKey, src: &mut dyn ScalarSource) -> Scalar {
    src.next_nonzero(&mpk.ctx)
}

/// Round 2, interactive flow: verify the proof transcript and issue the
/// blinded key `((Y * R * h^{t1})^{1/x} * F(ID)^{r'}, X^{r'}, t1)`.
/// Refuses issuance if the proof fails.
pub fn keygen_pkg_round2(
    msk: &MasterSecretKey,
    mpk: &MasterPublicKey,
    id: &Identity,
    msg: &CommitMessage,
    challenge: &Scalar,
    response: &PokResponse,
    src: &mut dyn ScalarSource,
) -> Result<BlindedKey> {
    if !sigma::verify_commit_message(&mpk.pedersen_bases(), msg, challenge, response) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &msg.commitment, src)
}

/// Round 2, non-interactive flow: additionally recomputes the hash
/// challenge and refuses any transcript that does not carry it.
pub fn keygen_pkg_respond_ni(
    msk: &MasterSecretKey,
    mpk: &MasterPublicKey,
    id: &Identity,
    request: &CeremonyRequest,
    src: &mut dyn ScalarSource,
) -> Result<BlindedKey> {
    if !sigma::verify_request(&mpk.ctx, &mpk.pedersen_bases(), request) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &request.commitment, src)
}

/// The actual issuance computation; callers are responsible for having
/// verified the proof of knowledge. Tape order: `r'`, then `t1`.
fn issue_blinded(
    msk: &MasterSecretKey,
    mpk: &MasterPublicKey,
    id: &Identity,
    commitment: &SourceElement,
    src: &mut dyn ScalarSource,
) -> Result<BlindedKey> {
    let f_id = identity_hash(mpk, id)?;
    let r_prime = src.next_nonzero(&mpk.ctx);
    let t1 = src.next_nonzero(&mpk.ctx);
    let x_inv = msk.x.inv()?;
    let d1 = mpk
        .y
        .mul(commitment)
        .mul(&mpk.h.exp(&t1))
        .exp(&x_inv)
        .mul(&f_id.exp(&r_prime));
    let d2 = mpk.x.exp(&r_prime);
    Ok(BlindedKey { d1, d2, d3: t1 })
}

/// Round 3: unblind with `theta`, re-randomize with a fresh `r''`, add `t0`
/// to the family share and enforce the key validity relation before
/// accepting. A malformed PKG reply yields `KeySanityFailed`.
pub fn keygen_user_finalize(
    mpk: &MasterPublicKey,
    id: &Identity,
    state: KeygenUserState,
    blinded: &BlindedKey,
    src: &mut dyn ScalarSource,
) -> Result<UserKey> {
    let f_id = identity_hash(mpk, id)?;
    let witness = state.session.witness();
    let r_second = src.next_nonzero(&mpk.ctx);
    let g_theta = mpk.ctx.generator().exp(witness.theta());
    let d1 = blinded.d1.div(&g_theta).mul(&f_id.exp(&r_second));
    let d2 = blinded.d2.mul(&mpk.x.exp(&r_second));
    let d3 = blinded.d3.add(witness.t0());
    let key = UserKey {
        d1,
        d2,
        d3,
        identity: id.clone(),
    };
    if !key_sanity_check(mpk, id, &key) {
        return Err(Error::KeySanityFailed);
    }
    Ok(key)
}

/// Runs the full interactive ceremony in-process.
pub fn run_keygen(
    mpk: &MasterPublicKey,
    msk: &MasterSecretKey,
    id: &Identity,
    user_src: &mut dyn ScalarSource,
    pkg_src: &mut dyn ScalarSource,
) -> Result<UserKey> {
    let (mut state, msg) = keygen_user_round1(mpk, user_src);
    let challenge = keygen_challenge(mpk, pkg_src);
    let response = state.respond(&challenge)?;
    let blinded = keygen_pkg_round2(msk, mpk, id, &msg, &challenge, &response, pkg_src)?;
    keygen_user_finalize(mpk, id, state, &blinded, user_src)
}

/// Direct issuance with a chosen family number — what the PKG itself can
/// always compute. Drives dishonest-authority decoder models and two-key
/// test constructions; an honest deployment never calls it.
pub fn keygen_direct(
    msk: &MasterSecretKey,
    mpk: &MasterPublicKey,
    id: &Identity,
    family: &Scalar,
    src: &mut dyn ScalarSource,
) -> Result<UserKey> {
    let f_id = identity_hash(mpk, id)?;
    let r = src.next_nonzero(&mpk.ctx);
    let x_inv = msk.x.inv()?;
    let d1 = mpk.y.mul(&mpk.h.exp(family)).exp(&x_inv).mul(&f_id.exp(&r));
    Ok(UserKey {
        d1,
        d2: mpk.x.exp(&r),
        d3: *family,
        identity: id.clone(),
    })
}

/// Encrypts `m` in the target group. No pairing is evaluated; both masks
/// come from the cached pairings in the public key.
pub fn encrypt(
    mpk: &MasterPublicKey,
    id: &Identity,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<Ciphertext> {
    let f_id = identity_hash(mpk, id)?;
    let s = src.next_nonzero(&mpk.ctx);
    Ok(Ciphertext {
        c1: mpk.x.exp(&s),
        c2: f_id.exp(&s),
        c3: mpk.e_g_h.exp(&s),
        c4: m.mul(&mpk.e_g_y.exp(&s)),
    })
}

/// Decrypts as `m = C4 * (e(C1,d1) / (e(C2,d2) * C3^{d3}))^{-1}`, evaluated
/// as a single product of two pairings. Never rejects: garbage in, garbage
/// out, exactly like the underlying algorithm.
pub fn decrypt(mpk: &MasterPublicKey, key: &UserKey, ct: &Ciphertext) -> TargetElement {
    let quotient_inv = mpk
        .ctx
        .pair_product(&[(ct.c2, key.d2), (ct.c1, key.d1.inverse())]);
    ct.c4.mul(&quotient_inv).mul(&ct.c3.exp(&key.d3))
}

/// The public key-validity relation.
pub fn key_sanity_check(mpk: &MasterPublicKey, id: &Identity, key: &UserKey) -> bool {
    let Ok(f_id) = identity_hash(mpk, id) else {
        return false;
    };
    let lhs = mpk.ctx.pair(&key.d1, &mpk.x);
    let rhs = mpk
        .e_g_y
        .mul(&mpk.e_g_h.exp(&key.d3))
        .mul(&mpk.ctx.pair(&f_id, &key.d2));
    lhs == rhs
}

/// White-box trace: validates the key and reads off its family number.
pub fn trace_whitebox(mpk: &MasterPublicKey, id: &Identity, key: &UserKey) -> Option<Scalar> {
    key_sanity_check(mpk, id, key).then_some(key.d3)
}

/// Publicly checkable consistency of a ciphertext: `e(C1, F(ID)) = e(X, C2)`.
pub fn ciphertext_publicly_consistent(
    mpk: &MasterPublicKey,
    id: &Identity,
    ct: &Ciphertext,
) -> bool {
    let Ok(f_id) = identity_hash(mpk, id) else {
        return false;
    };
    mpk.ctx.pair(&ct.c1, &f_id) == mpk.ctx.pair(&mpk.x, &ct.c2)
}

/// Builds one tracing ciphertext: `(C1, C2)` are honest for a fresh `s`,
/// `C3` uses a distinct exponent `s'`, and `C4` is assembled with the traced
/// key so that exactly the keys sharing its family decrypt to `m`.
pub fn make_tracing_ciphertext(
    mpk: &MasterPublicKey,
    id: &Identity,
    key: &UserKey,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<Ciphertext> {
    if !key_sanity_check(mpk, id, key) {
        return Err(Error::KeySanityFailed);
    }
    let f_id = identity_hash(mpk, id)?;
    let s = src.next_nonzero(&mpk.ctx);
    let mut s_prime = src.next_nonzero(&mpk.ctx);
    while s_prime == s {
        s_prime = src.next_nonzero(&mpk.ctx);
    }
    let c1 = mpk.x.exp(&s);
    let c2 = f_id.exp(&s);
    let c3 = mpk.e_g_h.exp(&s_prime);
    let mask = mpk
        .ctx
        .pair(&c1, &key.d1)
        .div(&mpk.ctx.pair(&c2, &key.d2).mul(&c3.exp(&key.d3)));
    Ok(Ciphertext {
        c1,
        c2,
        c3,
        c4: m.mul(&mask),
    })
}

/// The weak black-box trace loop: `L = ceil(16*lambda/epsilon)` iterations,
/// each feeding the decoder a fresh tracing ciphertext for a fresh random
/// message. The counter moves only on exact plaintext matches; a zero
/// counter incriminates the PKG, anything else the user.
pub fn trace_blackbox(
    mpk: &MasterPublicKey,
    id: &Identity,
    key: &UserKey,
    params: &TraceParams,
    decoder: &dyn Decoder,
    src: &mut dyn ScalarSource,
) -> Result<TraceOutcome> {
    if decoder.scheme() != SchemeId::Core {
        return Err(Error::SchemeMismatch);
    }
    if !key_sanity_check(mpk, id, key) {
        return Err(Error::KeySanityFailed);
    }
    let iterations = params.iterations();
    let context_bytes = codec::encode_identity(id);
    let mut ctr = 0u64;
    for _ in 0..iterations {
        let m = mpk.ctx.random_target(src);
        let ct = make_tracing_ciphertext(mpk, id, key, &m, src)?;
        let ct_bytes = codec::encode_core_ciphertext(mpk, &ct);
        let query = DecoderQuery {
            scheme: SchemeId::Core,
            ciphertext: &ct_bytes,
            context: &context_bytes,
        };
        if let Some(answer) = decoder.decrypt(&query) {
            if let Ok(m_prime) = TargetElement::from_bytes(&mpk.ctx, &answer) {
                if m_prime == m {
                    ctr += 1;
                }
            }
        }
    }
    Ok(TraceOutcome::from_ctr(ctr, iterations))
}
