//! Exponent-inversion accountable-authority IBE.
//!
//! Keys are single group elements `d = (h * g^{-t})^{1/(alpha - ID)}` with a
//! scalar family number `t`. The issuance ceremony blinds the family exactly
//! as in [`crate::basic`], over the bases `(g^{-1}, g1 * g^{-ID})`:
//! the user commits to `R = g^{-t0} * (g1 * g^{-ID})^theta`, the PKG folds
//! in `t1` and the user unblinds, ending with `t = t0 + t1` perfectly hidden
//! from the authority. Valid keys satisfy
//!
//! ```text
//! e(d, g1 * g^{-ID}) = e(h, g) * e(g, g)^{-t}
//! ```
//!
//! Encryption and decryption follow the underlying exponent-inversion IBE
//! unchanged (one pairing to decrypt); the black-box trace loop feeds the
//! decoder ciphertexts whose target-group component uses a mismatched
//! exponent, as in the core scheme.
//!
//! Key-generation security proofs for this variant rewind the proof of
//! knowledge at every issuance, so concurrent ceremonies fall outside the
//! analyzed model; the implementation does not forbid them.

use crate::codec::{self, SchemeId};
use crate::error::{Error, Result};
use crate::groups::rand::ScalarSource;
use crate::groups::{BilinearContext, Scalar, SourceElement, TargetElement};
use crate::sigma::{
    self, CeremonyRequest, CommitMessage, CommitmentSession, PedersenBases, PokResponse,
};
use crate::tracing::{Decoder, DecoderQuery, TraceOutcome, TraceParams};

/// `(g, g1 = g^alpha, h)` plus cached `e(g,g)` and `e(g,h)`.
#[derive(Debug, Clone)]
pub struct GentryMpk {
    pub(crate) ctx: BilinearContext,
    pub g1: SourceElement,
    pub h: SourceElement,
    /// Cached `e(g, g)`.
    pub e_g_g: TargetElement,
    /// Cached `e(g, h)`.
    pub e_g_h: TargetElement,
}

impl GentryMpk {
    pub fn context(&self) -> &BilinearContext {
        &self.ctx
    }

    /// `g1 * g^{-ID}`, the identity-bound base everything revolves around.
    pub fn id_base(&self, id: &Scalar) -> SourceElement {
        self.g1.div(&self.ctx.generator().exp(id))
    }

    /// Ceremony commitment bases `(g^{-1}, g1 * g^{-ID})`. Fails with
    /// `SingularIdentity` when `ID` collides with the master exponent.
    pub fn pedersen_bases(&self, id: &Scalar) -> Result<PedersenBases> {
        PedersenBases::new(self.ctx.generator().inverse(), self.id_base(id))
            .map_err(|_| Error::SingularIdentity)
    }
}

/// The master secret exponent `alpha`.
#[derive(Debug, Clone)]
pub struct GentryMsk {
    pub alpha: Scalar,
}

/// A traceable key `(d, t)` for one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GentryKey {
    pub d: SourceElement,
    pub t_id: Scalar,
    pub identity: Scalar,
}

/// The PKG's blinded ceremony reply.
#[derive(Debug, Clone)]
pub struct GentryBlindedKey {
    pub d: SourceElement,
    pub t: Scalar,
}

/// `((g1 * g^{-ID})^s, e(g,g)^s, m * e(g,h)^s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GentryCiphertext {
    pub c1: SourceElement,
    pub c2: TargetElement,
    pub c3: TargetElement,
}

/// Tape order: `alpha`, then the exponent of `h`.
pub fn setup(ctx: &BilinearContext, src: &mut dyn ScalarSource) -> (GentryMpk, GentryMsk) {
    let g = ctx.generator();
    let alpha = src.next_nonzero(ctx);
    let h = ctx.random_source(src);
    (
        GentryMpk {
            ctx: ctx.clone(),
            g1: g.exp(&alpha),
            h,
            e_g_g: ctx.gt_generator(),
            e_g_h: ctx.pair(&g, &h),
        },
        GentryMsk { alpha },
    )
}

/// The user's ceremony state between round 1 and finalize.
pub struct GentryUserState {
    session: CommitmentSession,
}

impl GentryUserState {
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

/// Round 1: commit to `R = g^{-t0} * (g1 * g^{-ID})^theta` and open the
/// proof of knowledge.
pub fn keygen_user_round1(
    mpk: &GentryMpk,
    id: &Scalar,
    src: &mut dyn ScalarSource,
) -> Result<(GentryUserState, CommitMessage)> {
    let bases = mpk.pedersen_bases(id)?;
    let (session, msg) = CommitmentSession::open(&mpk.ctx, &bases, src);
    Ok((GentryUserState { session }, msg))
}

/// Round 1 for the file ceremony.
pub fn keygen_user_round1_ni(
    mpk: &GentryMpk,
    id: &Scalar,
    src: &mut dyn ScalarSource,
) -> Result<(GentryUserState, CeremonyRequest)> {
    let bases = mpk.pedersen_bases(id)?;
    let (session, request) = CommitmentSession::open_ni(&mpk.ctx, &bases, src);
    Ok((GentryUserState { session }, request))
}

pub fn keygen_challenge(mpk: &GentryMpk, src: &mut dyn ScalarSource) -> Scalar {
    src.next_nonzero(&mpk.ctx)
}

/// Round 2: verify the proof and return
/// `((h * R * g^{-t1})^{1/(alpha - ID)}, t1)`. Aborts if `ID = alpha`.
pub fn keygen_pkg_round2(
    msk: &GentryMsk,
    mpk: &GentryMpk,
    id: &Scalar,
    msg: &CommitMessage,
    challenge: &Scalar,
    response: &PokResponse,
    src: &mut dyn ScalarSource,
) -> Result<GentryBlindedKey> {
    let bases = mpk.pedersen_bases(id)?;
    if !sigma::verify_commit_message(&bases, msg, challenge, response) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &msg.commitment, src)
}

/// Round 2 for the file ceremony.
pub fn keygen_pkg_respond_ni(
    msk: &GentryMsk,
    mpk: &GentryMpk,
    id: &Scalar,
    request: &CeremonyRequest,
    src: &mut dyn ScalarSource,
) -> Result<GentryBlindedKey> {
    let bases = mpk.pedersen_bases(id)?;
    if !sigma::verify_request(&mpk.ctx, &bases, request) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &request.commitment, src)
}

fn inversion_exponent(msk: &GentryMsk, id: &Scalar) -> Result<Scalar> {
    msk.alpha.sub(id).inv().map_err(|_| Error::SingularIdentity)
}

fn issue_blinded(
    msk: &GentryMsk,
    mpk: &GentryMpk,
    id: &Scalar,
    commitment: &SourceElement,
    src: &mut dyn ScalarSource,
) -> Result<GentryBlindedKey> {
    let inv = inversion_exponent(msk, id)?;
    let t1 = src.next_nonzero(&mpk.ctx);
    let d = mpk
        .h
        .mul(commitment)
        .div(&mpk.ctx.generator().exp(&t1))
        .exp(&inv);
    Ok(GentryBlindedKey { d, t: t1 })
}

/// Round 3: unblind as `d = d' / g^theta`, set `t = t1 + t0` and enforce the
/// validity relation before accepting.
pub fn keygen_user_finalize(
    mpk: &GentryMpk,
    id: &Scalar,
    state: GentryUserState,
    blinded: &GentryBlindedKey,
) -> Result<GentryKey> {
    let witness = state.session.witness();
    let d = blinded.d.div(&mpk.ctx.generator().exp(witness.theta()));
    let key = GentryKey {
        d,
        t_id: blinded.t.add(witness.t0()),
        identity: *id,
    };
    if !key_sanity_check(mpk, &key) {
        return Err(Error::KeySanityFailed);
    }
    Ok(key)
}

/// Full interactive ceremony in-process.
pub fn run_keygen(
    mpk: &GentryMpk,
    msk: &GentryMsk,
    id: &Scalar,
    user_src: &mut dyn ScalarSource,
    pkg_src: &mut dyn ScalarSource,
) -> Result<GentryKey> {
    let (mut state, msg) = keygen_user_round1(mpk, id, user_src)?;
    let challenge = keygen_challenge(mpk, pkg_src);
    let response = state.respond(&challenge)?;
    let blinded = keygen_pkg_round2(msk, mpk, id, &msg, &challenge, &response, pkg_src)?;
    keygen_user_finalize(mpk, id, state, &blinded)
}

/// Direct issuance with a chosen family number (PKG capability).
pub fn keygen_direct(
    msk: &GentryMsk,
    mpk: &GentryMpk,
    id: &Scalar,
    family: &Scalar,
) -> Result<GentryKey> {
    let inv = inversion_exponent(msk, id)?;
    let d = mpk.h.div(&mpk.ctx.generator().exp(family)).exp(&inv);
    Ok(GentryKey {
        d,
        t_id: *family,
        identity: *id,
    })
}

/// Encrypts `m` in the target group; no pairing evaluations.
pub fn encrypt(
    mpk: &GentryMpk,
    id: &Scalar,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> GentryCiphertext {
    let s = src.next_nonzero(&mpk.ctx);
    GentryCiphertext {
        c1: mpk.id_base(id).exp(&s),
        c2: mpk.e_g_g.exp(&s),
        c3: m.mul(&mpk.e_g_h.exp(&s)),
    }
}

/// `m = C3 * (e(C1, d) * C2^t)^{-1}` — a single pairing.
pub fn decrypt(mpk: &GentryMpk, key: &GentryKey, ct: &GentryCiphertext) -> TargetElement {
    ct.c3
        .div(&mpk.ctx.pair(&ct.c1, &key.d).mul(&ct.c2.exp(&key.t_id)))
}

/// The key-validity relation `e(d, g1 * g^{-ID}) = e(h,g) * e(g,g)^{-t}`.
pub fn key_sanity_check(mpk: &GentryMpk, key: &GentryKey) -> bool {
    let lhs = mpk.ctx.pair(&key.d, &mpk.id_base(&key.identity));
    let rhs = mpk.e_g_h.mul(&mpk.e_g_g.exp(&key.t_id).inverse());
    lhs == rhs
}

/// White-box trace: validity check, then the family number.
pub fn trace_whitebox(mpk: &GentryMpk, key: &GentryKey) -> Option<Scalar> {
    key_sanity_check(mpk, key).then_some(key.t_id)
}

/// One tracing ciphertext: `C1` honest for `s`, the target-group component
/// on a distinct exponent `s'`, and `C3` assembled with the traced key.
pub fn make_tracing_ciphertext(
    mpk: &GentryMpk,
    key: &GentryKey,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<GentryCiphertext> {
    if !key_sanity_check(mpk, key) {
        return Err(Error::KeySanityFailed);
    }
    let s = src.next_nonzero(&mpk.ctx);
    let mut s_prime = src.next_nonzero(&mpk.ctx);
    while s_prime == s {
        s_prime = src.next_nonzero(&mpk.ctx);
    }
    let c1 = mpk.id_base(&key.identity).exp(&s);
    let c2 = mpk.e_g_h.exp(&s_prime);
    let c3 = m.mul(&mpk.ctx.pair(&c1, &key.d)).mul(&c2.exp(&key.t_id));
    Ok(GentryCiphertext { c1, c2, c3 })
}

/// The weak black-box trace loop; semantics as in the core scheme.
pub fn trace_blackbox(
    mpk: &GentryMpk,
    key: &GentryKey,
    params: &TraceParams,
    decoder: &dyn Decoder,
    src: &mut dyn ScalarSource,
) -> Result<TraceOutcome> {
    if decoder.scheme() != SchemeId::Gentry {
        return Err(Error::SchemeMismatch);
    }
    if !key_sanity_check(mpk, key) {
        return Err(Error::KeySanityFailed);
    }
    let iterations = params.iterations();
    let context_bytes = key.identity.to_bytes();
    let mut ctr = 0u64;
    for _ in 0..iterations {
        let m = mpk.ctx.random_target(src);
        let ct = make_tracing_ciphertext(mpk, key, &m, src)?;
        let ct_bytes = codec::encode_gentry_ciphertext(mpk, &ct);
        let query = DecoderQuery {
            scheme: SchemeId::Gentry,
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
