//! Identity-based broadcast encryption with constant-size ciphertexts, in
//! two flavors: the plain scheme (`bh_*`), kept as a reference oracle, and
//! the accountable variant (`aibbe_*`) whose issuance ceremony blinds a key
//! family number exactly as in the other schemes of this crate.
//!
//! A ciphertext addresses a receiver set `S` through the monic polynomial
//! `P(X) = prod_{ID in S} (X - ID)`; its coefficient vector `rho` folds the
//! public vector `h` into one group element. Each private key carries
//! *delegation components* `T_i = (h_{i+1} * h_i^{-ID})^r` which any member
//! of `S` combines — using the coefficients `y` of the punctured polynomial
//! `P_ID(X) = P(X)/(X - ID)` — into a decryption key specialized to `S`.
//! The two coefficient vectors are linked by the banded convolution
//! `rho = M1 * y`, which is what makes the combination work.
//!
//! In the accountable variant keys additionally embed `t_id = t0 + t1`,
//! perfectly hidden from the authority, and the black-box trace loop feeds
//! the decoder ciphertexts whose `C3` component is a uniformly random
//! target-group element: only the key family pinned at issuance reproduces
//! the tracer's plaintext.

use crate::codec::{self, SchemeId};
use crate::error::{Error, Result};
use crate::groups::rand::ScalarSource;
use crate::groups::{BilinearContext, Scalar, SourceElement, TargetElement};
use crate::sigma::{
    self, CeremonyRequest, CommitMessage, CommitmentSession, PedersenBases, PokResponse,
};
use crate::tracing::{Decoder, DecoderQuery, TraceOutcome, TraceParams};

/// An ordered set of distinct receiver identities.
///
/// Canonically sorted at construction so polynomial expansion — and with it
/// every ciphertext — is deterministic under a fixed tape.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverSet {
    ids: Vec<Scalar>,
}

impl ReceiverSet {
    pub fn new(mut ids: Vec<Scalar>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::EmptyReceiverSet);
        }
        ids.sort_by_key(|s| s.sort_key());
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIdentity);
        }
        Ok(Self { ids })
    }

    pub fn singleton(id: Scalar) -> Self {
        Self { ids: vec![id] }
    }

    pub fn ids(&self) -> &[Scalar] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: &Scalar) -> bool {
        self.ids.iter().any(|x| x == id)
    }
}

/// Coefficients `(rho_0, ..., rho_n)` of `P(X) = prod (X - ID_i)`, monic.
pub fn poly_expand(ctx: &BilinearContext, set: &ReceiverSet) -> Vec<Scalar> {
    expand_roots(ctx, set.ids())
}

/// Coefficients `(y_0, ..., y_{n-1})` of the punctured polynomial
/// `P_ID(X) = prod_{ID_j != ID} (X - ID_j)`. Requires `ID` to be a member.
pub fn punctured_expand(
    ctx: &BilinearContext,
    set: &ReceiverSet,
    id: &Scalar,
) -> Result<Vec<Scalar>> {
    if !set.contains(id) {
        return Err(Error::IdentityNotInSet);
    }
    let rest: Vec<Scalar> = set.ids().iter().filter(|x| *x != id).copied().collect();
    Ok(expand_roots(ctx, &rest))
}

fn expand_roots(ctx: &BilinearContext, roots: &[Scalar]) -> Vec<Scalar> {
    let mut coeffs = vec![ctx.scalar_one()];
    for root in roots {
        let mut next = vec![ctx.scalar_zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&root.mul(c));
        }
        coeffs = next;
    }
    coeffs
}

/// Plain-scheme master public key.
#[derive(Debug, Clone)]
pub struct BhMpk {
    pub(crate) ctx: BilinearContext,
    pub g1: SourceElement,
    pub g2: SourceElement,
    pub z: SourceElement,
    /// `h_i = g^{a_i}` for `i = 0..=N`.
    pub h_vec: Vec<SourceElement>,
    /// Cached `e(g1, g2)`.
    pub e_g1_g2: TargetElement,
}

/// Accountable-scheme master public key; adds `g3` and its cached pairing.
#[derive(Debug, Clone)]
pub struct IbbeMpk {
    pub(crate) ctx: BilinearContext,
    pub g1: SourceElement,
    pub g2: SourceElement,
    pub g3: SourceElement,
    pub z: SourceElement,
    pub h_vec: Vec<SourceElement>,
    /// Cached `e(g1, g2)`.
    pub e_g1_g2: TargetElement,
    /// Cached `e(g1, g3)`.
    pub e_g1_g3: TargetElement,
}

/// Master secret: the exponent vector behind `h` and the exponent `alpha`.
#[derive(Debug, Clone)]
pub struct IbbeMsk {
    pub a_vec: Vec<Scalar>,
    pub alpha: Scalar,
}

impl BhMpk {
    pub fn context(&self) -> &BilinearContext {
        &self.ctx
    }

    /// Maximum receivers per ciphertext.
    pub fn max_receivers(&self) -> usize {
        self.h_vec.len() - 1
    }
}

impl IbbeMpk {
    pub fn context(&self) -> &BilinearContext {
        &self.ctx
    }

    pub fn max_receivers(&self) -> usize {
        self.h_vec.len() - 1
    }

    /// Ceremony commitment bases `(g2, g)`.
    pub fn pedersen_bases(&self) -> PedersenBases {
        PedersenBases::new(self.g2, self.ctx.generator())
            .expect("setup never emits identity elements")
    }

    /// `z * prod h_i^{rho_i}` for a receiver set.
    fn masked_base(&self, rho: &[Scalar]) -> SourceElement {
        let mut acc = self.z;
        for (h_i, rho_i) in self.h_vec.iter().zip(rho) {
            acc = acc.mul(&h_i.exp(rho_i));
        }
        acc
    }

    /// `h_{i+1} * h_i^{-ID}`, the base of the i-th delegation component.
    fn delegation_base(&self, i: usize, id: &Scalar) -> SourceElement {
        self.h_vec[i + 1].mul(&self.h_vec[i].exp(id).inverse())
    }
}

/// Plain-scheme private key.
#[derive(Debug, Clone, PartialEq)]
pub struct BhUserKey {
    pub k1: SourceElement,
    pub k2: SourceElement,
    pub t_vec: Vec<SourceElement>,
    pub identity: Scalar,
}

/// Accountable private key; `t_id` is the family number.
#[derive(Debug, Clone, PartialEq)]
pub struct IbbeUserKey {
    pub k1: SourceElement,
    pub k2: SourceElement,
    pub t_vec: Vec<SourceElement>,
    pub t_id: Scalar,
    pub identity: Scalar,
}

/// Blinded ceremony reply.
#[derive(Debug, Clone)]
pub struct IbbeBlindedKey {
    pub k1: SourceElement,
    pub k2: SourceElement,
    pub t_vec: Vec<SourceElement>,
    pub t: Scalar,
}

/// Plain-scheme ciphertext `(m * e(g1,g2)^s, g^s, (z * prod h^rho)^s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BhCiphertext {
    pub c0: TargetElement,
    pub c1: SourceElement,
    pub c2: SourceElement,
}

/// Accountable ciphertext; `c3 = e(g1,g2)^s` carries the family hook.
#[derive(Debug, Clone, PartialEq)]
pub struct IbbeCiphertext {
    pub c0: TargetElement,
    pub c1: SourceElement,
    pub c2: SourceElement,
    pub c3: TargetElement,
}

/// Receiver-set-specialized decryption key `(D, d, t)`.
#[derive(Debug, Clone)]
pub struct DerivedKey {
    pub big_d: SourceElement,
    pub d: SourceElement,
    pub t_id: Scalar,
}

fn draw_setup_common(
    ctx: &BilinearContext,
    max_receivers: usize,
    src: &mut dyn ScalarSource,
) -> (
    SourceElement,
    Vec<Scalar>,
    Vec<SourceElement>,
    Scalar,
    SourceElement,
) {
    let g = ctx.generator();
    let z = ctx.random_source(src);
    let a_vec: Vec<Scalar> = (0..=max_receivers).map(|_| src.next_nonzero(ctx)).collect();
    let h_vec: Vec<SourceElement> = a_vec.iter().map(|a| g.exp(a)).collect();
    let alpha = src.next_nonzero(ctx);
    let g2 = ctx.random_source(src);
    (z, a_vec, h_vec, alpha, g2)
}

/// Plain-scheme setup. Tape order: `z`, `a_0..a_N`, `alpha`, `g2`.
pub fn bh_setup(
    ctx: &BilinearContext,
    max_receivers: usize,
    src: &mut dyn ScalarSource,
) -> (BhMpk, IbbeMsk) {
    let (z, a_vec, h_vec, alpha, g2) = draw_setup_common(ctx, max_receivers, src);
    let g1 = ctx.generator().exp(&alpha);
    let e_g1_g2 = ctx.pair(&g1, &g2);
    (
        BhMpk {
            ctx: ctx.clone(),
            g1,
            g2,
            z,
            h_vec,
            e_g1_g2,
        },
        IbbeMsk { a_vec, alpha },
    )
}

/// Accountable setup. Tape order: `z`, `a_0..a_N`, `alpha`, `g2`, `g3`.
pub fn aibbe_setup(
    ctx: &BilinearContext,
    max_receivers: usize,
    src: &mut dyn ScalarSource,
) -> (IbbeMpk, IbbeMsk) {
    let (z, a_vec, h_vec, alpha, g2) = draw_setup_common(ctx, max_receivers, src);
    let g3 = ctx.random_source(src);
    let g1 = ctx.generator().exp(&alpha);
    let e_g1_g2 = ctx.pair(&g1, &g2);
    let e_g1_g3 = ctx.pair(&g1, &g3);
    (
        IbbeMpk {
            ctx: ctx.clone(),
            g1,
            g2,
            g3,
            z,
            h_vec,
            e_g1_g2,
            e_g1_g3,
        },
        IbbeMsk { a_vec, alpha },
    )
}

/// Plain-scheme key generation (no ceremony, no family number).
pub fn bh_keygen(msk: &IbbeMsk, mpk: &BhMpk, id: &Scalar, src: &mut dyn ScalarSource) -> BhUserKey {
    let g = mpk.ctx.generator();
    let r = src.next_nonzero(&mpk.ctx);
    let k1 = mpk.g2.exp(&msk.alpha).mul(&mpk.z.exp(&r));
    let k2 = g.exp(&r);
    let n = mpk.max_receivers();
    let t_vec = (0..n)
        .map(|i| {
            mpk.h_vec[i + 1]
                .mul(&mpk.h_vec[i].exp(id).inverse())
                .exp(&r)
        })
        .collect();
    BhUserKey {
        k1,
        k2,
        t_vec,
        identity: *id,
    }
}

/// Plain-scheme encryption for a receiver set of size `<= N`.
pub fn bh_encrypt(
    mpk: &BhMpk,
    set: &ReceiverSet,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<BhCiphertext> {
    if set.len() > mpk.max_receivers() {
        return Err(Error::ReceiverSetTooLarge {
            max: mpk.max_receivers(),
            got: set.len(),
        });
    }
    let rho = poly_expand(&mpk.ctx, set);
    let mut base = mpk.z;
    for (h_i, rho_i) in mpk.h_vec.iter().zip(&rho) {
        base = base.mul(&h_i.exp(rho_i));
    }
    let s = src.next_nonzero(&mpk.ctx);
    Ok(BhCiphertext {
        c0: m.mul(&mpk.e_g1_g2.exp(&s)),
        c1: mpk.ctx.generator().exp(&s),
        c2: base.exp(&s),
    })
}

/// Combines the delegation components into the set-specialized pair
/// `(D, d) = (K1 * prod T_i^{y_i}, K2)`.
pub fn bh_derive(
    mpk: &BhMpk,
    key: &BhUserKey,
    set: &ReceiverSet,
) -> Result<(SourceElement, SourceElement)> {
    let y = punctured_expand(&mpk.ctx, set, &key.identity)?;
    let mut big_d = key.k1;
    for (t_i, y_i) in key.t_vec.iter().zip(&y) {
        big_d = big_d.mul(&t_i.exp(y_i));
    }
    Ok((big_d, key.k2))
}

/// Plain-scheme decryption: `m = C0 * e(C1, D)^{-1} * e(C2, d)`.
pub fn bh_decrypt(
    mpk: &BhMpk,
    key: &BhUserKey,
    set: &ReceiverSet,
    ct: &BhCiphertext,
) -> Result<TargetElement> {
    let (big_d, d) = bh_derive(mpk, key, set)?;
    let quotient = mpk
        .ctx
        .pair_product(&[(ct.c2, d), (ct.c1, big_d.inverse())]);
    Ok(ct.c0.mul(&quotient))
}

/// The user's ceremony state.
pub struct IbbeUserState {
    session: CommitmentSession,
}

impl IbbeUserState {
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

/// Round 1: commit to `R = g2^{t0} * g^theta` with a proof of knowledge.
pub fn keygen_user_round1(
    mpk: &IbbeMpk,
    src: &mut dyn ScalarSource,
) -> (IbbeUserState, CommitMessage) {
    let (session, msg) = CommitmentSession::open(&mpk.ctx, &mpk.pedersen_bases(), src);
    (IbbeUserState { session }, msg)
}

/// Round 1 for the file ceremony.
pub fn keygen_user_round1_ni(
    mpk: &IbbeMpk,
    src: &mut dyn ScalarSource,
) -> (IbbeUserState, CeremonyRequest) {
    let (session, request) = CommitmentSession::open_ni(&mpk.ctx, &mpk.pedersen_bases(), src);
    (IbbeUserState { session }, request)
}

pub fn keygen_challenge(mpk: &IbbeMpk, src: &mut dyn ScalarSource) -> Scalar {
    src.next_nonzero(&mpk.ctx)
}

/// Round 2: verify the proof and return the blinded key
/// `((g2^{t1} * R * g3)^alpha * z^r, g^r, T', t1)`. Tape order: `r`, `t1`.
pub fn keygen_pkg_round2(
    msk: &IbbeMsk,
    mpk: &IbbeMpk,
    id: &Scalar,
    msg: &CommitMessage,
    challenge: &Scalar,
    response: &PokResponse,
    src: &mut dyn ScalarSource,
) -> Result<IbbeBlindedKey> {
    if !sigma::verify_commit_message(&mpk.pedersen_bases(), msg, challenge, response) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &msg.commitment, src)
}

/// Round 2 for the file ceremony.
pub fn keygen_pkg_respond_ni(
    msk: &IbbeMsk,
    mpk: &IbbeMpk,
    id: &Scalar,
    request: &CeremonyRequest,
    src: &mut dyn ScalarSource,
) -> Result<IbbeBlindedKey> {
    if !sigma::verify_request(&mpk.ctx, &mpk.pedersen_bases(), request) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &request.commitment, src)
}

fn issue_blinded(
    msk: &IbbeMsk,
    mpk: &IbbeMpk,
    id: &Scalar,
    commitment: &SourceElement,
    src: &mut dyn ScalarSource,
) -> Result<IbbeBlindedKey> {
    let g = mpk.ctx.generator();
    let r = src.next_nonzero(&mpk.ctx);
    let t1 = src.next_nonzero(&mpk.ctx);
    let k1 = mpk
        .g2
        .exp(&t1)
        .mul(commitment)
        .mul(&mpk.g3)
        .exp(&msk.alpha)
        .mul(&mpk.z.exp(&r));
    let n = mpk.max_receivers();
    let t_vec = (0..n).map(|i| mpk.delegation_base(i, id).exp(&r)).collect();
    Ok(IbbeBlindedKey {
        k1,
        k2: g.exp(&r),
        t_vec,
        t: t1,
    })
}

/// Round 3: unblind with `theta`, re-randomize every component with a fresh
/// `r'`, set `t_id = t1 + t0` and run the full validity check; the failing
/// delegation index is reported on rejection.
pub fn keygen_user_finalize(
    mpk: &IbbeMpk,
    id: &Scalar,
    state: IbbeUserState,
    blinded: &IbbeBlindedKey,
    src: &mut dyn ScalarSource,
) -> Result<IbbeUserKey> {
    let witness = state.session.witness();
    let g = mpk.ctx.generator();
    let r_prime = src.next_nonzero(&mpk.ctx);
    let k1 = blinded
        .k1
        .div(&mpk.g1.exp(witness.theta()))
        .mul(&mpk.z.exp(&r_prime));
    let k2 = blinded.k2.mul(&g.exp(&r_prime));
    let t_vec: Vec<SourceElement> = blinded
        .t_vec
        .iter()
        .enumerate()
        .map(|(i, t_i)| t_i.mul(&mpk.delegation_base(i, id).exp(&r_prime)))
        .collect();
    let key = IbbeUserKey {
        k1,
        k2,
        t_vec,
        t_id: blinded.t.add(witness.t0()),
        identity: *id,
    };
    key_validity(mpk, &key)?;
    Ok(key)
}

/// Full interactive ceremony in-process.
pub fn run_keygen(
    mpk: &IbbeMpk,
    msk: &IbbeMsk,
    id: &Scalar,
    user_src: &mut dyn ScalarSource,
    pkg_src: &mut dyn ScalarSource,
) -> Result<IbbeUserKey> {
    let (mut state, msg) = keygen_user_round1(mpk, user_src);
    let challenge = keygen_challenge(mpk, pkg_src);
    let response = state.respond(&challenge)?;
    let blinded = keygen_pkg_round2(msk, mpk, id, &msg, &challenge, &response, pkg_src)?;
    keygen_user_finalize(mpk, id, state, &blinded, user_src)
}

/// Direct issuance with a chosen family number (PKG capability).
pub fn keygen_direct(
    msk: &IbbeMsk,
    mpk: &IbbeMpk,
    id: &Scalar,
    family: &Scalar,
    src: &mut dyn ScalarSource,
) -> IbbeUserKey {
    let g = mpk.ctx.generator();
    let r = src.next_nonzero(&mpk.ctx);
    let k1 = mpk
        .g2
        .exp(family)
        .mul(&mpk.g3)
        .exp(&msk.alpha)
        .mul(&mpk.z.exp(&r));
    let n = mpk.max_receivers();
    let t_vec = (0..n).map(|i| mpk.delegation_base(i, id).exp(&r)).collect();
    IbbeUserKey {
        k1,
        k2: g.exp(&r),
        t_vec,
        t_id: *family,
        identity: *id,
    }
}

/// Both validity relations: the `K1` equation and all `N` per-index
/// delegation equations (keys are long-lived, so every index is checked
/// even though decryption for `|S| = n` uses only the first `n-1`).
pub fn key_validity(mpk: &IbbeMpk, key: &IbbeUserKey) -> Result<()> {
    let g = mpk.ctx.generator();
    let lhs = mpk.ctx.pair(&key.k1, &g);
    let rhs = mpk
        .e_g1_g2
        .exp(&key.t_id)
        .mul(&mpk.e_g1_g3)
        .mul(&mpk.ctx.pair(&mpk.z, &key.k2));
    if lhs != rhs {
        return Err(Error::KeySanityFailed);
    }
    for (i, t_i) in key.t_vec.iter().enumerate() {
        let lhs = mpk.ctx.pair(&g, t_i);
        let rhs = mpk
            .ctx
            .pair(&key.k2, &mpk.delegation_base(i, &key.identity));
        if lhs != rhs {
            return Err(Error::DelegationCheckFailed { index: i });
        }
    }
    Ok(())
}

pub fn key_sanity_check(mpk: &IbbeMpk, key: &IbbeUserKey) -> bool {
    key_validity(mpk, key).is_ok()
}

/// White-box trace: validity check, then the family number.
pub fn trace_whitebox(mpk: &IbbeMpk, key: &IbbeUserKey) -> Option<Scalar> {
    key_sanity_check(mpk, key).then_some(key.t_id)
}

/// Accountable encryption:
/// `(m * e(g1,g3)^s, g^s, (z * prod h^rho)^s, e(g1,g2)^s)`.
pub fn aibbe_encrypt(
    mpk: &IbbeMpk,
    set: &ReceiverSet,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<IbbeCiphertext> {
    if set.len() > mpk.max_receivers() {
        return Err(Error::ReceiverSetTooLarge {
            max: mpk.max_receivers(),
            got: set.len(),
        });
    }
    let rho = poly_expand(&mpk.ctx, set);
    let s = src.next_nonzero(&mpk.ctx);
    Ok(IbbeCiphertext {
        c0: m.mul(&mpk.e_g1_g3.exp(&s)),
        c1: mpk.ctx.generator().exp(&s),
        c2: mpk.masked_base(&rho).exp(&s),
        c3: mpk.e_g1_g2.exp(&s),
    })
}

/// Specializes a key to a receiver set: `(K1 * prod T_i^{y_i}, K2, t_id)`.
pub fn aibbe_derive(mpk: &IbbeMpk, key: &IbbeUserKey, set: &ReceiverSet) -> Result<DerivedKey> {
    let y = punctured_expand(&mpk.ctx, set, &key.identity)?;
    let mut big_d = key.k1;
    for (t_i, y_i) in key.t_vec.iter().zip(&y) {
        big_d = big_d.mul(&t_i.exp(y_i));
    }
    Ok(DerivedKey {
        big_d,
        d: key.k2,
        t_id: key.t_id,
    })
}

/// Accountable decryption:
/// `m = C0 * e(C1, D)^{-1} * e(C2, d) * C3^{t_id}`.
pub fn aibbe_decrypt(
    mpk: &IbbeMpk,
    key: &IbbeUserKey,
    set: &ReceiverSet,
    ct: &IbbeCiphertext,
) -> Result<TargetElement> {
    let derived = aibbe_derive(mpk, key, set)?;
    Ok(decrypt_with_derived(mpk, &derived, ct))
}

fn decrypt_with_derived(mpk: &IbbeMpk, derived: &DerivedKey, ct: &IbbeCiphertext) -> TargetElement {
    let quotient = mpk
        .ctx
        .pair_product(&[(ct.c2, derived.d), (ct.c1, derived.big_d.inverse())]);
    ct.c0.mul(&quotient).mul(&ct.c3.exp(&derived.t_id))
}

/// One tracing ciphertext for the set `S`: `C1` and `C2` honest for a fresh
/// `s`, `C3` uniformly random in the target group, and
/// `C0 = m * e(C1, D) * e(C2, d)^{-1} * C3^{-t}` assembled from the traced
/// key's derived components.
pub fn make_tracing_ciphertext(
    mpk: &IbbeMpk,
    key: &IbbeUserKey,
    set: &ReceiverSet,
    m: &TargetElement,
    src: &mut dyn ScalarSource,
) -> Result<IbbeCiphertext> {
    key_validity(mpk, key)?;
    if set.len() > mpk.max_receivers() {
        return Err(Error::ReceiverSetTooLarge {
            max: mpk.max_receivers(),
            got: set.len(),
        });
    }
    let derived = aibbe_derive(mpk, key, set)?;
    let rho = poly_expand(&mpk.ctx, set);
    let s = src.next_nonzero(&mpk.ctx);
    let c1 = mpk.ctx.generator().exp(&s);
    let c2 = mpk.masked_base(&rho).exp(&s);
    let c3 = mpk.ctx.random_target(src);
    let c0 = m
        .mul(&mpk.ctx.pair(&c1, &derived.big_d))
        .div(&mpk.ctx.pair(&c2, &derived.d))
        .mul(&c3.exp(&derived.t_id).inverse());
    Ok(IbbeCiphertext { c0, c1, c2, c3 })
}

/// The weak black-box trace loop over a chosen receiver set (the key's
/// identity must be a member; tracing defaults to the singleton set at the
/// CLI). Semantics as in the core scheme.
pub fn trace_blackbox(
    mpk: &IbbeMpk,
    key: &IbbeUserKey,
    set: &ReceiverSet,
    params: &TraceParams,
    decoder: &dyn Decoder,
    src: &mut dyn ScalarSource,
) -> Result<TraceOutcome> {
    if decoder.scheme() != SchemeId::Ibbe {
        return Err(Error::SchemeMismatch);
    }
    key_validity(mpk, key)?;
    if !set.contains(&key.identity) {
        return Err(Error::IdentityNotInSet);
    }
    let iterations = params.iterations();
    let context_bytes = codec::encode_receiver_set(set);
    let mut ctr = 0u64;
    for _ in 0..iterations {
        let m = mpk.ctx.random_target(src);
        let ct = make_tracing_ciphertext(mpk, key, set, &m, src)?;
        let ct_bytes = codec::encode_ibbe_ciphertext(mpk, &ct, set, true);
        let query = DecoderQuery {
            scheme: SchemeId::Ibbe,
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
