//! Hybrid variant of the core scheme with chosen-ciphertext protections.
//!
//! Keys come in two halves sharing the commutative-blinding shape: the A
//! half runs through the blinded ceremony and carries the traceable family
//! number `n_F = d_{A,3}`; the B half is issued directly by the PKG (its
//! scalar is known to the authority) and only re-randomized by the user.
//! The ciphertext binds its group components into an exponent
//! `kappa = H(C1 || C2 || C3)` with a target-collision-resistant hash, then
//! wraps the payload under a key derived from
//! `e(g, Y_A)^s * e(g, Y_B)^{kappa * s}` with authenticated symmetric
//! encryption.
//!
//! Decryption rejects malformed ciphertexts in two tiers:
//!
//! * **component-inconsistent** (`C1`, `C2` on different exponents) — caught
//!   up front by the public pairing check;
//! * **mask-inconsistent** (`C3` off) — the derived key is then wrong, so
//!   the authenticated decryption fails.
//!
//! The two reject reasons stay distinguishable in this API for tests; user
//! interfaces should collapse them into one generic failure to avoid
//! leaking a decryption oracle.
//!
//! Per-ciphertext keys make one-time ciphertext integrity the relevant AEAD
//! property; the registered cipher uses a fixed zero nonce because no key is
//! ever reused.

use chacha20poly1305::aead::{Aead, KeyInit};
use chacha20poly1305::{ChaCha20Poly1305, Nonce};
use hkdf::Hkdf;
use sha2::Sha256;

use crate::error::{Error, Result};
use crate::groups::rand::ScalarSource;
use crate::groups::{BilinearContext, Scalar, SourceElement, TargetElement};
use crate::sigma::{
    self, CeremonyRequest, CommitMessage, CommitmentSession, PedersenBases, PokResponse,
};

const KDF_INFO: &[u8] = b"aibe/cca-kem/v1";
const TCR_DOMAIN: &[u8] = b"aibe/cca-kappa/v1";

/// AEAD key length of the registered suite.
pub const SUITE_KEY_LEN: usize = 32;

/// Registered authenticated ciphers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AeadAlg {
    ChaCha20Poly1305 = 0x01,
}

/// Registered key-derivation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdfAlg {
    HkdfSha256 = 0x01,
}

/// Registered target-collision-resistant hashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcrAlg {
    Sha512Reduce = 0x01,
}

/// The symmetric suite an authority commits to at setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CipherSuite {
    pub aead: AeadAlg,
    pub kdf: KdfAlg,
    pub tcr: TcrAlg,
}

impl Default for CipherSuite {
    fn default() -> Self {
        CipherSuite {
            aead: AeadAlg::ChaCha20Poly1305,
            kdf: KdfAlg::HkdfSha256,
            tcr: TcrAlg::Sha512Reduce,
        }
    }
}

impl CipherSuite {
    pub fn to_bytes(&self) -> [u8; 3] {
        [self.aead as u8, self.kdf as u8, self.tcr as u8]
    }

    pub fn from_bytes(bytes: [u8; 3]) -> Result<Self> {
        let aead = match bytes[0] {
            0x01 => AeadAlg::ChaCha20Poly1305,
            other => return Err(Error::UnknownSuite(other)),
        };
        let kdf = match bytes[1] {
            0x01 => KdfAlg::HkdfSha256,
            other => return Err(Error::UnknownSuite(other)),
        };
        let tcr = match bytes[2] {
            0x01 => TcrAlg::Sha512Reduce,
            other => return Err(Error::UnknownSuite(other)),
        };
        Ok(CipherSuite { aead, kdf, tcr })
    }
}

/// Authenticated encryption under a fresh per-ciphertext key.
pub fn aead_encrypt(suite: &CipherSuite, key: &[u8; SUITE_KEY_LEN], plaintext: &[u8]) -> Vec<u8> {
    match suite.aead {
        AeadAlg::ChaCha20Poly1305 => {
            let cipher = ChaCha20Poly1305::new(key.into());
            cipher
                .encrypt(Nonce::from_slice(&[0u8; 12]), plaintext)
                .expect("encryption is infallible for in-memory buffers")
        }
    }
}

/// Authenticated decryption; any tampering or wrong key yields `AeadReject`.
pub fn aead_decrypt(
    suite: &CipherSuite,
    key: &[u8; SUITE_KEY_LEN],
    ciphertext: &[u8],
) -> Result<Vec<u8>> {
    match suite.aead {
        AeadAlg::ChaCha20Poly1305 => {
            let cipher = ChaCha20Poly1305::new(key.into());
            cipher
                .decrypt(Nonce::from_slice(&[0u8; 12]), ciphertext)
                .map_err(|_| Error::AeadReject)
        }
    }
}

/// Extract-then-expand over the canonical encoding of a target element.
pub fn derive_key(suite: &CipherSuite, shared: &TargetElement) -> [u8; SUITE_KEY_LEN] {
    match suite.kdf {
        KdfAlg::HkdfSha256 => {
            let hk = Hkdf::<Sha256>::new(None, &shared.to_bytes());
            let mut okm = [0u8; SUITE_KEY_LEN];
            hk.expand(KDF_INFO, &mut okm)
                .expect("32 bytes is a valid HKDF output length");
            okm
        }
    }
}

/// `kappa = H(C1 || C2 || C3)`, a nonzero scalar binding the components.
/// The input is the concatenation of the canonical encodings, in ciphertext
/// order.
pub fn tcr_kappa(
    ctx: &BilinearContext,
    suite: &CipherSuite,
    c1: &SourceElement,
    c2: &SourceElement,
    c3: &TargetElement,
) -> Scalar {
    match suite.tcr {
        TcrAlg::Sha512Reduce => {
            let mut data = Vec::new();
            data.extend_from_slice(&c1.to_bytes());
            data.extend_from_slice(&c2.to_bytes());
            data.extend_from_slice(&c3.to_bytes());
            ctx.hash_to_scalar(TCR_DOMAIN, &data)
        }
    }
}

/// Master public key: `(X, h, Y_A, Y_B, Z)`, the suite identifiers and the
/// cached pairings used by encryption.
#[derive(Debug, Clone)]
pub struct CcaMasterPublicKey {
    pub(crate) ctx: BilinearContext,
    pub x: SourceElement,
    pub h: SourceElement,
    pub y_a: SourceElement,
    pub y_b: SourceElement,
    pub z: SourceElement,
    pub suite: CipherSuite,
    /// Cached `e(g, h)`.
    pub e_g_h: TargetElement,
    /// Cached `e(g, Y_A)`.
    pub e_g_ya: TargetElement,
    /// Cached `e(g, Y_B)`.
    pub e_g_yb: TargetElement,
}

impl CcaMasterPublicKey {
    pub fn context(&self) -> &BilinearContext {
        &self.ctx
    }

    /// Ceremony commitment bases `(h, X)`, as in the core scheme.
    pub fn pedersen_bases(&self) -> PedersenBases {
        PedersenBases::new(self.h, self.x).expect("setup never emits identity elements")
    }

    /// `F(ID) = g^ID * Z`.
    pub fn identity_hash(&self, id: &Scalar) -> SourceElement {
        self.ctx.generator().exp(id).mul(&self.z)
    }
}

/// The master secret exponent `x`.
#[derive(Debug, Clone)]
pub struct CcaMasterSecretKey {
    pub x: Scalar,
}

/// One key half `(d1, d2, d3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KeyHalf {
    pub d1: SourceElement,
    pub d2: SourceElement,
    pub d3: Scalar,
}

/// The dual-component user key; the family number is `key_a.d3`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcaUserKey {
    pub key_a: KeyHalf,
    pub key_b: KeyHalf,
    pub identity: Scalar,
}

/// The PKG's ceremony reply: the blinded A half and the directly issued
/// B half.
#[derive(Debug, Clone)]
pub struct CcaBlindedKey {
    pub key_a: KeyHalf,
    pub key_b: KeyHalf,
}

/// `(X^s, F(ID)^s, e(g,h)^s, AEAD ciphertext)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcaCiphertext {
    pub c1: SourceElement,
    pub c2: SourceElement,
    pub c3: TargetElement,
    pub c4: Vec<u8>,
}

/// Tape order: `x`, then the exponents of `h`, `Y_A`, `Y_B`, `Z`.
pub fn setup(
    ctx: &BilinearContext,
    suite: CipherSuite,
    src: &mut dyn ScalarSource,
) -> (CcaMasterPublicKey, CcaMasterSecretKey) {
    let g = ctx.generator();
    let x = src.next_nonzero(ctx);
    let h = ctx.random_source(src);
    let y_a = ctx.random_source(src);
    let y_b = ctx.random_source(src);
    let z = ctx.random_source(src);
    let e_g_h = ctx.pair(&g, &h);
    let e_g_ya = ctx.pair(&g, &y_a);
    let e_g_yb = ctx.pair(&g, &y_b);
    (
        CcaMasterPublicKey {
            ctx: ctx.clone(),
            x: g.exp(&x),
            h,
            y_a,
            y_b,
            z,
            suite,
            e_g_h,
            e_g_ya,
            e_g_yb,
        },
        CcaMasterSecretKey { x },
    )
}

/// The user's ceremony state.
pub struct CcaUserState {
    session: CommitmentSession,
}

impl CcaUserState {
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

/// Round 1: identical to the core ceremony, commit over `(h, X)`.
pub fn keygen_user_round1(
    mpk: &CcaMasterPublicKey,
    src: &mut dyn ScalarSource,
) -> (CcaUserState, CommitMessage) {
    let (session, msg) = CommitmentSession::open(&mpk.ctx, &mpk.pedersen_bases(), src);
    (CcaUserState { session }, msg)
}

/// Round 1 for the file ceremony.
pub fn keygen_user_round1_ni(
    mpk: &CcaMasterPublicKey,
    src: &mut dyn ScalarSource,
) -> (CcaUserState, CeremonyRequest) {
    let (session, request) = CommitmentSession::open_ni(&mpk.ctx, &mpk.pedersen_bases(), src);
    (CcaUserState { session }, request)
}

pub fn keygen_challenge(mpk: &CcaMasterPublicKey, src: &mut dyn ScalarSource) -> Scalar {
    src.next_nonzero(&mpk.ctx)
}

/// Round 2: verify the proof, then issue both halves. The A half folds in
/// the user's commitment (family stays hidden); the B half is direct.
/// Tape order: `r_A'`, `t_{A,1}`, `r_B'`, `t_B`.
pub fn keygen_pkg_round2(
    msk: &CcaMasterSecretKey,
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    msg: &CommitMessage,
    challenge: &Scalar,
    response: &PokResponse,
    src: &mut dyn ScalarSource,
) -> Result<CcaBlindedKey> {
    if !sigma::verify_commit_message(&mpk.pedersen_bases(), msg, challenge, response) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &msg.commitment, src)
}

/// Round 2 for the file ceremony.
pub fn keygen_pkg_respond_ni(
    msk: &CcaMasterSecretKey,
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    request: &CeremonyRequest,
    src: &mut dyn ScalarSource,
) -> Result<CcaBlindedKey> {
    if !sigma::verify_request(&mpk.ctx, &mpk.pedersen_bases(), request) {
        return Err(Error::ProofRejected);
    }
    issue_blinded(msk, mpk, id, &request.commitment, src)
}

fn issue_blinded(
    msk: &CcaMasterSecretKey,
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    commitment: &SourceElement,
    src: &mut dyn ScalarSource,
) -> Result<CcaBlindedKey> {
    let f_id = mpk.identity_hash(id);
    let x_inv = msk.x.inv()?;
    let r_a = src.next_nonzero(&mpk.ctx);
    let t_a1 = src.next_nonzero(&mpk.ctx);
    let r_b = src.next_nonzero(&mpk.ctx);
    let t_b = src.next_nonzero(&mpk.ctx);
    let key_a = KeyHalf {
        d1: mpk
            .y_a
            .mul(commitment)
            .mul(&mpk.h.exp(&t_a1))
            .exp(&x_inv)
            .mul(&f_id.exp(&r_a)),
        d2: mpk.x.exp(&r_a),
        d3: t_a1,
    };
    let key_b = KeyHalf {
        d1: mpk
            .y_b
            .mul(&mpk.h.exp(&t_b))
            .exp(&x_inv)
            .mul(&f_id.exp(&r_b)),
        d2: mpk.x.exp(&r_b),
        d3: t_b,
    };
    Ok(CcaBlindedKey { key_a, key_b })
}

/// Round 3: unblind the A half with `(theta, t0)`, re-randomize both halves
/// and enforce both validity relations. Tape order: `r_A''`, `r_B''`.
pub fn keygen_user_finalize(
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    state: CcaUserState,
    blinded: &CcaBlindedKey,
    src: &mut dyn ScalarSource,
) -> Result<CcaUserKey> {
    let f_id = mpk.identity_hash(id);
    let witness = state.session.witness();
    let g_theta = mpk.ctx.generator().exp(witness.theta());
    let r_a2 = src.next_nonzero(&mpk.ctx);
    let r_b2 = src.next_nonzero(&mpk.ctx);
    let key_a = KeyHalf {
        d1: blinded.key_a.d1.div(&g_theta).mul(&f_id.exp(&r_a2)),
        d2: blinded.key_a.d2.mul(&mpk.x.exp(&r_a2)),
        d3: blinded.key_a.d3.add(witness.t0()),
    };
    let key_b = KeyHalf {
        d1: blinded.key_b.d1.mul(&f_id.exp(&r_b2)),
        d2: blinded.key_b.d2.mul(&mpk.x.exp(&r_b2)),
        d3: blinded.key_b.d3,
    };
    let key = CcaUserKey {
        key_a,
        key_b,
        identity: *id,
    };
    if !key_sanity_check(mpk, id, &key) {
        return Err(Error::KeySanityFailed);
    }
    Ok(key)
}

/// Full interactive ceremony in-process.
pub fn run_keygen(
    mpk: &CcaMasterPublicKey,
    msk: &CcaMasterSecretKey,
    id: &Scalar,
    user_src: &mut dyn ScalarSource,
    pkg_src: &mut dyn ScalarSource,
) -> Result<CcaUserKey> {
    let (mut state, msg) = keygen_user_round1(mpk, user_src);
    let challenge = keygen_challenge(mpk, pkg_src);
    let response = state.respond(&challenge)?;
    let blinded = keygen_pkg_round2(msk, mpk, id, &msg, &challenge, &response, pkg_src)?;
    keygen_user_finalize(mpk, id, state, &blinded, user_src)
}

fn half_satisfies_relation(
    mpk: &CcaMasterPublicKey,
    f_id: &SourceElement,
    y: &TargetElement,
    half: &KeyHalf,
) -> bool {
    let lhs = mpk.ctx.pair(&half.d1, &mpk.x);
    let rhs = y
        .mul(&mpk.e_g_h.exp(&half.d3))
        .mul(&mpk.ctx.pair(f_id, &half.d2));
    lhs == rhs
}

/// Both validity relations, one per key half.
pub fn key_sanity_check(mpk: &CcaMasterPublicKey, id: &Scalar, key: &CcaUserKey) -> bool {
    let f_id = mpk.identity_hash(id);
    half_satisfies_relation(mpk, &f_id, &mpk.e_g_ya, &key.key_a)
        && half_satisfies_relation(mpk, &f_id, &mpk.e_g_yb, &key.key_b)
}

/// White-box trace: both relations checked, family read from the A half.
pub fn trace_whitebox(mpk: &CcaMasterPublicKey, id: &Scalar, key: &CcaUserKey) -> Option<Scalar> {
    key_sanity_check(mpk, id, key).then_some(key.key_a.d3)
}

/// Hybrid encryption of an arbitrary byte payload.
pub fn encrypt(
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    plaintext: &[u8],
    src: &mut dyn ScalarSource,
) -> CcaCiphertext {
    let f_id = mpk.identity_hash(id);
    let s = src.next_nonzero(&mpk.ctx);
    let c1 = mpk.x.exp(&s);
    let c2 = f_id.exp(&s);
    let c3 = mpk.e_g_h.exp(&s);
    let kappa = tcr_kappa(&mpk.ctx, &mpk.suite, &c1, &c2, &c3);
    let shared = mpk.e_g_ya.exp(&s).mul(&mpk.e_g_yb.exp(&kappa.mul(&s)));
    let key = derive_key(&mpk.suite, &shared);
    let c4 = aead_encrypt(&mpk.suite, &key, plaintext);
    CcaCiphertext { c1, c2, c3, c4 }
}

/// Public component-consistency check: `e(C1, F(ID)) = e(X, C2)`.
pub fn ciphertext_publicly_consistent(
    mpk: &CcaMasterPublicKey,
    id: &Scalar,
    ct: &CcaCiphertext,
) -> bool {
    let f_id = mpk.identity_hash(id);
    mpk.ctx.pair(&ct.c1, &f_id) == mpk.ctx.pair(&mpk.x, &ct.c2)
}

/// Hybrid decryption. Component-inconsistent ciphertexts are rejected up
/// front by the public pairing check (`TypeIReject`); the remaining
/// malformed ones fail authenticated decryption (`AeadReject`).
pub fn decrypt(mpk: &CcaMasterPublicKey, key: &CcaUserKey, ct: &CcaCiphertext) -> Result<Vec<u8>> {
    if !ciphertext_publicly_consistent(mpk, &key.identity, ct) {
        return Err(Error::TypeIReject);
    }
    let kappa = tcr_kappa(&mpk.ctx, &mpk.suite, &ct.c1, &ct.c2, &ct.c3);
    let d1 = key.key_a.d1.mul(&key.key_b.d1.exp(&kappa));
    let d2 = key.key_a.d2.mul(&key.key_b.d2.exp(&kappa));
    let d3 = key.key_a.d3.add(&kappa.mul(&key.key_b.d3));
    let quotient_inv = mpk.ctx.pair_product(&[(ct.c2, d2), (ct.c1, d1.inverse())]);
    let shared = quotient_inv.mul(&ct.c3.exp(&d3)).inverse();
    let sym_key = derive_key(&mpk.suite, &shared);
    aead_decrypt(&mpk.suite, &sym_key, &ct.c4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::rand::{FixedTape, SeededSource};

    fn mock101() -> BilinearContext {
        BilinearContext::mock(101).unwrap()
    }

    /// Tape: x=7, h=13, Y_A=19, Y_B=29, Z=23.
    fn worked_system(ctx: &BilinearContext) -> (CcaMasterPublicKey, CcaMasterSecretKey) {
        let mut tape = FixedTape::new(&[7, 13, 19, 29, 23]);
        setup(ctx, CipherSuite::default(), &mut tape)
    }

    fn ceremony_key(
        ctx: &BilinearContext,
        mpk: &CcaMasterPublicKey,
        msk: &CcaMasterSecretKey,
        id: &Scalar,
        seed: u64,
    ) -> CcaUserKey {
        let mut user_src = SeededSource::new(seed);
        let mut pkg_src = SeededSource::new(seed + 100_000);
        let _ = ctx;
        run_keygen(mpk, msk, id, &mut user_src, &mut pkg_src).unwrap()
    }

    #[test]
    fn setup_shape_and_determinism() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        assert_eq!(mpk.x.mock_exponent(), Some(7));
        assert_eq!(msk.x.mock_value(), Some(7));
        assert_ne!(mpk.y_a, mpk.y_b);
        assert_eq!(mpk.e_g_ya.mock_exponent(), Some(19));
        assert_eq!(mpk.e_g_yb.mock_exponent(), Some(29));
    }

    #[test]
    fn unknown_suite_identifier_is_rejected() {
        assert_eq!(
            CipherSuite::from_bytes([0x7f, 0x01, 0x01]).unwrap_err(),
            Error::UnknownSuite(0x7f)
        );
        assert_eq!(
            CipherSuite::from_bytes([0x01, 0x02, 0x01]).unwrap_err(),
            Error::UnknownSuite(0x02)
        );
        let suite = CipherSuite::default();
        assert_eq!(CipherSuite::from_bytes(suite.to_bytes()).unwrap(), suite);
    }

    #[test]
    fn ceremony_yields_dual_valid_key_with_a_side_family() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        // User: t0=4, theta=6, k1=2, k2=3, r_A''=2, r_B''=9.
        // PKG: challenge=5, r_A'=1, t_{A,1}=7, r_B'=3, t_B=8.
        let mut user_tape = FixedTape::new(&[4, 6, 2, 3, 2, 9]);
        let mut pkg_tape = FixedTape::new(&[5, 1, 7, 3, 8]);
        let key = run_keygen(&mpk, &msk, &id, &mut user_tape, &mut pkg_tape).unwrap();
        // A half: identical algebra to the core worked example with Y_A=19,
        // t_A = 4+7 = 11, r_A = 1+2 = 3 -> (g^35, g^21).
        assert_eq!(key.key_a.d1.mock_exponent(), Some(35));
        assert_eq!(key.key_a.d2.mock_exponent(), Some(21));
        assert_eq!(key.key_a.d3.mock_value(), Some(11));
        // B half keeps the PKG's t_B verbatim; family is independent of it.
        assert_eq!(key.key_b.d3.mock_value(), Some(8));
        assert!(key_sanity_check(&mpk, &id, &key));
        assert_eq!(
            trace_whitebox(&mpk, &id, &key).unwrap().mock_value(),
            Some(11)
        );
    }

    #[test]
    fn tampered_b_half_fails_finalize() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let mut user_tape = FixedTape::new(&[4, 6, 2, 3, 2, 9]);
        let mut pkg_tape = FixedTape::new(&[5, 1, 7, 3, 8]);
        let (mut state, msg) = keygen_user_round1(&mpk, &mut user_tape);
        let challenge = keygen_challenge(&mpk, &mut pkg_tape);
        let response = state.respond(&challenge).unwrap();
        let mut blinded =
            keygen_pkg_round2(&msk, &mpk, &id, &msg, &challenge, &response, &mut pkg_tape).unwrap();
        blinded.key_b.d1 = blinded.key_b.d1.mul(&ctx.generator());
        assert_eq!(
            keygen_user_finalize(&mpk, &id, state, &blinded, &mut user_tape).unwrap_err(),
            Error::KeySanityFailed
        );
    }

    #[test]
    fn family_invariant_under_rerandomization() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let run = |r_a2: u64, r_b2: u64| {
            let mut user_tape = FixedTape::new(&[4, 6, 2, 3, r_a2, r_b2]);
            let mut pkg_tape = FixedTape::new(&[5, 1, 7, 3, 8]);
            run_keygen(&mpk, &msk, &id, &mut user_tape, &mut pkg_tape).unwrap()
        };
        let k1 = run(2, 9);
        let k2 = run(44, 61);
        assert_ne!(k1.key_a.d1, k2.key_a.d1);
        assert_ne!(k1.key_b.d1, k2.key_b.d1);
        assert_eq!(
            trace_whitebox(&mpk, &id, &k1),
            trace_whitebox(&mpk, &id, &k2)
        );
    }

    #[test]
    fn kem_exponent_identity_on_mock() {
        // The KDF input equals e(g,g)^{(Y_A + kappa*Y_B) * s} on the mock
        // backend; check encryption's shared secret against that formula.
        let ctx = mock101();
        let (mpk, _msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let s = 9u64;
        let f_id = mpk.identity_hash(&id);
        let c1 = mpk.x.exp(&ctx.scalar_from_u64(s));
        let c2 = f_id.exp(&ctx.scalar_from_u64(s));
        let c3 = mpk.e_g_h.exp(&ctx.scalar_from_u64(s));
        let kappa = tcr_kappa(&ctx, &mpk.suite, &c1, &c2, &c3);
        let k = kappa.mock_value().unwrap();
        let shared = mpk
            .e_g_ya
            .exp(&ctx.scalar_from_u64(s))
            .mul(&mpk.e_g_yb.exp(&kappa.mul(&ctx.scalar_from_u64(s))));
        let expected = (19 * s + 29 * k % 101 * s) % 101;
        assert_eq!(shared.mock_exponent(), Some(expected));
    }

    #[test]
    fn roundtrip_and_kappa_determinism() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let key = ceremony_key(&ctx, &mpk, &msk, &id, 1);
        let mut src = SeededSource::new(60);
        for len in [0usize, 1, 16, 300] {
            let mut plaintext = vec![0u8; len];
            src.fill_bytes(&mut plaintext);
            let ct = encrypt(&mpk, &id, &plaintext, &mut src);
            // kappa recomputed at decryption equals kappa at encryption by
            // determinism of the hash; the roundtrip passing proves it.
            assert_eq!(decrypt(&mpk, &key, &ct).unwrap(), plaintext);
        }
    }

    #[test]
    fn component_inconsistent_ciphertexts_are_rejected_up_front() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let key = ceremony_key(&ctx, &mpk, &msk, &id, 2);
        let mut src = SeededSource::new(61);
        let mut ct = encrypt(&mpk, &id, b"payload", &mut src);
        // Shift C2 to F(ID)^{s-1}: components now live on different
        // exponents and the public check must fire.
        let f_id = mpk.identity_hash(&id);
        ct.c2 = ct.c2.div(&f_id);
        assert!(!ciphertext_publicly_consistent(&mpk, &id, &ct));
        assert_eq!(decrypt(&mpk, &key, &ct).unwrap_err(), Error::TypeIReject);
    }

    #[test]
    fn mask_inconsistent_ciphertexts_fail_authenticated_decryption() {
        let ctx = mock101();
        let (mpk, msk) = worked_system(&ctx);
        let id = ctx.scalar_from_u64(5);
        let key = ceremony_key(&ctx, &mpk, &msk, &id, 3);
        let mut src = SeededSource::new(62);
        for _ in 0..200 {
            let mut ct = encrypt(&mpk, &id, b"payload", &mut src);
            ct.c3 = ct.c3.mul(&ctx.random_target(&mut src));
            let out = decrypt(&mpk, &key, &ct);
            assert_eq!(out.unwrap_err(), Error::AeadReject);
        }
    }

    #[test]
    fn aead_contract() {
        let suite = CipherSuite::default();
        let mut src = SeededSource::new(63);
        let mut key = [0u8; SUITE_KEY_LEN];
        src.fill_bytes(&mut key);
        let ct = aead_encrypt(&suite, &key, b"attack at dawn");
        assert_eq!(
            aead_decrypt(&suite, &key, &ct).unwrap(),
            b"attack at dawn".to_vec()
        );
        // Any single-bit tamper is caught.
        for _ in 0..200 {
            let mut tampered = ct.clone();
            let bit = (src.next_u64() % (tampered.len() as u64 * 8)) as usize;
            tampered[bit / 8] ^= 1 << (bit % 8);
            assert_eq!(
                aead_decrypt(&suite, &key, &tampered).unwrap_err(),
                Error::AeadReject
            );
        }
        // Wrong keys are caught.
        for _ in 0..200 {
            let mut wrong = [0u8; SUITE_KEY_LEN];
            src.fill_bytes(&mut wrong);
            assert_eq!(
                aead_decrypt(&suite, &wrong, &ct).unwrap_err(),
                Error::AeadReject
            );
        }
    }
}
