//! Built-in decoder models.
//!
//! Each model is a stateless function of its query: any per-query
//! randomness is derived by hashing the decoder seed with the query bytes,
//! so replaying a query always returns the same answer and iterations of
//! the trace loop stay independent.
//!
//! * `honest` — wraps a user key and simply decrypts.
//! * `noisy` — answers through an inner decoder with probability `epsilon`
//!   and stays silent otherwise; the usefulness knob for experiments.
//! * `pkg_master` — the dishonest authority's box: it derives the mask from
//!   the master secret and ignores the component a tracing ciphertext
//!   perturbs. It decrypts every valid ciphertext perfectly yet almost
//!   never hits a tracing message.
//! * `pkg_guessing` — additionally guesses a fresh key family per query;
//!   its hit rate against tracing ciphertexts is about `1/p`.

use sha2::{Digest, Sha256};

use crate::basic;
use crate::codec::{self, SchemeId};
use crate::error::Result;
use crate::gentry;
use crate::groups::rand::SeededSource;
use crate::groups::Scalar;
use crate::ibbe;

use super::{Decoder, DecoderQuery};

fn query_digest(seed: u64, label: &[u8], query: &DecoderQuery<'_>) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"aibe/decoder-prf/v1");
    h.update(seed.to_be_bytes());
    h.update(label);
    h.update((query.ciphertext.len() as u64).to_be_bytes());
    h.update(query.ciphertext);
    h.update(query.context);
    h.finalize().into()
}

/// Honest-user decoder for the core scheme.
pub struct CoreHonest {
    mpk: basic::MasterPublicKey,
    key: basic::UserKey,
}

pub fn honest_core(mpk: &basic::MasterPublicKey, key: &basic::UserKey) -> CoreHonest {
    CoreHonest {
        mpk: mpk.clone(),
        key: key.clone(),
    }
}

impl Decoder for CoreHonest {
    fn scheme(&self) -> SchemeId {
        SchemeId::Core
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_core_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        Some(basic::decrypt(&self.mpk, &self.key, &ct).to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Cheating-authority decoder for the core scheme: recovers the mask as
/// `e(C1, Y^{1/x})` and never looks at `C3`.
pub struct CorePkgMaster {
    mpk: basic::MasterPublicKey,
    y_root: crate::groups::SourceElement,
}

pub fn pkg_master_core(
    mpk: &basic::MasterPublicKey,
    msk: &basic::MasterSecretKey,
) -> Result<CorePkgMaster> {
    Ok(CorePkgMaster {
        mpk: mpk.clone(),
        y_root: mpk.y.exp(&msk.x.inv()?),
    })
}

impl Decoder for CorePkgMaster {
    fn scheme(&self) -> SchemeId {
        SchemeId::Core
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_core_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        let mask = self.mpk.context().pair(&ct.c1, &self.y_root);
        Some(ct.c4.div(&mask).to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Cheating-authority decoder that also guesses the key family afresh on
/// every query, then decrypts exactly as a holder of that family would.
pub struct CorePkgGuessing {
    mpk: basic::MasterPublicKey,
    msk: basic::MasterSecretKey,
    identity: basic::Identity,
    seed: u64,
}

pub fn pkg_guessing_core(
    mpk: &basic::MasterPublicKey,
    msk: &basic::MasterSecretKey,
    identity: &basic::Identity,
    seed: u64,
) -> CorePkgGuessing {
    CorePkgGuessing {
        mpk: mpk.clone(),
        msk: msk.clone(),
        identity: identity.clone(),
        seed,
    }
}

impl Decoder for CorePkgGuessing {
    fn scheme(&self) -> SchemeId {
        SchemeId::Core
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_core_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        let digest = query_digest(self.seed, b"family-guess", query);
        let guess = ctx.hash_to_scalar(b"aibe/guess/v1", &digest);
        let mut key_src = SeededSource::from_seed_bytes(digest);
        let key = basic::keygen_direct(&self.msk, &self.mpk, &self.identity, &guess, &mut key_src)
            .ok()?;
        Some(basic::decrypt(&self.mpk, &key, &ct).to_bytes())
    }
}

/// Honest-user decoder for the exponent-inversion scheme.
pub struct GentryHonest {
    mpk: gentry::GentryMpk,
    key: gentry::GentryKey,
}

pub fn honest_gentry(mpk: &gentry::GentryMpk, key: &gentry::GentryKey) -> GentryHonest {
    GentryHonest {
        mpk: mpk.clone(),
        key: key.clone(),
    }
}

impl Decoder for GentryHonest {
    fn scheme(&self) -> SchemeId {
        SchemeId::Gentry
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_gentry_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        Some(gentry::decrypt(&self.mpk, &self.key, &ct).to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Cheating-authority decoder for the exponent-inversion scheme: built for
/// one identity, recovers the mask as `e(C1, h^{1/(alpha - ID)})` and
/// ignores the target-group component.
pub struct GentryPkgMaster {
    mpk: gentry::GentryMpk,
    h_root: crate::groups::SourceElement,
}

pub fn pkg_master_gentry(
    mpk: &gentry::GentryMpk,
    msk: &gentry::GentryMsk,
    id: &Scalar,
) -> Result<GentryPkgMaster> {
    let inv = msk
        .alpha
        .sub(id)
        .inv()
        .map_err(|_| crate::error::Error::SingularIdentity)?;
    Ok(GentryPkgMaster {
        mpk: mpk.clone(),
        h_root: mpk.h.exp(&inv),
    })
}

impl Decoder for GentryPkgMaster {
    fn scheme(&self) -> SchemeId {
        SchemeId::Gentry
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_gentry_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        let mask = self.mpk.context().pair(&ct.c1, &self.h_root);
        Some(ct.c3.div(&mask).to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Family-guessing authority decoder for the exponent-inversion scheme.
pub struct GentryPkgGuessing {
    mpk: gentry::GentryMpk,
    msk: gentry::GentryMsk,
    identity: Scalar,
    seed: u64,
}

pub fn pkg_guessing_gentry(
    mpk: &gentry::GentryMpk,
    msk: &gentry::GentryMsk,
    id: &Scalar,
    seed: u64,
) -> GentryPkgGuessing {
    GentryPkgGuessing {
        mpk: mpk.clone(),
        msk: msk.clone(),
        identity: *id,
        seed,
    }
}

impl Decoder for GentryPkgGuessing {
    fn scheme(&self) -> SchemeId {
        SchemeId::Gentry
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let (ctx, ct) = codec::decode_gentry_ciphertext(query.ciphertext).ok()?;
        if !ctx.compatible(self.mpk.context()) {
            return None;
        }
        let digest = query_digest(self.seed, b"family-guess", query);
        let guess = ctx.hash_to_scalar(b"aibe/guess/v1", &digest);
        let key = gentry::keygen_direct(&self.msk, &self.mpk, &self.identity, &guess).ok()?;
        Some(gentry::decrypt(&self.mpk, &key, &ct).to_bytes())
    }
}

/// Honest-member decoder for the broadcast scheme: derives its decryption
/// key from the receiver set embedded in the ciphertext (or supplied as
/// query context).
pub struct IbbeHonest {
    mpk: ibbe::IbbeMpk,
    key: ibbe::IbbeUserKey,
}

pub fn honest_ibbe(mpk: &ibbe::IbbeMpk, key: &ibbe::IbbeUserKey) -> IbbeHonest {
    IbbeHonest {
        mpk: mpk.clone(),
        key: key.clone(),
    }
}

impl Decoder for IbbeHonest {
    fn scheme(&self) -> SchemeId {
        SchemeId::Ibbe
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let file = codec::decode_ibbe_ciphertext(query.ciphertext).ok()?;
        if !file.ctx.compatible(self.mpk.context()) {
            return None;
        }
        let set = match file.set {
            Some(set) => set,
            None => codec::decode_receiver_set(&file.ctx, query.context).ok()?,
        };
        ibbe::aibbe_decrypt(&self.mpk, &self.key, &set, &file.ciphertext)
            .ok()
            .map(|m| m.to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Cheating-authority decoder for the broadcast scheme: recovers the mask
/// as `e(C1, g3^alpha)` and ignores `C3`.
pub struct IbbePkgMaster {
    mpk: ibbe::IbbeMpk,
    g3_alpha: crate::groups::SourceElement,
}

pub fn pkg_master_ibbe(mpk: &ibbe::IbbeMpk, msk: &ibbe::IbbeMsk) -> IbbePkgMaster {
    IbbePkgMaster {
        mpk: mpk.clone(),
        g3_alpha: mpk.g3.exp(&msk.alpha),
    }
}

impl Decoder for IbbePkgMaster {
    fn scheme(&self) -> SchemeId {
        SchemeId::Ibbe
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let file = codec::decode_ibbe_ciphertext(query.ciphertext).ok()?;
        if !file.ctx.compatible(self.mpk.context()) {
            return None;
        }
        let mask = self.mpk.context().pair(&file.ciphertext.c1, &self.g3_alpha);
        Some(file.ciphertext.c0.div(&mask).to_bytes())
    }

    fn known_usefulness(&self) -> Option<f64> {
        Some(1.0)
    }
}

/// Family-guessing authority decoder for the broadcast scheme.
pub struct IbbePkgGuessing {
    mpk: ibbe::IbbeMpk,
    msk: ibbe::IbbeMsk,
    identity: Scalar,
    seed: u64,
}

pub fn pkg_guessing_ibbe(
    mpk: &ibbe::IbbeMpk,
    msk: &ibbe::IbbeMsk,
    id: &Scalar,
    seed: u64,
) -> IbbePkgGuessing {
    IbbePkgGuessing {
        mpk: mpk.clone(),
        msk: msk.clone(),
        identity: *id,
        seed,
    }
}

impl Decoder for IbbePkgGuessing {
    fn scheme(&self) -> SchemeId {
        SchemeId::Ibbe
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let file = codec::decode_ibbe_ciphertext(query.ciphertext).ok()?;
        if !file.ctx.compatible(self.mpk.context()) {
            return None;
        }
        let set = match file.set {
            Some(set) => set,
            None => codec::decode_receiver_set(&file.ctx, query.context).ok()?,
        };
        let digest = query_digest(self.seed, b"family-guess", query);
        let guess = file.ctx.hash_to_scalar(b"aibe/guess/v1", &digest);
        let mut key_src = SeededSource::from_seed_bytes(digest);
        let key = ibbe::keygen_direct(&self.msk, &self.mpk, &self.identity, &guess, &mut key_src);
        ibbe::aibbe_decrypt(&self.mpk, &key, &set, &file.ciphertext)
            .ok()
            .map(|m| m.to_bytes())
    }
}

/// Wraps an inner decoder, answering with probability `epsilon` and staying
/// silent otherwise. The coin is a deterministic function of the query, so
/// the model remains stateless.
pub struct Noisy<D> {
    inner: D,
    epsilon: f64,
    seed: u64,
}

pub fn noisy<D: Decoder>(inner: D, epsilon: f64, seed: u64) -> Result<Noisy<D>> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(crate::error::Error::EpsilonOutOfRange(epsilon));
    }
    Ok(Noisy {
        inner,
        epsilon,
        seed,
    })
}

impl<D: Decoder> Decoder for Noisy<D> {
    fn scheme(&self) -> SchemeId {
        self.inner.scheme()
    }

    fn decrypt(&self, query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        let digest = query_digest(self.seed, b"noise-coin", query);
        let coin = u64::from_be_bytes(digest[..8].try_into().unwrap());
        if (coin as f64) / (u64::MAX as f64) < self.epsilon {
            self.inner.decrypt(query)
        } else {
            None
        }
    }

    fn known_usefulness(&self) -> Option<f64> {
        self.inner.known_usefulness().map(|u| u * self.epsilon)
    }
}

/// A decoder serving a different scheme — a negative-control stand-in used
/// to test scheme checks.
pub struct SchemeMismatchProbe(pub SchemeId);

impl Decoder for SchemeMismatchProbe {
    fn scheme(&self) -> SchemeId {
        self.0
    }

    fn decrypt(&self, _query: &DecoderQuery<'_>) -> Option<Vec<u8>> {
        None
    }
}
