//! Versioned binary serialization for every artifact, plus base64 armor.
//!
//! Every file starts with the magic `AIBE1`, a format version byte, a
//! scheme tag, a backend tag (the mock tag is followed by the 8-byte group
//! order) and a payload-kind byte; the payload is a fixed-order sequence of
//! tagged elements and integers. Unknown versions and tags are explicit
//! errors, never silent fallbacks, and element payloads are validated on
//! decode (canonical form, subgroup membership, synchronized components).
//!
//! Master public keys do not store their cached pairings; they are
//! recomputed on decode so the caches can never disagree with the elements.

use sha2::{Digest, Sha256};

use crate::basic;
use crate::cca;
use crate::error::{CodecError, Error, Result};
use crate::gentry;
use crate::groups::{BackendKind, BilinearContext, Scalar, SourceElement, TargetElement};
use crate::ibbe;
use crate::sigma::{CeremonyRequest, PokTranscript, RepresentationWitness};

pub const MAGIC: &[u8; 5] = b"AIBE1";
pub const VERSION: u8 = 0x01;

const BACKEND_MOCK: u8 = 0x01;
const BACKEND_CURVE: u8 = 0x02;

/// Scheme tags carried in artifact headers and decoder queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeId {
    Core = 0x01,
    Cca = 0x02,
    Gentry = 0x03,
    Ibbe = 0x04,
}

impl SchemeId {
    pub fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0x01 => SchemeId::Core,
            0x02 => SchemeId::Cca,
            0x03 => SchemeId::Gentry,
            0x04 => SchemeId::Ibbe,
            other => return Err(CodecError::UnknownScheme(other).into()),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Core => "core",
            SchemeId::Cca => "cca",
            SchemeId::Gentry => "gentry",
            SchemeId::Ibbe => "ibbe",
        }
    }
}

/// Payload kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtifactKind {
    Mpk = 0x01,
    Msk = 0x02,
    UserKey = 0x03,
    Ciphertext = 0x04,
    Transcript = 0x05,
    Report = 0x06,
    CeremonyState = 0x07,
}

impl ArtifactKind {
    pub fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0x01 => ArtifactKind::Mpk,
            0x02 => ArtifactKind::Msk,
            0x03 => ArtifactKind::UserKey,
            0x04 => ArtifactKind::Ciphertext,
            0x05 => ArtifactKind::Transcript,
            0x06 => ArtifactKind::Report,
            0x07 => ArtifactKind::CeremonyState,
            other => return Err(CodecError::UnknownKind(other).into()),
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ArtifactKind::Mpk => "master public key",
            ArtifactKind::Msk => "master secret key",
            ArtifactKind::UserKey => "user key",
            ArtifactKind::Ciphertext => "ciphertext",
            ArtifactKind::Transcript => "ceremony transcript",
            ArtifactKind::Report => "experiment report",
            ArtifactKind::CeremonyState => "ceremony state",
        }
    }
}

/// Transcript sub-kinds (first payload byte under `ArtifactKind::Transcript`).
const TRANSCRIPT_REQUEST: u8 = 0x01;
const TRANSCRIPT_REPLY: u8 = 0x02;

/// Variant byte distinguishing the accountable and plain broadcast schemes.
const IBBE_ACCOUNTABLE: u8 = 0x01;
const IBBE_PLAIN: u8 = 0x02;

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.buf.len() {
            return Err(CodecError::Truncated.into());
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16_be(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32_be(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64_be(&mut self) -> Result<u64> {
        Ok(u64::from_be_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn source(&mut self, ctx: &BilinearContext) -> Result<SourceElement> {
        SourceElement::from_bytes(ctx, self.take(ctx.source_encoded_len())?)
    }

    fn target(&mut self, ctx: &BilinearContext) -> Result<TargetElement> {
        TargetElement::from_bytes(ctx, self.take(ctx.target_encoded_len())?)
    }

    fn scalar(&mut self, ctx: &BilinearContext) -> Result<Scalar> {
        Scalar::from_bytes(ctx, self.take(ctx.scalar_encoded_len())?)
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(CodecError::TrailingBytes.into());
        }
        Ok(())
    }
}

fn write_header(out: &mut Vec<u8>, ctx: &BilinearContext, scheme: SchemeId, kind: ArtifactKind) {
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(scheme as u8);
    match ctx.backend() {
        BackendKind::Mock => {
            out.push(BACKEND_MOCK);
            out.extend_from_slice(&ctx.mock_modulus().unwrap().to_be_bytes());
        }
        BackendKind::Curve => out.push(BACKEND_CURVE),
    }
    out.push(kind as u8);
}

/// Parsed header of an artifact file.
pub struct ArtifactHeader {
    pub ctx: BilinearContext,
    pub scheme: SchemeId,
    pub kind: ArtifactKind,
}

fn read_header<'a>(bytes: &'a [u8]) -> Result<(ArtifactHeader, Reader<'a>)> {
    let mut r = Reader::new(bytes);
    if r.take(5)? != MAGIC {
        return Err(CodecError::BadMagic.into());
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(CodecError::UnknownVersion(version).into());
    }
    let scheme = SchemeId::from_byte(r.u8()?)?;
    let ctx = match r.u8()? {
        BACKEND_MOCK => BilinearContext::mock(r.u64_be()?)?,
        BACKEND_CURVE => BilinearContext::curve(128)?,
        other => return Err(CodecError::UnknownBackend(other).into()),
    };
    let kind = ArtifactKind::from_byte(r.u8()?)?;
    Ok((ArtifactHeader { ctx, scheme, kind }, r))
}

/// Reads just the header, for inspection tools.
pub fn peek_header(bytes: &[u8]) -> Result<ArtifactHeader> {
    read_header(bytes).map(|(h, _)| h)
}

fn expect(header: &ArtifactHeader, scheme: SchemeId, kind: ArtifactKind) -> Result<()> {
    if header.scheme != scheme {
        return Err(CodecError::SchemeMismatch {
            expected: scheme as u8,
            found: header.scheme as u8,
        }
        .into());
    }
    if header.kind != kind {
        return Err(CodecError::KindMismatch {
            expected: kind as u8,
            found: header.kind as u8,
        }
        .into());
    }
    Ok(())
}

/// Refuses to combine artifacts from different backends or group orders.
pub fn ensure_same_backend(a: &BilinearContext, b: &BilinearContext) -> Result<()> {
    if !a.compatible(b) {
        return Err(CodecError::BackendMismatch.into());
    }
    Ok(())
}

/// Base64 armor for single-line transport of any artifact.
pub fn armor(bytes: &[u8]) -> String {
    use base64::Engine;
    base64::engine::general_purpose::STANDARD.encode(bytes)
}

pub fn dearmor(text: &str) -> Result<Vec<u8>> {
    use base64::Engine;
    base64::engine::general_purpose::STANDARD
        .decode(text.trim())
        .map_err(|_| CodecError::BadArmor.into())
}

// ---------------------------------------------------------------------------
// Shared building blocks
// ---------------------------------------------------------------------------

/// Raw (headerless) identity encoding, also used as decoder context bytes.
pub fn encode_identity(id: &basic::Identity) -> Vec<u8> {
    let mut out = Vec::new();
    write_identity(&mut out, id);
    out
}

fn write_identity(out: &mut Vec<u8>, id: &basic::Identity) {
    match id {
        basic::Identity::Scalar(s) => {
            out.push(0x01);
            out.extend_from_slice(&s.to_bytes());
        }
        basic::Identity::Bits(bits) => {
            out.push(0x02);
            out.extend_from_slice(&(bits.len() as u16).to_be_bytes());
            let mut packed = vec![0u8; bits.len().div_ceil(8)];
            for (i, bit) in bits.iter().enumerate() {
                if *bit {
                    packed[i / 8] |= 1 << (i % 8);
                }
            }
            out.extend_from_slice(&packed);
        }
    }
}

fn read_identity(r: &mut Reader<'_>, ctx: &BilinearContext) -> Result<basic::Identity> {
    match r.u8()? {
        0x01 => Ok(basic::Identity::Scalar(r.scalar(ctx)?)),
        0x02 => {
            let n = r.u16_be()? as usize;
            let packed = r.take(n.div_ceil(8))?;
            let bits = (0..n).map(|i| packed[i / 8] >> (i % 8) & 1 == 1).collect();
            Ok(basic::Identity::Bits(bits))
        }
        other => Err(CodecError::UnknownTagged(other).into()),
    }
}

pub fn decode_identity(ctx: &BilinearContext, bytes: &[u8]) -> Result<basic::Identity> {
    let mut r = Reader::new(bytes);
    let id = read_identity(&mut r, ctx)?;
    r.finish()?;
    Ok(id)
}

/// Raw (headerless) receiver-set encoding: count, then sorted identities.
pub fn encode_receiver_set(set: &ibbe::ReceiverSet) -> Vec<u8> {
    let mut out = Vec::new();
    write_receiver_set(&mut out, set);
    out
}

fn write_receiver_set(out: &mut Vec<u8>, set: &ibbe::ReceiverSet) {
    out.extend_from_slice(&(set.len() as u16).to_be_bytes());
    for id in set.ids() {
        out.extend_from_slice(&id.to_bytes());
    }
}

fn read_receiver_set(r: &mut Reader<'_>, ctx: &BilinearContext) -> Result<ibbe::ReceiverSet> {
    let n = r.u16_be()? as usize;
    let ids = (0..n).map(|_| r.scalar(ctx)).collect::<Result<Vec<_>>>()?;
    ibbe::ReceiverSet::new(ids)
}

pub fn decode_receiver_set(ctx: &BilinearContext, bytes: &[u8]) -> Result<ibbe::ReceiverSet> {
    let mut r = Reader::new(bytes);
    let set = read_receiver_set(&mut r, ctx)?;
    r.finish()?;
    Ok(set)
}

/// Digest binding a ciphertext to its receiver set.
pub fn receiver_set_digest(set: &ibbe::ReceiverSet) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"aibe/receiver-set/v1");
    h.update(encode_receiver_set(set));
    h.finalize().into()
}

fn write_transcript(out: &mut Vec<u8>, t: &PokTranscript) {
    out.extend_from_slice(&t.announcement.to_bytes());
    out.extend_from_slice(&t.challenge.to_bytes());
    out.extend_from_slice(&t.z1.to_bytes());
    out.extend_from_slice(&t.z2.to_bytes());
}

fn read_transcript(r: &mut Reader<'_>, ctx: &BilinearContext) -> Result<PokTranscript> {
    Ok(PokTranscript {
        announcement: r.source(ctx)?,
        challenge: r.scalar(ctx)?,
        z1: r.scalar(ctx)?,
        z2: r.scalar(ctx)?,
    })
}

// ---------------------------------------------------------------------------
// Ceremony messages (shared shape across schemes)
// ---------------------------------------------------------------------------

/// Request file: `R || announcement || challenge || z1 || z2`.
pub fn encode_request(
    ctx: &BilinearContext,
    scheme: SchemeId,
    request: &CeremonyRequest,
) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, scheme, ArtifactKind::Transcript);
    out.push(TRANSCRIPT_REQUEST);
    out.extend_from_slice(&request.commitment.to_bytes());
    write_transcript(&mut out, &request.transcript);
    out
}

pub fn decode_request(
    scheme: SchemeId,
    bytes: &[u8],
) -> Result<(BilinearContext, CeremonyRequest)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, scheme, ArtifactKind::Transcript)?;
    if r.u8()? != TRANSCRIPT_REQUEST {
        return Err(CodecError::KindMismatch {
            expected: TRANSCRIPT_REQUEST,
            found: TRANSCRIPT_REPLY,
        }
        .into());
    }
    let commitment = r.source(&header.ctx)?;
    let transcript = read_transcript(&mut r, &header.ctx)?;
    r.finish()?;
    Ok((
        header.ctx,
        CeremonyRequest {
            commitment,
            transcript,
        },
    ))
}

/// Private ceremony state file: the witness and the sent commitment.
pub fn encode_ceremony_state(
    ctx: &BilinearContext,
    scheme: SchemeId,
    witness: &RepresentationWitness,
    commitment: &SourceElement,
) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, scheme, ArtifactKind::CeremonyState);
    out.extend_from_slice(&witness.t0().to_bytes());
    out.extend_from_slice(&witness.theta().to_bytes());
    out.extend_from_slice(&commitment.to_bytes());
    out
}

pub fn decode_ceremony_state(
    scheme: SchemeId,
    bytes: &[u8],
) -> Result<(BilinearContext, RepresentationWitness, SourceElement)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, scheme, ArtifactKind::CeremonyState)?;
    let t0 = r.scalar(&header.ctx)?;
    let theta = r.scalar(&header.ctx)?;
    let commitment = r.source(&header.ctx)?;
    r.finish()?;
    Ok((
        header.ctx,
        RepresentationWitness::new(t0, theta)?,
        commitment,
    ))
}

// ---------------------------------------------------------------------------
// Core scheme artifacts
// ---------------------------------------------------------------------------

pub fn encode_core_mpk(mpk: &basic::MasterPublicKey) -> Vec<u8> {
    let ctx = mpk.context();
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Core, ArtifactKind::Mpk);
    match &mpk.hash_mode {
        basic::IdentityHashMode::BonehBoyen => out.push(0x01),
        basic::IdentityHashMode::Waters { u_prime, u } => {
            out.push(0x02);
            out.extend_from_slice(&(u.len() as u16).to_be_bytes());
            out.extend_from_slice(&u_prime.to_bytes());
            for u_i in u {
                out.extend_from_slice(&u_i.to_bytes());
            }
        }
    }
    out.extend_from_slice(&mpk.x.to_bytes());
    out.extend_from_slice(&mpk.y.to_bytes());
    out.extend_from_slice(&mpk.z.to_bytes());
    out.extend_from_slice(&mpk.h.to_bytes());
    out
}

pub fn decode_core_mpk(bytes: &[u8]) -> Result<basic::MasterPublicKey> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Core, ArtifactKind::Mpk)?;
    let ctx = header.ctx;
    let hash_mode = match r.u8()? {
        0x01 => basic::IdentityHashMode::BonehBoyen,
        0x02 => {
            let n = r.u16_be()? as usize;
            let u_prime = r.source(&ctx)?;
            let u = (0..n).map(|_| r.source(&ctx)).collect::<Result<Vec<_>>>()?;
            basic::IdentityHashMode::Waters { u_prime, u }
        }
        other => return Err(CodecError::UnknownTagged(other).into()),
    };
    let x = r.source(&ctx)?;
    let y = r.source(&ctx)?;
    let z = r.source(&ctx)?;
    let h = r.source(&ctx)?;
    r.finish()?;
    let g = ctx.generator();
    let e_g_h = ctx.pair(&g, &h);
    let e_g_y = ctx.pair(&g, &y);
    Ok(basic::MasterPublicKey {
        ctx,
        x,
        y,
        z,
        h,
        hash_mode,
        e_g_h,
        e_g_y,
    })
}

pub fn encode_core_msk(ctx: &BilinearContext, msk: &basic::MasterSecretKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Core, ArtifactKind::Msk);
    out.extend_from_slice(&msk.x.to_bytes());
    out
}

pub fn decode_core_msk(bytes: &[u8]) -> Result<(BilinearContext, basic::MasterSecretKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Core, ArtifactKind::Msk)?;
    let x = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, basic::MasterSecretKey { x }))
}

pub fn encode_core_user_key(ctx: &BilinearContext, key: &basic::UserKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Core, ArtifactKind::UserKey);
    write_identity(&mut out, &key.identity);
    out.extend_from_slice(&key.d1.to_bytes());
    out.extend_from_slice(&key.d2.to_bytes());
    out.extend_from_slice(&key.d3.to_bytes());
    out
}

pub fn decode_core_user_key(bytes: &[u8]) -> Result<(BilinearContext, basic::UserKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Core, ArtifactKind::UserKey)?;
    let identity = read_identity(&mut r, &header.ctx)?;
    let d1 = r.source(&header.ctx)?;
    let d2 = r.source(&header.ctx)?;
    let d3 = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((
        header.ctx,
        basic::UserKey {
            d1,
            d2,
            d3,
            identity,
        },
    ))
}

pub fn encode_core_blinded(ctx: &BilinearContext, blinded: &basic::BlindedKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Core, ArtifactKind::Transcript);
    out.push(TRANSCRIPT_REPLY);
    out.extend_from_slice(&blinded.d1.to_bytes());
    out.extend_from_slice(&blinded.d2.to_bytes());
    out.extend_from_slice(&blinded.d3.to_bytes());
    out
}

pub fn decode_core_blinded(bytes: &[u8]) -> Result<(BilinearContext, basic::BlindedKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Core, ArtifactKind::Transcript)?;
    if r.u8()? != TRANSCRIPT_REPLY {
        return Err(CodecError::KindMismatch {
            expected: TRANSCRIPT_REPLY,
            found: TRANSCRIPT_REQUEST,
        }
        .into());
    }
    let d1 = r.source(&header.ctx)?;
    let d2 = r.source(&header.ctx)?;
    let d3 = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, basic::BlindedKey { d1, d2, d3 }))
}

pub fn encode_core_ciphertext(mpk: &basic::MasterPublicKey, ct: &basic::Ciphertext) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(
        &mut out,
        mpk.context(),
        SchemeId::Core,
        ArtifactKind::Ciphertext,
    );
    out.extend_from_slice(&ct.c1.to_bytes());
    out.extend_from_slice(&ct.c2.to_bytes());
    out.extend_from_slice(&ct.c3.to_bytes());
    out.extend_from_slice(&ct.c4.to_bytes());
    out
}

pub fn decode_core_ciphertext(bytes: &[u8]) -> Result<(BilinearContext, basic::Ciphertext)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Core, ArtifactKind::Ciphertext)?;
    let c1 = r.source(&header.ctx)?;
    let c2 = r.source(&header.ctx)?;
    let c3 = r.target(&header.ctx)?;
    let c4 = r.target(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, basic::Ciphertext { c1, c2, c3, c4 }))
}

// ---------------------------------------------------------------------------
// CCA variant artifacts
// ---------------------------------------------------------------------------

pub fn encode_cca_mpk(mpk: &cca::CcaMasterPublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, mpk.context(), SchemeId::Cca, ArtifactKind::Mpk);
    out.extend_from_slice(&mpk.suite.to_bytes());
    out.extend_from_slice(&mpk.x.to_bytes());
    out.extend_from_slice(&mpk.h.to_bytes());
    out.extend_from_slice(&mpk.y_a.to_bytes());
    out.extend_from_slice(&mpk.y_b.to_bytes());
    out.extend_from_slice(&mpk.z.to_bytes());
    out
}

pub fn decode_cca_mpk(bytes: &[u8]) -> Result<cca::CcaMasterPublicKey> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Cca, ArtifactKind::Mpk)?;
    let ctx = header.ctx;
    let suite = cca::CipherSuite::from_bytes(r.take(3)?.try_into().unwrap())?;
    let x = r.source(&ctx)?;
    let h = r.source(&ctx)?;
    let y_a = r.source(&ctx)?;
    let y_b = r.source(&ctx)?;
    let z = r.source(&ctx)?;
    r.finish()?;
    let g = ctx.generator();
    let e_g_h = ctx.pair(&g, &h);
    let e_g_ya = ctx.pair(&g, &y_a);
    let e_g_yb = ctx.pair(&g, &y_b);
    Ok(cca::CcaMasterPublicKey {
        ctx,
        x,
        h,
        y_a,
        y_b,
        z,
        suite,
        e_g_h,
        e_g_ya,
        e_g_yb,
    })
}

pub fn encode_cca_msk(ctx: &BilinearContext, msk: &cca::CcaMasterSecretKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Cca, ArtifactKind::Msk);
    out.extend_from_slice(&msk.x.to_bytes());
    out
}

pub fn decode_cca_msk(bytes: &[u8]) -> Result<(BilinearContext, cca::CcaMasterSecretKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Cca, ArtifactKind::Msk)?;
    let x = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, cca::CcaMasterSecretKey { x }))
}

fn write_key_half(out: &mut Vec<u8>, half: &cca::KeyHalf) {
    out.extend_from_slice(&half.d1.to_bytes());
    out.extend_from_slice(&half.d2.to_bytes());
    out.extend_from_slice(&half.d3.to_bytes());
}

fn read_key_half(r: &mut Reader<'_>, ctx: &BilinearContext) -> Result<cca::KeyHalf> {
    Ok(cca::KeyHalf {
        d1: r.source(ctx)?,
        d2: r.source(ctx)?,
        d3: r.scalar(ctx)?,
    })
}

pub fn encode_cca_user_key(ctx: &BilinearContext, key: &cca::CcaUserKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Cca, ArtifactKind::UserKey);
    out.extend_from_slice(&key.identity.to_bytes());
    write_key_half(&mut out, &key.key_a);
    write_key_half(&mut out, &key.key_b);
    out
}

pub fn decode_cca_user_key(bytes: &[u8]) -> Result<(BilinearContext, cca::CcaUserKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Cca, ArtifactKind::UserKey)?;
    let identity = r.scalar(&header.ctx)?;
    let key_a = read_key_half(&mut r, &header.ctx)?;
    let key_b = read_key_half(&mut r, &header.ctx)?;
    r.finish()?;
    Ok((
        header.ctx,
        cca::CcaUserKey {
            key_a,
            key_b,
            identity,
        },
    ))
}

pub fn encode_cca_blinded(ctx: &BilinearContext, blinded: &cca::CcaBlindedKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Cca, ArtifactKind::Transcript);
    out.push(TRANSCRIPT_REPLY);
    write_key_half(&mut out, &blinded.key_a);
    write_key_half(&mut out, &blinded.key_b);
    out
}

pub fn decode_cca_blinded(bytes: &[u8]) -> Result<(BilinearContext, cca::CcaBlindedKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Cca, ArtifactKind::Transcript)?;
    if r.u8()? != TRANSCRIPT_REPLY {
        return Err(CodecError::KindMismatch {
            expected: TRANSCRIPT_REPLY,
            found: TRANSCRIPT_REQUEST,
        }
        .into());
    }
    let key_a = read_key_half(&mut r, &header.ctx)?;
    let key_b = read_key_half(&mut r, &header.ctx)?;
    r.finish()?;
    Ok((header.ctx, cca::CcaBlindedKey { key_a, key_b }))
}

pub fn encode_cca_ciphertext(mpk: &cca::CcaMasterPublicKey, ct: &cca::CcaCiphertext) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(
        &mut out,
        mpk.context(),
        SchemeId::Cca,
        ArtifactKind::Ciphertext,
    );
    out.extend_from_slice(&ct.c1.to_bytes());
    out.extend_from_slice(&ct.c2.to_bytes());
    out.extend_from_slice(&ct.c3.to_bytes());
    out.extend_from_slice(&(ct.c4.len() as u32).to_be_bytes());
    out.extend_from_slice(&ct.c4);
    out
}

pub fn decode_cca_ciphertext(bytes: &[u8]) -> Result<(BilinearContext, cca::CcaCiphertext)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Cca, ArtifactKind::Ciphertext)?;
    let c1 = r.source(&header.ctx)?;
    let c2 = r.source(&header.ctx)?;
    let c3 = r.target(&header.ctx)?;
    let len = r.u32_be()? as usize;
    let c4 = r.take(len)?.to_vec();
    r.finish()?;
    Ok((header.ctx, cca::CcaCiphertext { c1, c2, c3, c4 }))
}

// ---------------------------------------------------------------------------
// Exponent-inversion scheme artifacts
// ---------------------------------------------------------------------------

pub fn encode_gentry_mpk(mpk: &gentry::GentryMpk) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, mpk.context(), SchemeId::Gentry, ArtifactKind::Mpk);
    out.extend_from_slice(&mpk.g1.to_bytes());
    out.extend_from_slice(&mpk.h.to_bytes());
    out
}

pub fn decode_gentry_mpk(bytes: &[u8]) -> Result<gentry::GentryMpk> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Gentry, ArtifactKind::Mpk)?;
    let ctx = header.ctx;
    let g1 = r.source(&ctx)?;
    let h = r.source(&ctx)?;
    r.finish()?;
    let g = ctx.generator();
    let e_g_g = ctx.gt_generator();
    let e_g_h = ctx.pair(&g, &h);
    Ok(gentry::GentryMpk {
        ctx,
        g1,
        h,
        e_g_g,
        e_g_h,
    })
}

pub fn encode_gentry_msk(ctx: &BilinearContext, msk: &gentry::GentryMsk) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Gentry, ArtifactKind::Msk);
    out.extend_from_slice(&msk.alpha.to_bytes());
    out
}

pub fn decode_gentry_msk(bytes: &[u8]) -> Result<(BilinearContext, gentry::GentryMsk)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Gentry, ArtifactKind::Msk)?;
    let alpha = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, gentry::GentryMsk { alpha }))
}

pub fn encode_gentry_user_key(ctx: &BilinearContext, key: &gentry::GentryKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Gentry, ArtifactKind::UserKey);
    out.extend_from_slice(&key.identity.to_bytes());
    out.extend_from_slice(&key.d.to_bytes());
    out.extend_from_slice(&key.t_id.to_bytes());
    out
}

pub fn decode_gentry_user_key(bytes: &[u8]) -> Result<(BilinearContext, gentry::GentryKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Gentry, ArtifactKind::UserKey)?;
    let identity = r.scalar(&header.ctx)?;
    let d = r.source(&header.ctx)?;
    let t_id = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, gentry::GentryKey { d, t_id, identity }))
}

pub fn encode_gentry_blinded(ctx: &BilinearContext, blinded: &gentry::GentryBlindedKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Gentry, ArtifactKind::Transcript);
    out.push(TRANSCRIPT_REPLY);
    out.extend_from_slice(&blinded.d.to_bytes());
    out.extend_from_slice(&blinded.t.to_bytes());
    out
}

pub fn decode_gentry_blinded(bytes: &[u8]) -> Result<(BilinearContext, gentry::GentryBlindedKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Gentry, ArtifactKind::Transcript)?;
    if r.u8()? != TRANSCRIPT_REPLY {
        return Err(CodecError::KindMismatch {
            expected: TRANSCRIPT_REPLY,
            found: TRANSCRIPT_REQUEST,
        }
        .into());
    }
    let d = r.source(&header.ctx)?;
    let t = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, gentry::GentryBlindedKey { d, t }))
}

pub fn encode_gentry_ciphertext(mpk: &gentry::GentryMpk, ct: &gentry::GentryCiphertext) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(
        &mut out,
        mpk.context(),
        SchemeId::Gentry,
        ArtifactKind::Ciphertext,
    );
    out.extend_from_slice(&ct.c1.to_bytes());
    out.extend_from_slice(&ct.c2.to_bytes());
    out.extend_from_slice(&ct.c3.to_bytes());
    out
}

pub fn decode_gentry_ciphertext(
    bytes: &[u8],
) -> Result<(BilinearContext, gentry::GentryCiphertext)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Gentry, ArtifactKind::Ciphertext)?;
    let c1 = r.source(&header.ctx)?;
    let c2 = r.target(&header.ctx)?;
    let c3 = r.target(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, gentry::GentryCiphertext { c1, c2, c3 }))
}

// ---------------------------------------------------------------------------
// Broadcast scheme artifacts
// ---------------------------------------------------------------------------

pub fn encode_ibbe_mpk(mpk: &ibbe::IbbeMpk) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, mpk.context(), SchemeId::Ibbe, ArtifactKind::Mpk);
    out.push(IBBE_ACCOUNTABLE);
    out.extend_from_slice(&(mpk.max_receivers() as u16).to_be_bytes());
    out.extend_from_slice(&mpk.g1.to_bytes());
    out.extend_from_slice(&mpk.g2.to_bytes());
    out.extend_from_slice(&mpk.g3.to_bytes());
    out.extend_from_slice(&mpk.z.to_bytes());
    for h_i in &mpk.h_vec {
        out.extend_from_slice(&h_i.to_bytes());
    }
    out
}

pub fn decode_ibbe_mpk(bytes: &[u8]) -> Result<ibbe::IbbeMpk> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::Mpk)?;
    if r.u8()? != IBBE_ACCOUNTABLE {
        return Err(CodecError::UnknownTagged(IBBE_PLAIN).into());
    }
    let ctx = header.ctx;
    let n = r.u16_be()? as usize;
    let g1 = r.source(&ctx)?;
    let g2 = r.source(&ctx)?;
    let g3 = r.source(&ctx)?;
    let z = r.source(&ctx)?;
    let h_vec = (0..=n)
        .map(|_| r.source(&ctx))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    let e_g1_g2 = ctx.pair(&g1, &g2);
    let e_g1_g3 = ctx.pair(&g1, &g3);
    Ok(ibbe::IbbeMpk {
        ctx,
        g1,
        g2,
        g3,
        z,
        h_vec,
        e_g1_g2,
        e_g1_g3,
    })
}

pub fn encode_bh_mpk(mpk: &ibbe::BhMpk) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, mpk.context(), SchemeId::Ibbe, ArtifactKind::Mpk);
    out.push(IBBE_PLAIN);
    out.extend_from_slice(&(mpk.max_receivers() as u16).to_be_bytes());
    out.extend_from_slice(&mpk.g1.to_bytes());
    out.extend_from_slice(&mpk.g2.to_bytes());
    out.extend_from_slice(&mpk.z.to_bytes());
    for h_i in &mpk.h_vec {
        out.extend_from_slice(&h_i.to_bytes());
    }
    out
}

pub fn decode_bh_mpk(bytes: &[u8]) -> Result<ibbe::BhMpk> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::Mpk)?;
    if r.u8()? != IBBE_PLAIN {
        return Err(CodecError::UnknownTagged(IBBE_ACCOUNTABLE).into());
    }
    let ctx = header.ctx;
    let n = r.u16_be()? as usize;
    let g1 = r.source(&ctx)?;
    let g2 = r.source(&ctx)?;
    let z = r.source(&ctx)?;
    let h_vec = (0..=n)
        .map(|_| r.source(&ctx))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    let e_g1_g2 = ctx.pair(&g1, &g2);
    Ok(ibbe::BhMpk {
        ctx,
        g1,
        g2,
        z,
        h_vec,
        e_g1_g2,
    })
}

pub fn encode_ibbe_msk(ctx: &BilinearContext, msk: &ibbe::IbbeMsk) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Ibbe, ArtifactKind::Msk);
    out.extend_from_slice(&(msk.a_vec.len() as u16).to_be_bytes());
    for a in &msk.a_vec {
        out.extend_from_slice(&a.to_bytes());
    }
    out.extend_from_slice(&msk.alpha.to_bytes());
    out
}

pub fn decode_ibbe_msk(bytes: &[u8]) -> Result<(BilinearContext, ibbe::IbbeMsk)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::Msk)?;
    let n = r.u16_be()? as usize;
    let a_vec = (0..n)
        .map(|_| r.scalar(&header.ctx))
        .collect::<Result<Vec<_>>>()?;
    let alpha = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, ibbe::IbbeMsk { a_vec, alpha }))
}

pub fn encode_ibbe_user_key(ctx: &BilinearContext, key: &ibbe::IbbeUserKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Ibbe, ArtifactKind::UserKey);
    out.push(IBBE_ACCOUNTABLE);
    out.extend_from_slice(&key.identity.to_bytes());
    out.extend_from_slice(&key.k1.to_bytes());
    out.extend_from_slice(&key.k2.to_bytes());
    out.extend_from_slice(&(key.t_vec.len() as u16).to_be_bytes());
    for t in &key.t_vec {
        out.extend_from_slice(&t.to_bytes());
    }
    out.extend_from_slice(&key.t_id.to_bytes());
    out
}

pub fn decode_ibbe_user_key(bytes: &[u8]) -> Result<(BilinearContext, ibbe::IbbeUserKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::UserKey)?;
    if r.u8()? != IBBE_ACCOUNTABLE {
        return Err(CodecError::UnknownTagged(IBBE_PLAIN).into());
    }
    let identity = r.scalar(&header.ctx)?;
    let k1 = r.source(&header.ctx)?;
    let k2 = r.source(&header.ctx)?;
    let n = r.u16_be()? as usize;
    let t_vec = (0..n)
        .map(|_| r.source(&header.ctx))
        .collect::<Result<Vec<_>>>()?;
    let t_id = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((
        header.ctx,
        ibbe::IbbeUserKey {
            k1,
            k2,
            t_vec,
            t_id,
            identity,
        },
    ))
}

pub fn encode_bh_user_key(ctx: &BilinearContext, key: &ibbe::BhUserKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Ibbe, ArtifactKind::UserKey);
    out.push(IBBE_PLAIN);
    out.extend_from_slice(&key.identity.to_bytes());
    out.extend_from_slice(&key.k1.to_bytes());
    out.extend_from_slice(&key.k2.to_bytes());
    out.extend_from_slice(&(key.t_vec.len() as u16).to_be_bytes());
    for t in &key.t_vec {
        out.extend_from_slice(&t.to_bytes());
    }
    out
}

pub fn decode_bh_user_key(bytes: &[u8]) -> Result<(BilinearContext, ibbe::BhUserKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::UserKey)?;
    if r.u8()? != IBBE_PLAIN {
        return Err(CodecError::UnknownTagged(IBBE_ACCOUNTABLE).into());
    }
    let identity = r.scalar(&header.ctx)?;
    let k1 = r.source(&header.ctx)?;
    let k2 = r.source(&header.ctx)?;
    let n = r.u16_be()? as usize;
    let t_vec = (0..n)
        .map(|_| r.source(&header.ctx))
        .collect::<Result<Vec<_>>>()?;
    r.finish()?;
    Ok((
        header.ctx,
        ibbe::BhUserKey {
            k1,
            k2,
            t_vec,
            identity,
        },
    ))
}

pub fn encode_ibbe_blinded(ctx: &BilinearContext, blinded: &ibbe::IbbeBlindedKey) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, SchemeId::Ibbe, ArtifactKind::Transcript);
    out.push(TRANSCRIPT_REPLY);
    out.extend_from_slice(&blinded.k1.to_bytes());
    out.extend_from_slice(&blinded.k2.to_bytes());
    out.extend_from_slice(&(blinded.t_vec.len() as u16).to_be_bytes());
    for t in &blinded.t_vec {
        out.extend_from_slice(&t.to_bytes());
    }
    out.extend_from_slice(&blinded.t.to_bytes());
    out
}

pub fn decode_ibbe_blinded(bytes: &[u8]) -> Result<(BilinearContext, ibbe::IbbeBlindedKey)> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::Transcript)?;
    if r.u8()? != TRANSCRIPT_REPLY {
        return Err(CodecError::KindMismatch {
            expected: TRANSCRIPT_REPLY,
            found: TRANSCRIPT_REQUEST,
        }
        .into());
    }
    let k1 = r.source(&header.ctx)?;
    let k2 = r.source(&header.ctx)?;
    let n = r.u16_be()? as usize;
    let t_vec = (0..n)
        .map(|_| r.source(&header.ctx))
        .collect::<Result<Vec<_>>>()?;
    let t = r.scalar(&header.ctx)?;
    r.finish()?;
    Ok((header.ctx, ibbe::IbbeBlindedKey { k1, k2, t_vec, t }))
}

/// Broadcast ciphertexts carry the digest of their receiver set and,
/// optionally, the set itself in clear (the tracer includes it so external
/// decoder processes can derive their decryption key).
pub fn encode_ibbe_ciphertext(
    mpk: &ibbe::IbbeMpk,
    ct: &ibbe::IbbeCiphertext,
    set: &ibbe::ReceiverSet,
    include_set: bool,
) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(
        &mut out,
        mpk.context(),
        SchemeId::Ibbe,
        ArtifactKind::Ciphertext,
    );
    out.push(IBBE_ACCOUNTABLE);
    out.extend_from_slice(&receiver_set_digest(set));
    if include_set {
        out.push(0x01);
        write_receiver_set(&mut out, set);
    } else {
        out.push(0x00);
    }
    out.extend_from_slice(&ct.c0.to_bytes());
    out.extend_from_slice(&ct.c1.to_bytes());
    out.extend_from_slice(&ct.c2.to_bytes());
    out.extend_from_slice(&ct.c3.to_bytes());
    out
}

pub struct IbbeCiphertextFile {
    pub ctx: BilinearContext,
    pub ciphertext: ibbe::IbbeCiphertext,
    pub set_digest: [u8; 32],
    pub set: Option<ibbe::ReceiverSet>,
}

pub fn decode_ibbe_ciphertext(bytes: &[u8]) -> Result<IbbeCiphertextFile> {
    let (header, mut r) = read_header(bytes)?;
    expect(&header, SchemeId::Ibbe, ArtifactKind::Ciphertext)?;
    if r.u8()? != IBBE_ACCOUNTABLE {
        return Err(CodecError::UnknownTagged(IBBE_PLAIN).into());
    }
    let set_digest: [u8; 32] = r.take(32)?.try_into().unwrap();
    let set = match r.u8()? {
        0x00 => None,
        0x01 => Some(read_receiver_set(&mut r, &header.ctx)?),
        other => return Err(CodecError::UnknownTagged(other).into()),
    };
    let c0 = r.target(&header.ctx)?;
    let c1 = r.source(&header.ctx)?;
    let c2 = r.source(&header.ctx)?;
    let c3 = r.target(&header.ctx)?;
    r.finish()?;
    Ok(IbbeCiphertextFile {
        ctx: header.ctx,
        ciphertext: ibbe::IbbeCiphertext { c0, c1, c2, c3 },
        set_digest,
        set,
    })
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

pub fn encode_report(ctx: &BilinearContext, scheme: SchemeId, text: &str) -> Vec<u8> {
    let mut out = Vec::new();
    write_header(&mut out, ctx, scheme, ArtifactKind::Report);
    out.extend_from_slice(&(text.len() as u32).to_be_bytes());
    out.extend_from_slice(text.as_bytes());
    out
}

pub fn decode_report(bytes: &[u8]) -> Result<(ArtifactHeader, String)> {
    let (header, mut r) = read_header(bytes)?;
    if header.kind != ArtifactKind::Report {
        return Err(CodecError::KindMismatch {
            expected: ArtifactKind::Report as u8,
            found: header.kind as u8,
        }
        .into());
    }
    let len = r.u32_be()? as usize;
    let text = String::from_utf8(r.take(len)?.to_vec())
        .map_err(|_| Error::from(CodecError::NonCanonicalElement))?;
    r.finish()?;
    Ok((header, text))
}
