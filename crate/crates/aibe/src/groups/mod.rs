//! Pluggable symmetric bilinear-group abstraction.
//!
//! The protocols in this crate are written against a symmetric pairing
//! `e: G x G -> G_T` over groups of prime order `p`. Two interchangeable
//! backends realize it:
//!
//! * **curve** — BLS12-381. Modern pairing curves are type-3 (asymmetric), so
//!   each [`SourceElement`] carries a *synchronized pair* of components with
//!   the same discrete logarithm in G1 and G2; `pair` consumes the G1
//!   component of its left argument and the G2 component of its right. This
//!   preserves the symmetric-group algebra at twice the exponentiation cost.
//! * **mock** — a [`SourceElement`] is its own discrete logarithm modulo a
//!   small prime: the group law is addition, exponentiation is
//!   multiplication and the pairing multiplies exponents into `G_T`. This
//!   backend is **insecure by construction** and exists as an exact,
//!   exhaustively checkable oracle for every protocol equation. Use it for
//!   tests, simulations and worked vectors only.
//!
//! All values are immutable and safe to share across threads; every
//! operation is a pure function. Randomness comes exclusively from
//! caller-supplied [`rand::ScalarSource`] values.

pub mod rand;

mod mock;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use ark_bls12_381::{Bls12_381, Fr, G1Projective, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::PrimeGroup;
use ark_ff::{Field, PrimeField, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use rand_core::RngCore;
use sha2::{Digest, Sha512};

use crate::error::{CodecError, Error, Result};
use rand::ScalarSource;

/// Type tag prefixed to every encoded source element.
pub const TAG_SOURCE: u8 = 0x01;
/// Type tag prefixed to every encoded target element.
pub const TAG_TARGET: u8 = 0x02;
/// Type tag prefixed to every encoded scalar.
pub const TAG_SCALAR: u8 = 0x03;

/// Smallest supported mock security parameter.
pub const MIN_MOCK_LAMBDA: u32 = 8;
/// Largest supported mock security parameter (moduli stay below 2^63).
pub const MAX_MOCK_LAMBDA: u32 = 62;
/// The Mersenne prime 2^61 - 1, a convenient crypto-scale mock modulus.
pub const MOCK_P61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Mock,
    Curve,
}

struct CtxInner {
    backend: BackendRepr,
    pairing_meter: AtomicU64,
}

enum BackendRepr {
    Mock {
        p: u64,
    },
    Curve {
        gt_generator: PairingOutput<Bls12_381>,
        target_payload_len: usize,
    },
}

/// Handle to a bilinear group instantiation.
///
/// Cheap to clone; clones share the pairing meter.
#[derive(Clone)]
pub struct BilinearContext {
    inner: Arc<CtxInner>,
}

impl std::fmt::Debug for BilinearContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.inner.backend {
            BackendRepr::Mock { p } => write!(f, "BilinearContext(mock, p={p})"),
            BackendRepr::Curve { .. } => write!(f, "BilinearContext(bls12-381)"),
        }
    }
}

impl BilinearContext {
    /// Mock backend over an explicitly chosen prime modulus.
    pub fn mock(p: u64) -> Result<Self> {
        if !mock::is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        Ok(Self {
            inner: Arc::new(CtxInner {
                backend: BackendRepr::Mock { p },
                pairing_meter: AtomicU64::new(0),
            }),
        })
    }

    /// Mock backend sized by a security parameter: the group order is the
    /// smallest prime above `2^lambda`.
    pub fn mock_for_lambda(lambda: u32) -> Result<Self> {
        if !(MIN_MOCK_LAMBDA..=MAX_MOCK_LAMBDA).contains(&lambda) {
            return Err(Error::UnsupportedLambda(lambda));
        }
        Self::mock(mock::next_prime(1u64 << lambda))
    }

    /// Production backend. Only the 128-bit level (BLS12-381, whose group
    /// order is a 255-bit prime) is registered.
    pub fn curve(lambda: u32) -> Result<Self> {
        if lambda != 128 {
            return Err(Error::UnsupportedLambda(lambda));
        }
        let gt_generator = Bls12_381::pairing(G1Projective::generator(), G2Projective::generator());
        let mut buf = Vec::new();
        gt_generator
            .serialize_compressed(&mut buf)
            .expect("serializing to a Vec cannot fail");
        Ok(Self {
            inner: Arc::new(CtxInner {
                backend: BackendRepr::Curve {
                    gt_generator,
                    target_payload_len: buf.len(),
                },
                pairing_meter: AtomicU64::new(0),
            }),
        })
    }

    pub fn backend(&self) -> BackendKind {
        match self.inner.backend {
            BackendRepr::Mock { .. } => BackendKind::Mock,
            BackendRepr::Curve { .. } => BackendKind::Curve,
        }
    }

    /// The mock modulus, if this is a mock context.
    pub fn mock_modulus(&self) -> Option<u64> {
        match self.inner.backend {
            BackendRepr::Mock { p } => Some(p),
            BackendRepr::Curve { .. } => None,
        }
    }

    /// Bit length of the group order.
    pub fn order_bits(&self) -> u32 {
        match self.inner.backend {
            BackendRepr::Mock { p } => 64 - p.leading_zeros(),
            BackendRepr::Curve { .. } => 255,
        }
    }

    pub fn compatible(&self, other: &BilinearContext) -> bool {
        match (&self.inner.backend, &other.inner.backend) {
            (BackendRepr::Mock { p: a }, BackendRepr::Mock { p: b }) => a == b,
            (BackendRepr::Curve { .. }, BackendRepr::Curve { .. }) => true,
            _ => false,
        }
    }

    /// The canonical generator `g`. On the mock backend this is exponent 1.
    pub fn generator(&self) -> SourceElement {
        match self.inner.backend {
            BackendRepr::Mock { p } => SourceElement(SourceRepr::Mock { v: 1 % p, p }),
            BackendRepr::Curve { .. } => SourceElement(SourceRepr::Curve {
                g1: G1Projective::generator(),
                g2: G2Projective::generator(),
            }),
        }
    }

    pub fn identity_source(&self) -> SourceElement {
        match self.inner.backend {
            BackendRepr::Mock { p } => SourceElement(SourceRepr::Mock { v: 0, p }),
            BackendRepr::Curve { .. } => SourceElement(SourceRepr::Curve {
                g1: G1Projective::default(),
                g2: G2Projective::default(),
            }),
        }
    }

    pub fn identity_target(&self) -> TargetElement {
        match self.inner.backend {
            BackendRepr::Mock { p } => TargetElement(TargetRepr::Mock { v: 0, p }),
            BackendRepr::Curve { .. } => TargetElement(TargetRepr::Curve(PairingOutput::default())),
        }
    }

    /// `e(g, g)`, the canonical generator of the target group.
    pub fn gt_generator(&self) -> TargetElement {
        match &self.inner.backend {
            BackendRepr::Mock { p } => TargetElement(TargetRepr::Mock { v: 1 % *p, p: *p }),
            BackendRepr::Curve { gt_generator, .. } => {
                TargetElement(TargetRepr::Curve(*gt_generator))
            }
        }
    }

    pub fn scalar_from_u64(&self, v: u64) -> Scalar {
        match self.inner.backend {
            BackendRepr::Mock { p } => Scalar(ScalarRepr::Mock { v: v % p, p }),
            BackendRepr::Curve { .. } => Scalar(ScalarRepr::Curve(Fr::from(v))),
        }
    }

    pub fn scalar_zero(&self) -> Scalar {
        self.scalar_from_u64(0)
    }

    pub fn scalar_one(&self) -> Scalar {
        self.scalar_from_u64(1)
    }

    /// The bilinear map. Panics if the arguments come from another backend
    /// or modulus; artifact decoding rejects such elements before they can
    /// reach protocol code.
    pub fn pair(&self, a: &SourceElement, b: &SourceElement) -> TargetElement {
        self.inner.pairing_meter.fetch_add(1, Ordering::Relaxed);
        match (&self.inner.backend, &a.0, &b.0) {
            (
                BackendRepr::Mock { p },
                SourceRepr::Mock { v: va, p: pa },
                SourceRepr::Mock { v: vb, p: pb },
            ) => {
                assert!(pa == p && pb == p, "pair: cross-context elements");
                TargetElement(TargetRepr::Mock {
                    v: mock::mul(*va, *vb, *p),
                    p: *p,
                })
            }
            (
                BackendRepr::Curve { .. },
                SourceRepr::Curve { g1, .. },
                SourceRepr::Curve { g2, .. },
            ) => TargetElement(TargetRepr::Curve(Bls12_381::pairing(*g1, *g2))),
            _ => panic!("pair: cross-context elements"),
        }
    }

    /// Product of pairings `∏ e(a_i, b_i)`, evaluated with a shared final
    /// exponentiation on the curve backend. Counts `pairs.len()` toward the
    /// pairing meter.
    pub fn pair_product(&self, pairs: &[(SourceElement, SourceElement)]) -> TargetElement {
        self.inner
            .pairing_meter
            .fetch_add(pairs.len() as u64, Ordering::Relaxed);
        match &self.inner.backend {
            BackendRepr::Mock { p } => {
                let mut acc = 0u64;
                for (a, b) in pairs {
                    match (&a.0, &b.0) {
                        (SourceRepr::Mock { v: va, p: pa }, SourceRepr::Mock { v: vb, p: pb }) => {
                            assert!(pa == p && pb == p, "pair_product: cross-context elements");
                            acc = mock::add(acc, mock::mul(*va, *vb, *p), *p);
                        }
                        _ => panic!("pair_product: cross-context elements"),
                    }
                }
                TargetElement(TargetRepr::Mock { v: acc, p: *p })
            }
            BackendRepr::Curve { .. } => {
                let lhs: Vec<G1Projective> = pairs
                    .iter()
                    .map(|(a, _)| match &a.0 {
                        SourceRepr::Curve { g1, .. } => *g1,
                        _ => panic!("pair_product: cross-context elements"),
                    })
                    .collect();
                let rhs: Vec<G2Projective> = pairs
                    .iter()
                    .map(|(_, b)| match &b.0 {
                        SourceRepr::Curve { g2, .. } => *g2,
                        _ => panic!("pair_product: cross-context elements"),
                    })
                    .collect();
                TargetElement(TargetRepr::Curve(Bls12_381::multi_pairing(lhs, rhs)))
            }
        }
    }

    /// Number of pairings evaluated through this context since the last
    /// reset. Decode-time subgroup validation is not counted; the meter
    /// instruments protocol work.
    pub fn pairings_performed(&self) -> u64 {
        self.inner.pairing_meter.load(Ordering::Relaxed)
    }

    pub fn reset_pairing_meter(&self) {
        self.inner.pairing_meter.store(0, Ordering::Relaxed);
    }

    /// Deterministic, domain-separated hash into `Z_p*`.
    ///
    /// SHA-512 over `len(domain) || domain || data`, reduced modulo the group
    /// order; a zero residue maps to 1 so the output always lies in `[1, p)`.
    pub fn hash_to_scalar(&self, domain: &[u8], data: &[u8]) -> Scalar {
        let mut h = Sha512::new();
        h.update(b"aibe/h2s/v1");
        h.update((domain.len() as u64).to_be_bytes());
        h.update(domain);
        h.update(data);
        let digest = h.finalize();
        match self.inner.backend {
            BackendRepr::Mock { p } => {
                let wide = u128::from_be_bytes(digest[..16].try_into().unwrap());
                let mut v = (wide % p as u128) as u64;
                if v == 0 {
                    v = 1;
                }
                Scalar(ScalarRepr::Mock { v, p })
            }
            BackendRepr::Curve { .. } => {
                let mut f = Fr::from_be_bytes_mod_order(&digest);
                if f.is_zero() {
                    f = Fr::ONE;
                }
                Scalar(ScalarRepr::Curve(f))
            }
        }
    }

    pub(crate) fn sample_nonzero<R: RngCore>(&self, rng: &mut R) -> Scalar {
        match self.inner.backend {
            BackendRepr::Mock { p } => {
                // Unbiased draw from [1, p) by rejection.
                let range = p - 1;
                let zone = u64::MAX - (u64::MAX % range);
                loop {
                    let v = rng.next_u64();
                    if v < zone {
                        return Scalar(ScalarRepr::Mock {
                            v: v % range + 1,
                            p,
                        });
                    }
                }
            }
            BackendRepr::Curve { .. } => loop {
                let f = Fr::rand(rng);
                if !f.is_zero() {
                    return Scalar(ScalarRepr::Curve(f));
                }
            },
        }
    }

    /// Uniform nonzero scalar from the supplied source.
    pub fn random_nonzero_scalar(&self, src: &mut dyn ScalarSource) -> Scalar {
        src.next_nonzero(self)
    }

    /// Uniform random source-group element `g^r`, `r` nonzero.
    pub fn random_source(&self, src: &mut dyn ScalarSource) -> SourceElement {
        self.generator().exp(&src.next_nonzero(self))
    }

    /// Uniform random non-identity target-group element.
    pub fn random_target(&self, src: &mut dyn ScalarSource) -> TargetElement {
        self.gt_generator().exp(&src.next_nonzero(self))
    }

    /// Encoded length of a tagged source element under this backend.
    pub fn source_encoded_len(&self) -> usize {
        match self.inner.backend {
            BackendRepr::Mock { .. } => 1 + 8,
            BackendRepr::Curve { .. } => 1 + 48 + 96,
        }
    }

    /// Encoded length of a tagged target element under this backend.
    pub fn target_encoded_len(&self) -> usize {
        match &self.inner.backend {
            BackendRepr::Mock { .. } => 1 + 8,
            BackendRepr::Curve {
                target_payload_len, ..
            } => 1 + target_payload_len,
        }
    }

    /// Encoded length of a tagged scalar under this backend.
    pub fn scalar_encoded_len(&self) -> usize {
        match self.inner.backend {
            BackendRepr::Mock { .. } => 1 + 8,
            BackendRepr::Curve { .. } => 1 + 32,
        }
    }
}

use ark_ff::UniformRand;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ScalarRepr {
    Mock { v: u64, p: u64 },
    Curve(Fr),
}

/// An element of `Z_p`, the exponent ring of the groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scalar(pub(crate) ScalarRepr);

impl Scalar {
    pub fn add(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (ScalarRepr::Mock { v: a, p }, ScalarRepr::Mock { v: b, p: pb }) => {
                assert_eq!(p, pb, "scalar arithmetic across moduli");
                Scalar(ScalarRepr::Mock {
                    v: mock::add(*a, *b, *p),
                    p: *p,
                })
            }
            (ScalarRepr::Curve(a), ScalarRepr::Curve(b)) => Scalar(ScalarRepr::Curve(*a + *b)),
            _ => panic!("scalar arithmetic across backends"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (ScalarRepr::Mock { v: a, p }, ScalarRepr::Mock { v: b, p: pb }) => {
                assert_eq!(p, pb, "scalar arithmetic across moduli");
                Scalar(ScalarRepr::Mock {
                    v: mock::sub(*a, *b, *p),
                    p: *p,
                })
            }
            (ScalarRepr::Curve(a), ScalarRepr::Curve(b)) => Scalar(ScalarRepr::Curve(*a - *b)),
            _ => panic!("scalar arithmetic across backends"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (&self.0, &other.0) {
            (ScalarRepr::Mock { v: a, p }, ScalarRepr::Mock { v: b, p: pb }) => {
                assert_eq!(p, pb, "scalar arithmetic across moduli");
                Scalar(ScalarRepr::Mock {
                    v: mock::mul(*a, *b, *p),
                    p: *p,
                })
            }
            (ScalarRepr::Curve(a), ScalarRepr::Curve(b)) => Scalar(ScalarRepr::Curve(*a * *b)),
            _ => panic!("scalar arithmetic across backends"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match &self.0 {
            ScalarRepr::Mock { v, p } => Scalar(ScalarRepr::Mock {
                v: mock::sub(0, *v, *p),
                p: *p,
            }),
            ScalarRepr::Curve(a) => Scalar(ScalarRepr::Curve(-*a)),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.0 {
            ScalarRepr::Mock { v, p } => {
                if *v == 0 {
                    return Err(Error::ZeroInverse);
                }
                Ok(Scalar(ScalarRepr::Mock {
                    v: mock::inv(*v, *p),
                    p: *p,
                }))
            }
            ScalarRepr::Curve(a) => a
                .inverse()
                .map(|f| Scalar(ScalarRepr::Curve(f)))
                .ok_or(Error::ZeroInverse),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            ScalarRepr::Mock { v, .. } => *v == 0,
            ScalarRepr::Curve(a) => a.is_zero(),
        }
    }

    /// The raw residue, on the mock backend only.
    pub fn mock_value(&self) -> Option<u64> {
        match &self.0 {
            ScalarRepr::Mock { v, .. } => Some(*v),
            ScalarRepr::Curve(_) => None,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![TAG_SCALAR];
        match &self.0 {
            ScalarRepr::Mock { v, .. } => out.extend_from_slice(&v.to_be_bytes()),
            ScalarRepr::Curve(f) => {
                f.serialize_compressed(&mut out)
                    .expect("serializing to a Vec cannot fail");
            }
        }
        out
    }

    pub fn from_bytes(ctx: &BilinearContext, bytes: &[u8]) -> Result<Scalar> {
        let payload = strip_tag(ctx.scalar_encoded_len(), TAG_SCALAR, bytes)?;
        match ctx.inner.backend {
            BackendRepr::Mock { p } => {
                let v = u64::from_be_bytes(payload.try_into().unwrap());
                if v >= p {
                    return Err(CodecError::NonCanonicalElement.into());
                }
                Ok(Scalar(ScalarRepr::Mock { v, p }))
            }
            BackendRepr::Curve { .. } => {
                let f = Fr::deserialize_compressed(payload)
                    .map_err(|_| CodecError::NonCanonicalElement)?;
                Ok(Scalar(ScalarRepr::Curve(f)))
            }
        }
    }

    /// Canonical byte ordering used when receiver sets are sorted.
    pub(crate) fn sort_key(&self) -> Vec<u8> {
        match &self.0 {
            ScalarRepr::Mock { v, .. } => v.to_be_bytes().to_vec(),
            ScalarRepr::Curve(f) => {
                let mut out = Vec::new();
                f.serialize_compressed(&mut out).unwrap();
                out.reverse(); // big-endian so numeric order matches byte order
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SourceRepr {
    Mock { v: u64, p: u64 },
    Curve { g1: G1Projective, g2: G2Projective },
}

/// An element of the source group `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceElement(pub(crate) SourceRepr);

impl SourceElement {
    /// Group law.
    pub fn mul(&self, other: &SourceElement) -> SourceElement {
        match (&self.0, &other.0) {
            (SourceRepr::Mock { v: a, p }, SourceRepr::Mock { v: b, p: pb }) => {
                assert_eq!(p, pb, "group law across moduli");
                SourceElement(SourceRepr::Mock {
                    v: mock::add(*a, *b, *p),
                    p: *p,
                })
            }
            (SourceRepr::Curve { g1: a1, g2: a2 }, SourceRepr::Curve { g1: b1, g2: b2 }) => {
                SourceElement(SourceRepr::Curve {
                    g1: *a1 + *b1,
                    g2: *a2 + *b2,
                })
            }
            _ => panic!("group law across backends"),
        }
    }

    /// Exponentiation `self^x`.
    pub fn exp(&self, x: &Scalar) -> SourceElement {
        match (&self.0, &x.0) {
            (SourceRepr::Mock { v, p }, ScalarRepr::Mock { v: e, p: pb }) => {
                assert_eq!(p, pb, "exponentiation across moduli");
                SourceElement(SourceRepr::Mock {
                    v: mock::mul(*v, *e, *p),
                    p: *p,
                })
            }
            (SourceRepr::Curve { g1, g2 }, ScalarRepr::Curve(e)) => {
                SourceElement(SourceRepr::Curve {
                    g1: *g1 * *e,
                    g2: *g2 * *e,
                })
            }
            _ => panic!("exponentiation across backends"),
        }
    }

    pub fn inverse(&self) -> SourceElement {
        match &self.0 {
            SourceRepr::Mock { v, p } => SourceElement(SourceRepr::Mock {
                v: mock::sub(0, *v, *p),
                p: *p,
            }),
            SourceRepr::Curve { g1, g2 } => SourceElement(SourceRepr::Curve { g1: -*g1, g2: -*g2 }),
        }
    }

    /// `self / other`.
    pub fn div(&self, other: &SourceElement) -> SourceElement {
        self.mul(&other.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match &self.0 {
            SourceRepr::Mock { v, .. } => *v == 0,
            SourceRepr::Curve { g1, g2 } => g1.is_zero() && g2.is_zero(),
        }
    }

    /// The discrete logarithm, on the mock backend only.
    pub fn mock_exponent(&self) -> Option<u64> {
        match &self.0 {
            SourceRepr::Mock { v, .. } => Some(*v),
            SourceRepr::Curve { .. } => None,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![TAG_SOURCE];
        match &self.0 {
            SourceRepr::Mock { v, .. } => out.extend_from_slice(&v.to_be_bytes()),
            SourceRepr::Curve { g1, g2 } => {
                g1.serialize_compressed(&mut out)
                    .expect("serializing to a Vec cannot fail");
                g2.serialize_compressed(&mut out)
                    .expect("serializing to a Vec cannot fail");
            }
        }
        out
    }

    /// Decodes and fully validates a source element: subgroup membership per
    /// component and, on the curve backend, equality of the two components'
    /// discrete logarithms (checked with one product of pairings).
    pub fn from_bytes(ctx: &BilinearContext, bytes: &[u8]) -> Result<SourceElement> {
        let payload = strip_tag(ctx.source_encoded_len(), TAG_SOURCE, bytes)?;
        match ctx.inner.backend {
            BackendRepr::Mock { p } => {
                let v = u64::from_be_bytes(payload.try_into().unwrap());
                if v >= p {
                    return Err(CodecError::NonCanonicalElement.into());
                }
                Ok(SourceElement(SourceRepr::Mock { v, p }))
            }
            BackendRepr::Curve { .. } => {
                let g1 = G1Projective::deserialize_compressed(&payload[..48])
                    .map_err(|_| CodecError::NonCanonicalElement)?;
                let g2 = G2Projective::deserialize_compressed(&payload[48..])
                    .map_err(|_| CodecError::NonCanonicalElement)?;
                // e(g1_component, G2) == e(G1, g2_component) iff the two
                // components share a discrete logarithm.
                let check = Bls12_381::multi_pairing(
                    [g1, -G1Projective::generator()],
                    [G2Projective::generator(), g2],
                );
                if check != PairingOutput::default() {
                    return Err(CodecError::NonCanonicalElement.into());
                }
                Ok(SourceElement(SourceRepr::Curve { g1, g2 }))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TargetRepr {
    Mock { v: u64, p: u64 },
    Curve(PairingOutput<Bls12_381>),
}

/// An element of the target group `G_T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetElement(pub(crate) TargetRepr);

impl TargetElement {
    /// Group law.
    pub fn mul(&self, other: &TargetElement) -> TargetElement {
        match (&self.0, &other.0) {
            (TargetRepr::Mock { v: a, p }, TargetRepr::Mock { v: b, p: pb }) => {
                assert_eq!(p, pb, "group law across moduli");
                TargetElement(TargetRepr::Mock {
                    v: mock::add(*a, *b, *p),
                    p: *p,
                })
            }
            (TargetRepr::Curve(a), TargetRepr::Curve(b)) => {
                TargetElement(TargetRepr::Curve(*a + *b))
            }
            _ => panic!("group law across backends"),
        }
    }

    /// Exponentiation `self^x`.
    pub fn exp(&self, x: &Scalar) -> TargetElement {
        match (&self.0, &x.0) {
            (TargetRepr::Mock { v, p }, ScalarRepr::Mock { v: e, p: pb }) => {
                assert_eq!(p, pb, "exponentiation across moduli");
                TargetElement(TargetRepr::Mock {
                    v: mock::mul(*v, *e, *p),
                    p: *p,
                })
            }
            (TargetRepr::Curve(a), ScalarRepr::Curve(e)) => {
                TargetElement(TargetRepr::Curve(*a * *e))
            }
            _ => panic!("exponentiation across backends"),
        }
    }

    pub fn inverse(&self) -> TargetElement {
        match &self.0 {
            TargetRepr::Mock { v, p } => TargetElement(TargetRepr::Mock {
                v: mock::sub(0, *v, *p),
                p: *p,
            }),
            TargetRepr::Curve(a) => TargetElement(TargetRepr::Curve(-*a)),
        }
    }

    /// `self / other`.
    pub fn div(&self, other: &TargetElement) -> TargetElement {
        self.mul(&other.inverse())
    }

    pub fn is_identity(&self) -> bool {
        match &self.0 {
            TargetRepr::Mock { v, .. } => *v == 0,
            TargetRepr::Curve(a) => *a == PairingOutput::default(),
        }
    }

    /// The discrete logarithm w.r.t. `e(g,g)`, on the mock backend only.
    pub fn mock_exponent(&self) -> Option<u64> {
        match &self.0 {
            TargetRepr::Mock { v, .. } => Some(*v),
            TargetRepr::Curve(_) => None,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![TAG_TARGET];
        match &self.0 {
            TargetRepr::Mock { v, .. } => out.extend_from_slice(&v.to_be_bytes()),
            TargetRepr::Curve(a) => {
                a.serialize_compressed(&mut out)
                    .expect("serializing to a Vec cannot fail");
            }
        }
        out
    }

    pub fn from_bytes(ctx: &BilinearContext, bytes: &[u8]) -> Result<TargetElement> {
        let payload = strip_tag(ctx.target_encoded_len(), TAG_TARGET, bytes)?;
        match ctx.inner.backend {
            BackendRepr::Mock { p } => {
                let v = u64::from_be_bytes(payload.try_into().unwrap());
                if v >= p {
                    return Err(CodecError::NonCanonicalElement.into());
                }
                Ok(TargetElement(TargetRepr::Mock { v, p }))
            }
            BackendRepr::Curve { .. } => {
                let a = PairingOutput::<Bls12_381>::deserialize_compressed(payload)
                    .map_err(|_| CodecError::NonCanonicalElement)?;
                Ok(TargetElement(TargetRepr::Curve(a)))
            }
        }
    }
}

fn strip_tag(expected_len: usize, tag: u8, bytes: &[u8]) -> Result<&[u8]> {
    if bytes.len() != expected_len {
        return Err(CodecError::Truncated.into());
    }
    if bytes[0] != tag {
        return Err(CodecError::ElementTagMismatch {
            expected: tag,
            found: bytes[0],
        }
        .into());
    }
    Ok(&bytes[1..])
}

#[cfg(test)]
mod tests {
    use super::rand::{ScalarSource, SeededSource};
    use super::*;

    #[test]
    fn context_construction() {
        // Mock over an explicit small prime: the generator is exponent 1.
        let ctx = BilinearContext::mock(101).unwrap();
        assert_eq!(ctx.generator().mock_exponent(), Some(1));
        assert_eq!(ctx.mock_modulus(), Some(101));
        // Non-prime moduli are rejected.
        assert_eq!(
            BilinearContext::mock(100).unwrap_err(),
            Error::NonPrimeModulus(100)
        );
        // The registered curve level has a ~2^255 group order.
        let curve = BilinearContext::curve(128).unwrap();
        assert_eq!(curve.order_bits(), 255);
        assert_eq!(
            BilinearContext::curve(256).unwrap_err(),
            Error::UnsupportedLambda(256)
        );
        // Lambda-sized mock orders exceed 2^lambda.
        let sized = BilinearContext::mock_for_lambda(16).unwrap();
        assert!(sized.mock_modulus().unwrap() > 1 << 16);
        assert!(BilinearContext::mock_for_lambda(7).is_err());
    }

    #[test]
    fn pairing_vectors_on_mock() {
        let ctx = BilinearContext::mock(101).unwrap();
        let g = ctx.generator();
        // e(g^3, g^5) = e(g,g)^15
        let lhs = ctx.pair(
            &g.exp(&ctx.scalar_from_u64(3)),
            &g.exp(&ctx.scalar_from_u64(5)),
        );
        assert_eq!(lhs.mock_exponent(), Some(15));
        // e(1, b) = 1
        assert_eq!(
            ctx.pair(&ctx.identity_source(), &g.exp(&ctx.scalar_from_u64(5))),
            ctx.identity_target()
        );
        // Modular reduction: 35 * 7 = 245 = 43 mod 101.
        let lhs = ctx.pair(
            &g.exp(&ctx.scalar_from_u64(35)),
            &g.exp(&ctx.scalar_from_u64(7)),
        );
        assert_eq!(lhs.mock_exponent(), Some(43));
    }

    #[test]
    fn scalar_field_vectors() {
        let ctx = BilinearContext::mock(101).unwrap();
        let seven = ctx.scalar_from_u64(7);
        assert_eq!(seven.inv().unwrap().mock_value(), Some(29));
        assert_eq!(ctx.scalar_zero().inv().unwrap_err(), Error::ZeroInverse);
        let g = ctx.generator();
        assert_eq!(g.exp(&ctx.scalar_one()), g);
    }

    #[test]
    fn hash_to_scalar_contract() {
        for ctx in [
            BilinearContext::mock(101).unwrap(),
            BilinearContext::curve(128).unwrap(),
        ] {
            let a = ctx.hash_to_scalar(b"test", b"alice");
            let b = ctx.hash_to_scalar(b"test", b"alice");
            assert_eq!(a, b); // deterministic
            assert!(!a.is_zero()); // lands in [1, p)
            assert_ne!(a, ctx.hash_to_scalar(b"test", b"bob"));
            assert_ne!(a, ctx.hash_to_scalar(b"other-domain", b"alice"));
        }
    }

    #[test]
    fn nonzero_sampling_is_uniformish_and_nonzero() {
        let ctx = BilinearContext::mock(101).unwrap();
        let mut src = SeededSource::new(5);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            let s = src.next_nonzero(&ctx);
            assert!(!s.is_zero());
            seen.insert(s.mock_value().unwrap());
        }
        // 2000 draws over 100 values hit essentially all of them.
        assert!(seen.len() >= 95, "{} residues seen", seen.len());
    }

    #[test]
    fn pairing_meter_counts_protocol_pairings() {
        let ctx = BilinearContext::mock(101).unwrap();
        let g = ctx.generator();
        ctx.reset_pairing_meter();
        let _ = ctx.pair(&g, &g);
        let _ = ctx.pair_product(&[(g, g), (g, g)]);
        assert_eq!(ctx.pairings_performed(), 3);
        ctx.reset_pairing_meter();
        assert_eq!(ctx.pairings_performed(), 0);
    }
}
