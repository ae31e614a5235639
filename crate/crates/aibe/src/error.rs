use thiserror::Error;

/// Errors surfaced by the library.
///
/// Protocol refusals (a party outputting ⊥) are ordinary variants here, not
/// panics: callers such as the CLI map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mock modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("unsupported security parameter {0} for this backend")]
    UnsupportedLambda(u32),
    #[error("elements from different backends or group orders were mixed")]
    BackendMismatch,
    #[error("scalar 0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("witness components must be drawn from Z_p*")]
    ZeroWitness,
    #[error("commitment bases must not be the identity")]
    IdentityBase,
    #[error("challenge 0 is rejected")]
    ZeroChallenge,
    #[error("proof of knowledge failed to verify; issuance refused")]
    ProofRejected,
    #[error("prover state was already consumed")]
    StateAlreadyUsed,
    #[error("transcripts do not admit extraction: {0}")]
    ExtractionFailed(&'static str),
    #[error("key failed its validity relation; the issuing reply is malformed")]
    KeySanityFailed,
    #[error("delegation component {index} failed its validity relation")]
    DelegationCheckFailed { index: usize },
    #[error("identity collides with the master exponent; key issuance aborted")]
    SingularIdentity,
    #[error("identity bit string has length {got}, key material expects {expected}")]
    WatersLengthMismatch { expected: usize, got: usize },
    #[error("receiver set contains a duplicate identity")]
    DuplicateIdentity,
    #[error("receiver set is empty")]
    EmptyReceiverSet,
    #[error("receiver set has {got} identities, maximum is {max}")]
    ReceiverSetTooLarge { max: usize, got: usize },
    #[error("identity is not a member of the receiver set")]
    IdentityNotInSet,
    #[error("tracing exponents must be distinct")]
    EqualTraceExponents,
    #[error("the two transcripts carry equal challenges")]
    EqualChallenges,
    #[error("both keys belong to the same family")]
    EqualFamilies,
    #[error("ciphertext rejected: component consistency check failed")]
    TypeIReject,
    #[error("ciphertext rejected: authenticated decryption failed")]
    AeadReject,
    #[error("unknown cipher-suite identifier {0:#04x}")]
    UnknownSuite(u8),
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(f64),
    #[error("decoder serves a different scheme than the tracer")]
    SchemeMismatch,
    #[error("decoder transport failed: {0}")]
    DecoderTransport(String),
    #[error("operation requires the mock backend")]
    MockBackendRequired,
    #[error("codec: {0}")]
    Codec(#[from] CodecError),
}

/// Errors raised while encoding or decoding artifact files.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("bad magic; not an artifact file")]
    BadMagic,
    #[error("unknown format version {0}")]
    UnknownVersion(u8),
    #[error("unknown scheme tag {0:#04x}")]
    UnknownScheme(u8),
    #[error("unknown backend tag {0:#04x}")]
    UnknownBackend(u8),
    #[error("unknown payload kind {0:#04x}")]
    UnknownKind(u8),
    #[error("expected payload kind {expected:#04x}, found {found:#04x}")]
    KindMismatch { expected: u8, found: u8 },
    #[error("expected scheme tag {expected:#04x}, found {found:#04x}")]
    SchemeMismatch { expected: u8, found: u8 },
    #[error("artifact was encoded under a different backend")]
    BackendMismatch,
    #[error("expected element tag {expected:#04x}, found {found:#04x}")]
    ElementTagMismatch { expected: u8, found: u8 },
    #[error("input truncated")]
    Truncated,
    #[error("trailing bytes after payload")]
    TrailingBytes,
    #[error("unknown tagged variant {0:#04x} in payload")]
    UnknownTagged(u8),
    #[error("element encoding is not canonical or not in the group")]
    NonCanonicalElement,
    #[error("armored input is not valid base64")]
    BadArmor,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
