//! Command-line driver for the accountable-authority IBE schemes.
//!
//! `aibe` exposes the file-based key ceremony (three invocations, one file
//! exchanged per message), encryption and decryption, white-box key tracing,
//! black-box tracing against built-in decoder models or an external decoder
//! process, and the statistical simulation harness.
//!
//! Scheme-prefixed command families are accepted as shorthand:
//! `aibe gentry-setup ...` is `aibe setup --scheme gentry ...`, and the
//! same for `ibbe-*`.
//!
//! Exit codes: 0 success; 1 usage, I/O or transport errors; 2 protocol
//! refusals (rejected proof of knowledge, failed key sanity check, refused
//! decryption).

mod exec_decoder;
mod message;

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aibe::basic::{self, HashModeRequest, Identity};
use aibe::cca::{self, CipherSuite};
use aibe::codec::{self, ArtifactKind, SchemeId};
use aibe::gentry;
use aibe::groups::rand::{ScalarSource, SeededSource};
use aibe::groups::{BackendKind, BilinearContext, Scalar};
use aibe::ibbe::{self, ReceiverSet};
use aibe::tracing::harness::{self, AuditScheme, CommitmentFlavor, DecoderSpec, SchemeChoice};
use aibe::tracing::{Decoder, DecoderQuery, TraceParams};
use aibe::Error as LibError;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use exec_decoder::ExecDecoder;

#[derive(Parser)]
#[command(
    name = "aibe",
    version,
    about = "Accountable-authority identity-based encryption: key ceremony, tracing, simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Core,
    Cca,
    Gentry,
    Ibbe,
}

impl SchemeArg {
    fn id(self) -> SchemeId {
        match self {
            SchemeArg::Core => SchemeId::Core,
            SchemeArg::Cca => SchemeId::Cca,
            SchemeArg::Gentry => SchemeId::Gentry,
            SchemeArg::Ibbe => SchemeId::Ibbe,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a master key pair.
    Setup(SetupArgs),
    /// Ceremony step 1 (user): commit to a fresh family share and prove
    /// knowledge of its opening. Writes the request file and a private
    /// state file.
    KeygenUserInit(InitArgs),
    /// Ceremony step 2 (authority): verify the request and issue the
    /// blinded key reply.
    KeygenPkgRespond(RespondArgs),
    /// Ceremony step 3 (user): unblind, re-randomize and validity-check the
    /// final key.
    KeygenUserFinish(FinishArgs),
    /// Encrypt a message.
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext.
    Decrypt(DecryptArgs),
    /// Check a key against its validity relation.
    SanityCheck(KeyCheckArgs),
    /// White-box trace: validate a key and print its family number.
    TraceKey(KeyCheckArgs),
    /// Black-box trace: run the tracing loop against a decoder and print
    /// the verdict.
    TraceBox(TraceBoxArgs),
    /// Statistical experiments: repeated traces, the hiding audit, the
    /// two-key extraction check, decoder hit rates.
    Simulate(SimulateArgs),
    /// Print an artifact's header (and payload with --reveal).
    Inspect(InspectArgs),
    /// Serve a key as a line-oriented decoder process (the exec: transport
    /// peer for trace-box).
    ServeDecoder(ServeArgs),
}

#[derive(Args)]
struct SetupArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// `curve` or `mock:<prime>` or `mock` (sized from --lambda).
    #[arg(long, default_value = "curve")]
    backend: String,
    /// Security parameter.
    #[arg(long, default_value_t = 128)]
    lambda: u32,
    /// Identity hash for the core scheme: `bb` or `waters:<bits>`.
    #[arg(long, default_value = "bb")]
    hash_mode: String,
    /// Maximum receivers per ciphertext (broadcast scheme).
    #[arg(long, default_value_t = 8)]
    max_receivers: usize,
    /// Hex seed for the randomness tape.
    #[arg(long)]
    seed: String,
    #[arg(long)]
    out_mpk: PathBuf,
    #[arg(long)]
    out_msk: PathBuf,
}

#[derive(Args)]
struct InitArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
    #[arg(long)]
    seed: String,
    #[arg(long)]
    out_request: PathBuf,
    #[arg(long)]
    out_state: PathBuf,
}

#[derive(Args)]
struct RespondArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    msk: PathBuf,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
    #[arg(long)]
    request: PathBuf,
    #[arg(long)]
    seed: String,
    #[arg(long)]
    out_reply: PathBuf,
}

#[derive(Args)]
struct FinishArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    reply: PathBuf,
    /// Required for schemes whose finalize draws fresh randomness.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    out_key: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
    /// Broadcast receiver identities, comma separated.
    #[arg(long, value_delimiter = ',')]
    recipients: Vec<String>,
    /// Broadcast receiver identities as raw scalars.
    #[arg(long, value_delimiter = ',')]
    recipient_scalars: Vec<u64>,
    /// Read the plaintext from a file.
    #[arg(long, conflicts_with = "message")]
    r#in: Option<PathBuf>,
    /// Inline plaintext.
    #[arg(long)]
    message: Option<String>,
    #[arg(long)]
    seed: String,
    #[arg(long)]
    out: PathBuf,
    /// Omit the cleartext receiver set from broadcast ciphertexts.
    #[arg(long)]
    no_embed_set: bool,
}

#[derive(Args)]
struct DecryptArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    key: PathBuf,
    #[arg(long)]
    r#in: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Receiver set for broadcast ciphertexts that do not embed it.
    #[arg(long, value_delimiter = ',')]
    recipients: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    recipient_scalars: Vec<u64>,
}

#[derive(Args)]
struct KeyCheckArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    key: PathBuf,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
}

#[derive(Args)]
struct TraceBoxArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    /// The accusing user's well-formed key.
    #[arg(long)]
    key: PathBuf,
    /// Master secret, required by the builtin authority decoder models.
    #[arg(long)]
    msk: Option<PathBuf>,
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    id_scalar: Option<u64>,
    /// Receiver set to trace under (broadcast; defaults to the key's
    /// identity alone).
    #[arg(long, value_delimiter = ',')]
    recipients: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    recipient_scalars: Vec<u64>,
    #[arg(long, default_value_t = 16)]
    lambda: u32,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// `builtin:honest`, `builtin:noisy:<eps>`, `builtin:pkg-master`,
    /// `builtin:pkg-guessing`, or `exec:<command line>`.
    #[arg(long)]
    decoder: String,
    #[arg(long)]
    seed: String,
    /// Estimate the decoder's usefulness on this many valid ciphertexts
    /// and trace with the estimate instead of --epsilon.
    #[arg(long)]
    estimate_epsilon: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExperimentArg {
    Trace,
    HidingAudit,
    CdhExtract,
    HitRate,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentArg,
    #[arg(long, value_enum, default_value = "core")]
    scheme: SchemeArg,
    #[arg(long, default_value = "mock:2305843009213693951")]
    backend: String,
    #[arg(long, default_value_t = 16)]
    lambda: u32,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value = "builtin:honest")]
    decoder: String,
    #[arg(long, default_value_t = 50)]
    trials: u32,
    #[arg(long, default_value_t = 100)]
    ceremonies: u32,
    #[arg(long, default_value_t = 100)]
    pairs: u32,
    #[arg(long, default_value_t = 10000)]
    samples: u32,
    #[arg(long, default_value_t = 8)]
    max_receivers: usize,
    #[arg(long, default_value_t = 1)]
    set_size: usize,
    #[arg(long)]
    seed: String,
    /// Write the line-delimited report here (.rpt).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the per-trial CSV summary here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long)]
    r#in: PathBuf,
    /// Also dump the payload of secret-bearing artifacts as hex.
    #[arg(long)]
    reveal: bool,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long, value_enum)]
    scheme: Option<SchemeArg>,
    #[arg(long)]
    mpk: PathBuf,
    #[arg(long)]
    key: PathBuf,
    /// Receiver set for broadcast ciphertexts that do not embed it.
    #[arg(long, value_delimiter = ',')]
    recipients: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    recipient_scalars: Vec<u64>,
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn parse_seed(text: &str) -> Result<u64> {
    let trimmed = text.trim().trim_start_matches("0x");
    u64::from_str_radix(trimmed, 16).with_context(|| format!("seed `{text}` is not hexadecimal"))
}

fn parse_backend(text: &str, lambda: u32) -> Result<BilinearContext> {
    if text == "curve" {
        // One curve level is registered; --lambda sizes mock backends and
        // trace parameters, never the curve.
        return Ok(BilinearContext::curve(128)?);
    }
    if text == "mock" {
        return Ok(BilinearContext::mock_for_lambda(lambda)?);
    }
    if let Some(p) = text.strip_prefix("mock:") {
        let p: u64 = p.parse().context("mock modulus is not an integer")?;
        return Ok(BilinearContext::mock(p)?);
    }
    bail!("unknown backend `{text}`; expected `curve`, `mock` or `mock:<prime>`")
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn check_scheme_flag(actual: SchemeId, flag: Option<SchemeArg>) -> Result<()> {
    if let Some(flag) = flag {
        if flag.id() != actual {
            bail!(
                "artifact belongs to scheme `{}` but `--scheme {}` was given",
                actual.as_str(),
                flag.id().as_str()
            );
        }
    }
    Ok(())
}

/// Scalar identity from `--id` (hashed) or `--id-scalar` (raw test vector).
fn scalar_identity(
    ctx: &BilinearContext,
    id: &Option<String>,
    id_scalar: &Option<u64>,
) -> Result<Scalar> {
    match (id, id_scalar) {
        (Some(name), None) => {
            let Identity::Scalar(s) = Identity::from_str_scalar(ctx, name) else {
                unreachable!()
            };
            Ok(s)
        }
        (None, Some(raw)) => Ok(ctx.scalar_from_u64(*raw)),
        _ => bail!("exactly one of --id or --id-scalar is required"),
    }
}

/// Identity for the core scheme, shaped by the master key's hash mode.
fn core_identity(
    mpk: &basic::MasterPublicKey,
    id: &Option<String>,
    id_scalar: &Option<u64>,
) -> Result<Identity> {
    match &mpk.hash_mode {
        basic::IdentityHashMode::BonehBoyen => Ok(Identity::Scalar(scalar_identity(
            mpk.context(),
            id,
            id_scalar,
        )?)),
        basic::IdentityHashMode::Waters { u, .. } => {
            let name = id
                .as_ref()
                .context("the bit-hash mode needs --id (a string identity)")?;
            Ok(Identity::from_str_bits(name, u.len()))
        }
    }
}

fn receiver_set(
    ctx: &BilinearContext,
    recipients: &[String],
    recipient_scalars: &[u64],
    fallback: Option<Scalar>,
) -> Result<ReceiverSet> {
    let mut ids: Vec<Scalar> = recipients
        .iter()
        .map(|name| {
            let Identity::Scalar(s) = Identity::from_str_scalar(ctx, name) else {
                unreachable!()
            };
            s
        })
        .collect();
    ids.extend(recipient_scalars.iter().map(|v| ctx.scalar_from_u64(*v)));
    if ids.is_empty() {
        match fallback {
            Some(id) => Ok(ReceiverSet::singleton(id)),
            None => bail!("a receiver set is required (--recipients or --recipient-scalars)"),
        }
    } else {
        Ok(ReceiverSet::new(ids)?)
    }
}

fn format_scalar(ctx: &BilinearContext, s: &Scalar) -> String {
    match ctx.backend() {
        BackendKind::Mock => s.mock_value().unwrap().to_string(),
        BackendKind::Curve => {
            let bytes = s.to_bytes();
            bytes[1..].iter().map(|b| format!("{b:02x}")).collect()
        }
    }
}

fn plaintext_from_args(args_in: &Option<PathBuf>, message: &Option<String>) -> Result<Vec<u8>> {
    match (args_in, message) {
        (Some(path), None) => read_file(path),
        (None, Some(text)) => Ok(text.as_bytes().to_vec()),
        _ => bail!("exactly one of --in or --message is required"),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_setup(args: SetupArgs) -> Result<i32> {
    let ctx = parse_backend(&args.backend, args.lambda)?;
    let mut src = SeededSource::new(parse_seed(&args.seed)?);
    let (mpk_bytes, msk_bytes) = match args.scheme {
        SchemeArg::Core => {
            let mode = if args.hash_mode == "bb" {
                HashModeRequest::BonehBoyen
            } else if let Some(bits) = args.hash_mode.strip_prefix("waters:") {
                HashModeRequest::Waters {
                    bits: bits.parse().context("waters bit length")?,
                }
            } else {
                bail!(
                    "unknown hash mode `{}`; expected `bb` or `waters:<bits>`",
                    args.hash_mode
                )
            };
            let (mpk, msk) = basic::setup(&ctx, mode, &mut src);
            (
                codec::encode_core_mpk(&mpk),
                codec::encode_core_msk(&ctx, &msk),
            )
        }
        SchemeArg::Cca => {
            let (mpk, msk) = cca::setup(&ctx, CipherSuite::default(), &mut src);
            (
                codec::encode_cca_mpk(&mpk),
                codec::encode_cca_msk(&ctx, &msk),
            )
        }
        SchemeArg::Gentry => {
            let (mpk, msk) = gentry::setup(&ctx, &mut src);
            (
                codec::encode_gentry_mpk(&mpk),
                codec::encode_gentry_msk(&ctx, &msk),
            )
        }
        SchemeArg::Ibbe => {
            let (mpk, msk) = ibbe::aibbe_setup(&ctx, args.max_receivers, &mut src);
            (
                codec::encode_ibbe_mpk(&mpk),
                codec::encode_ibbe_msk(&ctx, &msk),
            )
        }
    };
    write_file(&args.out_mpk, &mpk_bytes)?;
    write_file(&args.out_msk, &msk_bytes)?;
    eprintln!(
        "wrote {} and {}",
        args.out_mpk.display(),
        args.out_msk.display()
    );
    Ok(0)
}

fn cmd_keygen_user_init(args: InitArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let mut src = SeededSource::new(parse_seed(&args.seed)?);
    let (request_bytes, state_bytes) = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (state, request) = basic::keygen_user_round1_ni(&mpk, &mut src);
            (
                codec::encode_request(mpk.context(), scheme, &request),
                codec::encode_ceremony_state(
                    mpk.context(),
                    scheme,
                    state.witness(),
                    state.commitment(),
                ),
            )
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let (state, request) = cca::keygen_user_round1_ni(&mpk, &mut src);
            (
                codec::encode_request(mpk.context(), scheme, &request),
                codec::encode_ceremony_state(
                    mpk.context(),
                    scheme,
                    state.witness(),
                    state.commitment(),
                ),
            )
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let (state, request) = gentry::keygen_user_round1_ni(&mpk, &id, &mut src)?;
            (
                codec::encode_request(mpk.context(), scheme, &request),
                codec::encode_ceremony_state(
                    mpk.context(),
                    scheme,
                    state.witness(),
                    state.commitment(),
                ),
            )
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (state, request) = ibbe::keygen_user_round1_ni(&mpk, &mut src);
            (
                codec::encode_request(mpk.context(), scheme, &request),
                codec::encode_ceremony_state(
                    mpk.context(),
                    scheme,
                    state.witness(),
                    state.commitment(),
                ),
            )
        }
    };
    write_file(&args.out_request, &request_bytes)?;
    write_file(&args.out_state, &state_bytes)?;
    eprintln!(
        "wrote {} (send to the authority) and {} (keep private)",
        args.out_request.display(),
        args.out_state.display()
    );
    Ok(0)
}

fn cmd_keygen_pkg_respond(args: RespondArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let request_bytes = read_file(&args.request)?;
    let mut src = SeededSource::new(parse_seed(&args.seed)?);
    let reply_bytes = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (msk_ctx, msk) = codec::decode_core_msk(&read_file(&args.msk)?)?;
            codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
            let (req_ctx, request) = codec::decode_request(scheme, &request_bytes)?;
            codec::ensure_same_backend(mpk.context(), &req_ctx)?;
            let id = core_identity(&mpk, &args.id, &args.id_scalar)?;
            let blinded = basic::keygen_pkg_respond_ni(&msk, &mpk, &id, &request, &mut src)?;
            codec::encode_core_blinded(mpk.context(), &blinded)
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let (msk_ctx, msk) = codec::decode_cca_msk(&read_file(&args.msk)?)?;
            codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
            let (req_ctx, request) = codec::decode_request(scheme, &request_bytes)?;
            codec::ensure_same_backend(mpk.context(), &req_ctx)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let blinded = cca::keygen_pkg_respond_ni(&msk, &mpk, &id, &request, &mut src)?;
            codec::encode_cca_blinded(mpk.context(), &blinded)
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (msk_ctx, msk) = codec::decode_gentry_msk(&read_file(&args.msk)?)?;
            codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
            let (req_ctx, request) = codec::decode_request(scheme, &request_bytes)?;
            codec::ensure_same_backend(mpk.context(), &req_ctx)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let blinded = gentry::keygen_pkg_respond_ni(&msk, &mpk, &id, &request, &mut src)?;
            codec::encode_gentry_blinded(mpk.context(), &blinded)
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (msk_ctx, msk) = codec::decode_ibbe_msk(&read_file(&args.msk)?)?;
            codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
            let (req_ctx, request) = codec::decode_request(scheme, &request_bytes)?;
            codec::ensure_same_backend(mpk.context(), &req_ctx)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let blinded = ibbe::keygen_pkg_respond_ni(&msk, &mpk, &id, &request, &mut src)?;
            codec::encode_ibbe_blinded(mpk.context(), &blinded)
        }
    };
    write_file(&args.out_reply, &reply_bytes)?;
    eprintln!("wrote {} (send to the user)", args.out_reply.display());
    Ok(0)
}

fn cmd_keygen_user_finish(args: FinishArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let state_bytes = read_file(&args.state)?;
    let reply_bytes = read_file(&args.reply)?;
    let mut seed_src = match &args.seed {
        Some(seed) => Some(SeededSource::new(parse_seed(seed)?)),
        None => None,
    };
    let key_bytes = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (_, witness, commitment) = codec::decode_ceremony_state(scheme, &state_bytes)?;
            let state = basic::KeygenUserState::resume(witness, commitment);
            let (_, blinded) = codec::decode_core_blinded(&reply_bytes)?;
            let id = core_identity(&mpk, &args.id, &args.id_scalar)?;
            let src = seed_src
                .as_mut()
                .context("--seed is required to re-randomize the final key")?;
            let key = basic::keygen_user_finalize(&mpk, &id, state, &blinded, src)?;
            codec::encode_core_user_key(mpk.context(), &key)
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let (_, witness, commitment) = codec::decode_ceremony_state(scheme, &state_bytes)?;
            let state = cca::CcaUserState::resume(witness, commitment);
            let (_, blinded) = codec::decode_cca_blinded(&reply_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let src = seed_src
                .as_mut()
                .context("--seed is required to re-randomize the final key")?;
            let key = cca::keygen_user_finalize(&mpk, &id, state, &blinded, src)?;
            codec::encode_cca_user_key(mpk.context(), &key)
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (_, witness, commitment) = codec::decode_ceremony_state(scheme, &state_bytes)?;
            let state = gentry::GentryUserState::resume(witness, commitment);
            let (_, blinded) = codec::decode_gentry_blinded(&reply_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let key = gentry::keygen_user_finalize(&mpk, &id, state, &blinded)?;
            codec::encode_gentry_user_key(mpk.context(), &key)
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (_, witness, commitment) = codec::decode_ceremony_state(scheme, &state_bytes)?;
            let state = ibbe::IbbeUserState::resume(witness, commitment);
            let (_, blinded) = codec::decode_ibbe_blinded(&reply_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let src = seed_src
                .as_mut()
                .context("--seed is required to re-randomize the final key")?;
            let key = ibbe::keygen_user_finalize(&mpk, &id, state, &blinded, src)?;
            codec::encode_ibbe_user_key(mpk.context(), &key)
        }
    };
    write_file(&args.out_key, &key_bytes)?;
    eprintln!("wrote {} (validity checked)", args.out_key.display());
    Ok(0)
}

fn cmd_encrypt(args: EncryptArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let plaintext = plaintext_from_args(&args.r#in, &args.message)?;
    let mut src = SeededSource::new(parse_seed(&args.seed)?);
    let ct_bytes = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let id = core_identity(&mpk, &args.id, &args.id_scalar)?;
            let m = message::encode(mpk.context(), &plaintext)?;
            let ct = basic::encrypt(&mpk, &id, &m, &mut src)?;
            codec::encode_core_ciphertext(&mpk, &ct)
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let ct = cca::encrypt(&mpk, &id, &plaintext, &mut src);
            codec::encode_cca_ciphertext(&mpk, &ct)
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let id = scalar_identity(mpk.context(), &args.id, &args.id_scalar)?;
            let m = message::encode(mpk.context(), &plaintext)?;
            let ct = gentry::encrypt(&mpk, &id, &m, &mut src);
            codec::encode_gentry_ciphertext(&mpk, &ct)
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let set = receiver_set(
                mpk.context(),
                &args.recipients,
                &args.recipient_scalars,
                None,
            )?;
            let m = message::encode(mpk.context(), &plaintext)?;
            let ct = ibbe::aibbe_encrypt(&mpk, &set, &m, &mut src)?;
            codec::encode_ibbe_ciphertext(&mpk, &ct, &set, !args.no_embed_set)
        }
    };
    write_file(&args.out, &ct_bytes)?;
    eprintln!("wrote {}", args.out.display());
    Ok(0)
}

fn cmd_decrypt(args: DecryptArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let key_bytes = read_file(&args.key)?;
    let ct_bytes = read_file(&args.r#in)?;
    let plaintext = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_core_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let (ct_ctx, ct) = codec::decode_core_ciphertext(&ct_bytes)?;
            codec::ensure_same_backend(mpk.context(), &ct_ctx)?;
            message::decode(mpk.context(), &basic::decrypt(&mpk, &key, &ct))?
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_cca_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let (ct_ctx, ct) = codec::decode_cca_ciphertext(&ct_bytes)?;
            codec::ensure_same_backend(mpk.context(), &ct_ctx)?;
            cca::decrypt(&mpk, &key, &ct)?
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_gentry_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let (ct_ctx, ct) = codec::decode_gentry_ciphertext(&ct_bytes)?;
            codec::ensure_same_backend(mpk.context(), &ct_ctx)?;
            message::decode(mpk.context(), &gentry::decrypt(&mpk, &key, &ct))?
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_ibbe_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let file = codec::decode_ibbe_ciphertext(&ct_bytes)?;
            codec::ensure_same_backend(mpk.context(), &file.ctx)?;
            let set = match file.set {
                Some(set) => set,
                None => receiver_set(
                    mpk.context(),
                    &args.recipients,
                    &args.recipient_scalars,
                    None,
                )?,
            };
            if codec::receiver_set_digest(&set) != file.set_digest {
                bail!("receiver set does not match the ciphertext's set digest");
            }
            let m = ibbe::aibbe_decrypt(&mpk, &key, &set, &file.ciphertext)?;
            message::decode(mpk.context(), &m)?
        }
    };
    write_file(&args.out, &plaintext)?;
    eprintln!("wrote {}", args.out.display());
    Ok(0)
}

/// Shared loader for sanity-check / trace-key.
fn whitebox_family(args: &KeyCheckArgs) -> Result<(BilinearContext, Option<Scalar>)> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let key_bytes = read_file(&args.key)?;
    match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_core_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let id = if args.id.is_some() || args.id_scalar.is_some() {
                core_identity(&mpk, &args.id, &args.id_scalar)?
            } else {
                key.identity.clone()
            };
            Ok((
                mpk.context().clone(),
                basic::trace_whitebox(&mpk, &id, &key),
            ))
        }
        SchemeId::Cca => {
            let mpk = codec::decode_cca_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_cca_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let id = if args.id.is_some() || args.id_scalar.is_some() {
                scalar_identity(mpk.context(), &args.id, &args.id_scalar)?
            } else {
                key.identity
            };
            Ok((mpk.context().clone(), cca::trace_whitebox(&mpk, &id, &key)))
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_gentry_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            Ok((mpk.context().clone(), gentry::trace_whitebox(&mpk, &key)))
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_ibbe_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            Ok((mpk.context().clone(), ibbe::trace_whitebox(&mpk, &key)))
        }
    }
}

fn cmd_sanity_check(args: KeyCheckArgs) -> Result<i32> {
    let (_, family) = whitebox_family(&args)?;
    if family.is_some() {
        println!("accept");
        Ok(0)
    } else {
        println!("reject");
        Ok(2)
    }
}

fn cmd_trace_key(args: KeyCheckArgs) -> Result<i32> {
    let (ctx, family) = whitebox_family(&args)?;
    match family {
        Some(family) => {
            println!("family {}", format_scalar(&ctx, &family));
            Ok(0)
        }
        None => {
            println!("ill-formed key");
            Ok(2)
        }
    }
}

/// The artifacts a black-box trace operates on, scheme-resolved.
#[allow(clippy::large_enum_variant)] // curve elements dwarf the mock arms
enum Loaded {
    Core(basic::MasterPublicKey, Identity, basic::UserKey),
    Gentry(gentry::GentryMpk, gentry::GentryKey),
    Ibbe(ibbe::IbbeMpk, ibbe::IbbeUserKey, ReceiverSet),
}

impl Loaded {
    fn context(&self) -> &BilinearContext {
        match self {
            Loaded::Core(mpk, ..) => mpk.context(),
            Loaded::Gentry(mpk, ..) => mpk.context(),
            Loaded::Ibbe(mpk, ..) => mpk.context(),
        }
    }

    fn scheme(&self) -> SchemeId {
        match self {
            Loaded::Core(..) => SchemeId::Core,
            Loaded::Gentry(..) => SchemeId::Gentry,
            Loaded::Ibbe(..) => SchemeId::Ibbe,
        }
    }

    /// Builds one of the builtin decoder models against these artifacts.
    /// The authority models additionally need the master secret file.
    fn build_builtin(
        &self,
        name: &str,
        msk_path: &Option<PathBuf>,
        seed: u64,
    ) -> Result<Box<dyn Decoder>> {
        use aibe::tracing::decoders;
        let noisy_eps = name.strip_prefix("noisy:");
        let needs_msk = matches!(name, "pkg-master" | "pkg-guessing");
        if needs_msk && msk_path.is_none() {
            bail!("builtin:{name} plays a dishonest authority and needs --msk");
        }
        Ok(match self {
            Loaded::Core(mpk, id, key) => match name {
                "honest" => Box::new(decoders::honest_core(mpk, key)),
                _ if noisy_eps.is_some() => Box::new(decoders::noisy(
                    decoders::honest_core(mpk, key),
                    noisy_eps.unwrap().parse().context("noisy usefulness")?,
                    seed,
                )?),
                "pkg-master" | "pkg-guessing" => {
                    let (msk_ctx, msk) =
                        codec::decode_core_msk(&read_file(msk_path.as_ref().unwrap())?)?;
                    codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
                    if name == "pkg-master" {
                        Box::new(decoders::pkg_master_core(mpk, &msk)?)
                    } else {
                        Box::new(decoders::pkg_guessing_core(mpk, &msk, id, seed))
                    }
                }
                other => bail!("unknown builtin decoder `{other}`"),
            },
            Loaded::Gentry(mpk, key) => match name {
                "honest" => Box::new(decoders::honest_gentry(mpk, key)),
                _ if noisy_eps.is_some() => Box::new(decoders::noisy(
                    decoders::honest_gentry(mpk, key),
                    noisy_eps.unwrap().parse().context("noisy usefulness")?,
                    seed,
                )?),
                "pkg-master" | "pkg-guessing" => {
                    let (msk_ctx, msk) =
                        codec::decode_gentry_msk(&read_file(msk_path.as_ref().unwrap())?)?;
                    codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
                    if name == "pkg-master" {
                        Box::new(decoders::pkg_master_gentry(mpk, &msk, &key.identity)?)
                    } else {
                        Box::new(decoders::pkg_guessing_gentry(
                            mpk,
                            &msk,
                            &key.identity,
                            seed,
                        ))
                    }
                }
                other => bail!("unknown builtin decoder `{other}`"),
            },
            Loaded::Ibbe(mpk, key, _) => match name {
                "honest" => Box::new(decoders::honest_ibbe(mpk, key)),
                _ if noisy_eps.is_some() => Box::new(decoders::noisy(
                    decoders::honest_ibbe(mpk, key),
                    noisy_eps.unwrap().parse().context("noisy usefulness")?,
                    seed,
                )?),
                "pkg-master" | "pkg-guessing" => {
                    let (msk_ctx, msk) =
                        codec::decode_ibbe_msk(&read_file(msk_path.as_ref().unwrap())?)?;
                    codec::ensure_same_backend(mpk.context(), &msk_ctx)?;
                    if name == "pkg-master" {
                        Box::new(decoders::pkg_master_ibbe(mpk, &msk))
                    } else {
                        Box::new(decoders::pkg_guessing_ibbe(mpk, &msk, &key.identity, seed))
                    }
                }
                other => bail!("unknown builtin decoder `{other}`"),
            },
        })
    }

    /// Empirical hit rate on fresh valid ciphertexts.
    fn estimate_usefulness(&self, decoder: &dyn Decoder, samples: u32, seed: u64) -> Result<f64> {
        let ctx = self.context().clone();
        let mut src = SeededSource::new(seed ^ 0x5eed_e571_aa7e_0001);
        let mut hits = 0u64;
        for _ in 0..samples {
            let (ct_bytes, context_bytes, expected) = match self {
                Loaded::Core(mpk, id, _) => {
                    let m = ctx.random_target(&mut src);
                    let ct = basic::encrypt(mpk, id, &m, &mut src)?;
                    (
                        codec::encode_core_ciphertext(mpk, &ct),
                        codec::encode_identity(id),
                        m.to_bytes(),
                    )
                }
                Loaded::Gentry(mpk, key) => {
                    let m = ctx.random_target(&mut src);
                    let ct = gentry::encrypt(mpk, &key.identity, &m, &mut src);
                    (
                        codec::encode_gentry_ciphertext(mpk, &ct),
                        key.identity.to_bytes(),
                        m.to_bytes(),
                    )
                }
                Loaded::Ibbe(mpk, _, set) => {
                    let m = ctx.random_target(&mut src);
                    let ct = ibbe::aibbe_encrypt(mpk, set, &m, &mut src)?;
                    (
                        codec::encode_ibbe_ciphertext(mpk, &ct, set, true),
                        codec::encode_receiver_set(set),
                        m.to_bytes(),
                    )
                }
            };
            let query = DecoderQuery {
                scheme: self.scheme(),
                ciphertext: &ct_bytes,
                context: &context_bytes,
            };
            if decoder.decrypt(&query).as_deref() == Some(expected.as_slice()) {
                hits += 1;
            }
        }
        Ok(hits as f64 / samples as f64)
    }
}

fn cmd_trace_box(args: TraceBoxArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    if scheme == SchemeId::Cca {
        bail!("black-box tracing applies to the core, gentry and ibbe schemes");
    }
    let seed = parse_seed(&args.seed)?;
    let key_bytes = read_file(&args.key)?;

    let loaded = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_core_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let id = key.identity.clone();
            Loaded::Core(mpk, id, key)
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_gentry_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            Loaded::Gentry(mpk, key)
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (key_ctx, key) = codec::decode_ibbe_user_key(&key_bytes)?;
            codec::ensure_same_backend(mpk.context(), &key_ctx)?;
            let set = receiver_set(
                mpk.context(),
                &args.recipients,
                &args.recipient_scalars,
                Some(key.identity),
            )?;
            Loaded::Ibbe(mpk, key, set)
        }
        SchemeId::Cca => unreachable!(),
    };

    // Build the decoder.
    let mut exec: Option<&ExecDecoder> = None;
    let exec_holder;
    let boxed: Box<dyn Decoder>;
    let decoder: &dyn Decoder = if let Some(command) = args.decoder.strip_prefix("exec:") {
        exec_holder = ExecDecoder::spawn(scheme, command)?;
        exec = Some(&exec_holder);
        &exec_holder
    } else if let Some(name) = args.decoder.strip_prefix("builtin:") {
        boxed = loaded.build_builtin(name, &args.msk, seed)?;
        boxed.as_ref()
    } else {
        bail!(
            "unknown decoder `{}`; expected builtin:<name> or exec:<command>",
            args.decoder
        )
    };

    // Optionally estimate usefulness on valid ciphertexts first.
    let epsilon = match args.estimate_epsilon {
        None => args.epsilon,
        Some(samples) => {
            let rate = loaded.estimate_usefulness(decoder, samples, seed)?;
            eprintln!("estimated usefulness on valid ciphertexts: {rate:.4}");
            if rate <= 0.0 {
                bail!("the decoder answered no valid ciphertexts; nothing to trace");
            }
            rate
        }
    };

    let params = TraceParams::new(args.lambda, epsilon)?;
    let mut src = SeededSource::new(seed);
    let outcome = match &loaded {
        Loaded::Core(mpk, id, key) => {
            basic::trace_blackbox(mpk, id, key, &params, decoder, &mut src)?
        }
        Loaded::Gentry(mpk, key) => gentry::trace_blackbox(mpk, key, &params, decoder, &mut src)?,
        Loaded::Ibbe(mpk, key, set) => {
            ibbe::trace_blackbox(mpk, key, set, &params, decoder, &mut src)?
        }
    };
    if let Some(exec) = exec {
        if exec.transport_failed() {
            bail!("decoder transport failed; experiment aborted without a verdict");
        }
    }
    eprintln!(
        "ctr = {} over {} iterations (lambda = {}, epsilon = {:.4})",
        outcome.ctr, outcome.iterations, args.lambda, epsilon
    );
    println!("{}", outcome.culprit);
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let ctx = parse_backend(&args.backend, args.lambda.max(8))?;
    let seed = parse_seed(&args.seed)?;
    let mut report_text = String::new();
    let mut csv_text: Option<String> = None;
    match args.experiment {
        ExperimentArg::Trace | ExperimentArg::HitRate => {
            let choice = match args.scheme {
                SchemeArg::Core => SchemeChoice::Core,
                SchemeArg::Gentry => SchemeChoice::Gentry,
                SchemeArg::Ibbe => SchemeChoice::Ibbe {
                    max_receivers: args.max_receivers,
                    set_size: args.set_size,
                },
                SchemeArg::Cca => {
                    bail!("black-box experiments apply to the core, gentry and ibbe schemes")
                }
            };
            let subject = harness::instantiate(choice, &ctx, seed)?;
            let spec = parse_builtin_spec(&args.decoder)?;
            let decoder = subject.build_decoder(spec, seed)?;
            if args.experiment == ExperimentArg::Trace {
                let params = TraceParams::new(args.lambda, args.epsilon)?;
                let report = harness::run_trace_experiment(
                    &subject,
                    &params,
                    decoder.as_ref(),
                    args.trials,
                    seed,
                )?;
                report_text = report.summary();
                csv_text = Some(report.to_csv());
            } else {
                let valid = subject.measure_valid_hit_rate(decoder.as_ref(), args.samples, seed)?;
                let tracing =
                    subject.measure_tracing_hit_rate(decoder.as_ref(), args.samples, seed)?;
                report_text = format!(
                    "scheme={} decoder={} samples={}\nvalid-hit-rate: {valid:.6}\ntracing-hit-rate: {tracing:.6}\nseed: {seed}\n",
                    subject.scheme().as_str(),
                    args.decoder,
                    args.samples,
                );
            }
        }
        ExperimentArg::HidingAudit => {
            let scheme = match args.scheme {
                SchemeArg::Core => AuditScheme::Core,
                SchemeArg::Cca => AuditScheme::Cca,
                SchemeArg::Gentry => AuditScheme::Gentry,
                SchemeArg::Ibbe => AuditScheme::Ibbe,
            };
            let report = harness::run_findkey_view_audit(
                scheme,
                &ctx,
                args.ceremonies,
                CommitmentFlavor::Pedersen,
                seed,
            )?;
            let control = harness::run_findkey_view_audit(
                scheme,
                &ctx,
                args.ceremonies,
                CommitmentFlavor::SingleBase,
                seed,
            )?;
            report_text.push_str(&report.summary());
            report_text.push_str(&control.summary());
            report_text.push_str(&format!(
                "verdict: {}\n",
                if report.all_views_hide_perfectly() && !control.all_views_hide_perfectly() {
                    "commitment hides perfectly; straw-man control flagged"
                } else {
                    "AUDIT FAILED"
                }
            ));
            if !report.all_views_hide_perfectly() || control.all_views_hide_perfectly() {
                print!("{report_text}");
                bail!("hiding audit failed");
            }
        }
        ExperimentArg::CdhExtract => {
            let mut src = SeededSource::new(seed);
            let id = src.next_nonzero(&ctx);
            let trapdoor = harness::setup_with_extraction_trapdoor(&ctx, &id, &mut src);
            let mut successes = 0u32;
            for _ in 0..args.pairs {
                let t1 = src.next_nonzero(&ctx);
                let mut t2 = src.next_nonzero(&ctx);
                while t2 == t1 {
                    t2 = src.next_nonzero(&ctx);
                }
                let k1 = basic::keygen_direct(
                    &trapdoor.msk,
                    &trapdoor.mpk,
                    &trapdoor.id,
                    &t1,
                    &mut src,
                )?;
                let k2 = basic::keygen_direct(
                    &trapdoor.msk,
                    &trapdoor.mpk,
                    &trapdoor.id,
                    &t2,
                    &mut src,
                )?;
                harness::cdh_extract_check(&trapdoor, &k1, &k2)?;
                successes += 1;
            }
            report_text = format!(
                "two-key extractions: {successes}/{} recovered h^(1/x) exactly\nseed: {seed}\n",
                args.pairs
            );
        }
    }
    print!("{report_text}");
    if let Some(path) = &args.out {
        write_file(
            path,
            &codec::encode_report(&ctx, args.scheme.id(), &report_text),
        )?;
        eprintln!("wrote {}", path.display());
    }
    if let (Some(path), Some(csv)) = (&args.csv, &csv_text) {
        write_file(path, csv.as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}

fn parse_builtin_spec(text: &str) -> Result<DecoderSpec> {
    let name = text
        .strip_prefix("builtin:")
        .context("simulate uses builtin decoders (builtin:<name>)")?;
    Ok(match name {
        "honest" => DecoderSpec::HonestUser,
        "pkg-master" => DecoderSpec::PkgMaster,
        "pkg-guessing" => DecoderSpec::PkgGuessing,
        other => {
            if let Some(eps) = other.strip_prefix("noisy:") {
                DecoderSpec::Noisy {
                    epsilon: eps.parse().context("noisy decoder usefulness")?,
                }
            } else {
                bail!("unknown builtin decoder `{other}`")
            }
        }
    })
}

fn cmd_inspect(args: InspectArgs) -> Result<i32> {
    let bytes = read_file(&args.r#in)?;
    let header = codec::peek_header(&bytes)?;
    println!("kind:    {}", header.kind.as_str());
    println!("scheme:  {}", header.scheme.as_str());
    match header.ctx.backend() {
        BackendKind::Mock => println!(
            "backend: mock (INSECURE, test only), p = {}",
            header.ctx.mock_modulus().unwrap()
        ),
        BackendKind::Curve => println!("backend: bls12-381"),
    }
    println!("size:    {} bytes", bytes.len());
    let secret = matches!(
        header.kind,
        ArtifactKind::Msk | ArtifactKind::UserKey | ArtifactKind::CeremonyState
    );
    if secret && !args.reveal {
        println!("payload: <contains secret material; pass --reveal to dump>");
    } else {
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        println!("payload: {hex}");
    }
    Ok(0)
}

fn cmd_serve_decoder(args: ServeArgs) -> Result<i32> {
    let mpk_bytes = read_file(&args.mpk)?;
    let scheme = codec::peek_header(&mpk_bytes)?.scheme;
    check_scheme_flag(scheme, args.scheme)?;
    let key_bytes = read_file(&args.key)?;

    type AnswerFn = Box<dyn Fn(&[u8]) -> Option<Vec<u8>>>;
    let answer: AnswerFn = match scheme {
        SchemeId::Core => {
            let mpk = codec::decode_core_mpk(&mpk_bytes)?;
            let (_, key) = codec::decode_core_user_key(&key_bytes)?;
            Box::new(move |ct_bytes| {
                let (ctx, ct) = codec::decode_core_ciphertext(ct_bytes).ok()?;
                ctx.compatible(mpk.context())
                    .then(|| basic::decrypt(&mpk, &key, &ct).to_bytes())
            })
        }
        SchemeId::Gentry => {
            let mpk = codec::decode_gentry_mpk(&mpk_bytes)?;
            let (_, key) = codec::decode_gentry_user_key(&key_bytes)?;
            Box::new(move |ct_bytes| {
                let (ctx, ct) = codec::decode_gentry_ciphertext(ct_bytes).ok()?;
                ctx.compatible(mpk.context())
                    .then(|| gentry::decrypt(&mpk, &key, &ct).to_bytes())
            })
        }
        SchemeId::Ibbe => {
            let mpk = codec::decode_ibbe_mpk(&mpk_bytes)?;
            let (_, key) = codec::decode_ibbe_user_key(&key_bytes)?;
            let fallback = if args.recipients.is_empty() && args.recipient_scalars.is_empty() {
                None
            } else {
                Some(receiver_set(
                    mpk.context(),
                    &args.recipients,
                    &args.recipient_scalars,
                    None,
                )?)
            };
            Box::new(move |ct_bytes| {
                let file = codec::decode_ibbe_ciphertext(ct_bytes).ok()?;
                if !file.ctx.compatible(mpk.context()) {
                    return None;
                }
                let set = file.set.or_else(|| fallback.clone())?;
                ibbe::aibbe_decrypt(&mpk, &key, &set, &file.ciphertext)
                    .ok()
                    .map(|m| m.to_bytes())
            })
        }
        SchemeId::Cca => bail!("serve-decoder applies to the core, gentry and ibbe schemes"),
    };

    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let reply = codec::dearmor(&line).ok().and_then(|bytes| answer(&bytes));
        match reply {
            Some(plaintext) => writeln!(stdout, "{}", codec::armor(&plaintext))?,
            None => writeln!(stdout, "{}", exec_decoder::NO_ANSWER_TOKEN)?,
        }
        stdout.flush()?;
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn exit_code_for(error: &anyhow::Error) -> i32 {
    match error.downcast_ref::<LibError>() {
        Some(
            LibError::ProofRejected
            | LibError::KeySanityFailed
            | LibError::DelegationCheckFailed { .. }
            | LibError::SingularIdentity
            | LibError::TypeIReject
            | LibError::AeadReject,
        ) => 2,
        _ => 1,
    }
}

/// Rewrites `gentry-<cmd>`/`ibbe-<cmd>` into `<cmd> --scheme <scheme>`.
fn expand_scheme_prefix(mut args: Vec<String>) -> Vec<String> {
    if args.len() > 1 {
        for scheme in ["gentry", "ibbe", "cca", "core"] {
            let prefix = format!("{scheme}-");
            if let Some(rest) = args[1].clone().strip_prefix(&prefix) {
                if !rest.is_empty() && rest != "decoder" {
                    args[1] = rest.to_string();
                    args.insert(2, "--scheme".into());
                    args.insert(3, scheme.into());
                    break;
                }
            }
        }
    }
    args
}

fn run() -> Result<i32> {
    let args = expand_scheme_prefix(std::env::args().collect());
    let cli = Cli::parse_from(args);
    match cli.command {
        Cmd::Setup(args) => cmd_setup(args),
        Cmd::KeygenUserInit(args) => cmd_keygen_user_init(args),
        Cmd::KeygenPkgRespond(args) => cmd_keygen_pkg_respond(args),
        Cmd::KeygenUserFinish(args) => cmd_keygen_user_finish(args),
        Cmd::Encrypt(args) => cmd_encrypt(args),
        Cmd::Decrypt(args) => cmd_decrypt(args),
        Cmd::SanityCheck(args) => cmd_sanity_check(args),
        Cmd::TraceKey(args) => cmd_trace_key(args),
        Cmd::TraceBox(args) => cmd_trace_box(args),
        Cmd::Simulate(args) => cmd_simulate(args),
        Cmd::Inspect(args) => cmd_inspect(args),
        Cmd::ServeDecoder(args) => cmd_serve_decoder(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(error) => {
            // Decryption refusals stay indistinguishable on this surface.
            if matches!(
                error.downcast_ref::<LibError>(),
                Some(LibError::TypeIReject | LibError::AeadReject)
            ) {
                eprintln!("error: decryption failed");
            } else {
                eprintln!("error: {error:#}");
            }
            ExitCode::from(exit_code_for(&error) as u8)
        }
    }
}
