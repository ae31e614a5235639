//! Statistical experiment harness: repeated trace runs with verdict
//! tallies, the dishonest-authority view audit, the two-key extraction
//! check and decoder statelessness replay.
//!
//! Every experiment takes an explicit seed and embeds it in its report, so
//! any run can be reproduced bit for bit.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::basic;
use crate::cca;
use crate::codec::{self, SchemeId};
use crate::error::{Error, Result};
use crate::gentry;
use crate::groups::rand::{derive_seed, ScalarSource, SeededSource};
use crate::groups::{BilinearContext, Scalar, SourceElement};
use crate::ibbe;
use crate::sigma::{self, RepresentationWitness};

use super::decoders;
use super::{Culprit, Decoder, DecoderQuery, TraceOutcome, TraceParams};

/// Which black-box-traceable scheme an experiment runs against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Core,
    Gentry,
    /// `set_size` receivers are traced, the subject's identity among them.
    Ibbe {
        max_receivers: usize,
        set_size: usize,
    },
}

impl SchemeChoice {
    pub fn scheme_id(&self) -> SchemeId {
        match self {
            SchemeChoice::Core => SchemeId::Core,
            SchemeChoice::Gentry => SchemeId::Gentry,
            SchemeChoice::Ibbe { .. } => SchemeId::Ibbe,
        }
    }
}

/// Built-in decoder models, by role.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderSpec {
    HonestUser,
    /// Honest user behind a usefulness filter.
    Noisy {
        epsilon: f64,
    },
    PkgMaster,
    PkgGuessing,
}

/// A fully instantiated system under trace: master keys, one ceremony-issued
/// user key and (for broadcast) the traced receiver set.
pub struct TraceSubject {
    inner: SubjectInner,
}

enum SubjectInner {
    Core {
        mpk: basic::MasterPublicKey,
        msk: basic::MasterSecretKey,
        id: basic::Identity,
        key: basic::UserKey,
    },
    Gentry {
        mpk: gentry::GentryMpk,
        msk: gentry::GentryMsk,
        key: gentry::GentryKey,
    },
    Ibbe {
        mpk: ibbe::IbbeMpk,
        msk: ibbe::IbbeMsk,
        key: ibbe::IbbeUserKey,
        set: ibbe::ReceiverSet,
    },
}

/// Builds a subject: seeded setup, then one issuance ceremony for a derived
/// identity (re-derived on the negligible-probability singular collisions).
pub fn instantiate(choice: SchemeChoice, ctx: &BilinearContext, seed: u64) -> Result<TraceSubject> {
    let mut sys_src = SeededSource::new(derive_seed(seed, "subject-setup", 0));
    let mut user_src = SeededSource::new(derive_seed(seed, "subject-user", 0));
    let mut pkg_src = SeededSource::new(derive_seed(seed, "subject-pkg", 0));
    let inner = match choice {
        SchemeChoice::Core => {
            let (mpk, msk) = basic::setup(ctx, basic::HashModeRequest::BonehBoyen, &mut sys_src);
            let id = basic::Identity::Scalar(user_src.next_nonzero(ctx));
            let key = basic::run_keygen(&mpk, &msk, &id, &mut user_src, &mut pkg_src)?;
            SubjectInner::Core { mpk, msk, id, key }
        }
        SchemeChoice::Gentry => {
            let (mpk, msk) = gentry::setup(ctx, &mut sys_src);
            let mut key = None;
            let mut id = user_src.next_nonzero(ctx);
            for _ in 0..16 {
                match gentry::run_keygen(&mpk, &msk, &id, &mut user_src, &mut pkg_src) {
                    Ok(k) => {
                        key = Some(k);
                        break;
                    }
                    Err(Error::SingularIdentity) => {
                        id = user_src.next_nonzero(ctx);
                    }
                    Err(e) => return Err(e),
                }
            }
            let key = key.ok_or(Error::SingularIdentity)?;
            SubjectInner::Gentry { mpk, msk, key }
        }
        SchemeChoice::Ibbe {
            max_receivers,
            set_size,
        } => {
            let (mpk, msk) = ibbe::aibbe_setup(ctx, max_receivers, &mut sys_src);
            let id = user_src.next_nonzero(ctx);
            let key = ibbe::run_keygen(&mpk, &msk, &id, &mut user_src, &mut pkg_src)?;
            let mut ids = vec![id];
            while ids.len() < set_size.max(1) {
                let candidate = user_src.next_nonzero(ctx);
                if !ids.contains(&candidate) {
                    ids.push(candidate);
                }
            }
            let set = ibbe::ReceiverSet::new(ids)?;
            SubjectInner::Ibbe { mpk, msk, key, set }
        }
    };
    Ok(TraceSubject { inner })
}

impl TraceSubject {
    pub fn scheme(&self) -> SchemeId {
        match &self.inner {
            SubjectInner::Core { .. } => SchemeId::Core,
            SubjectInner::Gentry { .. } => SchemeId::Gentry,
            SubjectInner::Ibbe { .. } => SchemeId::Ibbe,
        }
    }

    pub fn context(&self) -> &BilinearContext {
        match &self.inner {
            SubjectInner::Core { mpk, .. } => mpk.context(),
            SubjectInner::Gentry { mpk, .. } => mpk.context(),
            SubjectInner::Ibbe { mpk, .. } => mpk.context(),
        }
    }

    /// The traced key's family number.
    pub fn key_family(&self) -> Scalar {
        match &self.inner {
            SubjectInner::Core { key, .. } => key.d3,
            SubjectInner::Gentry { key, .. } => key.t_id,
            SubjectInner::Ibbe { key, .. } => key.t_id,
        }
    }

    /// Builds one of the built-in decoder models against this subject.
    pub fn build_decoder(&self, spec: DecoderSpec, seed: u64) -> Result<Box<dyn Decoder>> {
        Ok(match (&self.inner, spec) {
            (SubjectInner::Core { mpk, key, .. }, DecoderSpec::HonestUser) => {
                Box::new(decoders::honest_core(mpk, key))
            }
            (SubjectInner::Core { mpk, key, .. }, DecoderSpec::Noisy { epsilon }) => Box::new(
                decoders::noisy(decoders::honest_core(mpk, key), epsilon, seed)?,
            ),
            (SubjectInner::Core { mpk, msk, .. }, DecoderSpec::PkgMaster) => {
                Box::new(decoders::pkg_master_core(mpk, msk)?)
            }
            (SubjectInner::Core { mpk, msk, id, .. }, DecoderSpec::PkgGuessing) => {
                Box::new(decoders::pkg_guessing_core(mpk, msk, id, seed))
            }
            (SubjectInner::Gentry { mpk, key, .. }, DecoderSpec::HonestUser) => {
                Box::new(decoders::honest_gentry(mpk, key))
            }
            (SubjectInner::Gentry { mpk, key, .. }, DecoderSpec::Noisy { epsilon }) => Box::new(
                decoders::noisy(decoders::honest_gentry(mpk, key), epsilon, seed)?,
            ),
            (SubjectInner::Gentry { mpk, msk, key }, DecoderSpec::PkgMaster) => {
                Box::new(decoders::pkg_master_gentry(mpk, msk, &key.identity)?)
            }
            (SubjectInner::Gentry { mpk, msk, key }, DecoderSpec::PkgGuessing) => {
                Box::new(decoders::pkg_guessing_gentry(mpk, msk, &key.identity, seed))
            }
            (SubjectInner::Ibbe { mpk, key, .. }, DecoderSpec::HonestUser) => {
                Box::new(decoders::honest_ibbe(mpk, key))
            }
            (SubjectInner::Ibbe { mpk, key, .. }, DecoderSpec::Noisy { epsilon }) => Box::new(
                decoders::noisy(decoders::honest_ibbe(mpk, key), epsilon, seed)?,
            ),
            (SubjectInner::Ibbe { mpk, msk, .. }, DecoderSpec::PkgMaster) => {
                Box::new(decoders::pkg_master_ibbe(mpk, msk))
            }
            (SubjectInner::Ibbe { mpk, msk, key, .. }, DecoderSpec::PkgGuessing) => {
                Box::new(decoders::pkg_guessing_ibbe(mpk, msk, &key.identity, seed))
            }
        })
    }

    /// One full trace run against a decoder.
    pub fn trace(
        &self,
        params: &TraceParams,
        decoder: &dyn Decoder,
        src: &mut dyn ScalarSource,
    ) -> Result<TraceOutcome> {
        match &self.inner {
            SubjectInner::Core { mpk, id, key, .. } => {
                basic::trace_blackbox(mpk, id, key, params, decoder, src)
            }
            SubjectInner::Gentry { mpk, key, .. } => {
                gentry::trace_blackbox(mpk, key, params, decoder, src)
            }
            SubjectInner::Ibbe { mpk, key, set, .. } => {
                ibbe::trace_blackbox(mpk, key, set, params, decoder, src)
            }
        }
    }

    /// One (ciphertext, context) query pair for a fresh valid ciphertext,
    /// together with the expected plaintext bytes.
    fn valid_query(&self, src: &mut dyn ScalarSource) -> Result<(Vec<u8>, Vec<u8>, Vec<u8>)> {
        match &self.inner {
            SubjectInner::Core { mpk, id, .. } => {
                let m = mpk.context().random_target(src);
                let ct = basic::encrypt(mpk, id, &m, src)?;
                Ok((
                    codec::encode_core_ciphertext(mpk, &ct),
                    codec::encode_identity(id),
                    m.to_bytes(),
                ))
            }
            SubjectInner::Gentry { mpk, key, .. } => {
                let m = mpk.context().random_target(src);
                let ct = gentry::encrypt(mpk, &key.identity, &m, src);
                Ok((
                    codec::encode_gentry_ciphertext(mpk, &ct),
                    key.identity.to_bytes(),
                    m.to_bytes(),
                ))
            }
            SubjectInner::Ibbe { mpk, set, .. } => {
                let m = mpk.context().random_target(src);
                let ct = ibbe::aibbe_encrypt(mpk, set, &m, src)?;
                Ok((
                    codec::encode_ibbe_ciphertext(mpk, &ct, set, true),
                    codec::encode_receiver_set(set),
                    m.to_bytes(),
                ))
            }
        }
    }

    /// As [`Self::valid_query`] but for a tracing ciphertext.
    fn tracing_query(&self, src: &mut dyn ScalarSource) -> Result<(Vec<u8>, Vec<u8>, Vec<u8>)> {
        match &self.inner {
            SubjectInner::Core { mpk, id, key, .. } => {
                let m = mpk.context().random_target(src);
                let ct = basic::make_tracing_ciphertext(mpk, id, key, &m, src)?;
                Ok((
                    codec::encode_core_ciphertext(mpk, &ct),
                    codec::encode_identity(id),
                    m.to_bytes(),
                ))
            }
            SubjectInner::Gentry { mpk, key, .. } => {
                let m = mpk.context().random_target(src);
                let ct = gentry::make_tracing_ciphertext(mpk, key, &m, src)?;
                Ok((
                    codec::encode_gentry_ciphertext(mpk, &ct),
                    key.identity.to_bytes(),
                    m.to_bytes(),
                ))
            }
            SubjectInner::Ibbe { mpk, key, set, .. } => {
                let m = mpk.context().random_target(src);
                let ct = ibbe::make_tracing_ciphertext(mpk, key, set, &m, src)?;
                Ok((
                    codec::encode_ibbe_ciphertext(mpk, &ct, set, true),
                    codec::encode_receiver_set(set),
                    m.to_bytes(),
                ))
            }
        }
    }

    /// Empirical per-query hit rate on well-formed ciphertexts — the
    /// harness-side estimator for a decoder's usefulness.
    pub fn measure_valid_hit_rate(
        &self,
        decoder: &dyn Decoder,
        samples: u32,
        seed: u64,
    ) -> Result<f64> {
        self.measure_rate(decoder, samples, seed, false)
    }

    /// Empirical per-query hit rate on tracing ciphertexts.
    pub fn measure_tracing_hit_rate(
        &self,
        decoder: &dyn Decoder,
        samples: u32,
        seed: u64,
    ) -> Result<f64> {
        self.measure_rate(decoder, samples, seed, true)
    }

    fn measure_rate(
        &self,
        decoder: &dyn Decoder,
        samples: u32,
        seed: u64,
        tracing: bool,
    ) -> Result<f64> {
        let mut src = SeededSource::new(derive_seed(seed, "hit-rate", tracing as u64));
        let mut hits = 0u64;
        for _ in 0..samples {
            let (ct, context, expected) = if tracing {
                self.tracing_query(&mut src)?
            } else {
                self.valid_query(&mut src)?
            };
            let query = DecoderQuery {
                scheme: self.scheme(),
                ciphertext: &ct,
                context: &context,
            };
            if decoder.decrypt(&query).as_deref() == Some(expected.as_slice()) {
                hits += 1;
            }
        }
        Ok(hits as f64 / samples as f64)
    }

    /// Samples query pairs for the statelessness replay audit.
    pub fn sample_tracing_queries(&self, n: u32, seed: u64) -> Result<Vec<(Vec<u8>, Vec<u8>)>> {
        let mut src = SeededSource::new(derive_seed(seed, "stateless-queries", 0));
        (0..n)
            .map(|_| self.tracing_query(&mut src).map(|(ct, cx, _)| (ct, cx)))
            .collect()
    }
}

/// One trace run inside an experiment.
#[derive(Debug, Clone, Copy)]
pub struct TrialRow {
    pub trial: u32,
    pub culprit: Culprit,
    pub ctr: u64,
    pub iterations: u64,
    pub seed: u64,
}

/// Aggregated result of `trials` independent trace runs.
pub struct ExperimentReport {
    pub scheme: SchemeId,
    pub lambda: u32,
    pub epsilon: f64,
    pub trials: u32,
    pub pkg_verdicts: u32,
    pub user_verdicts: u32,
    pub rows: Vec<TrialRow>,
    /// Total counter increments over total iterations.
    pub hit_rate: f64,
    pub elapsed: Duration,
    pub seed: u64,
}

impl ExperimentReport {
    pub fn ctr_histogram(&self) -> BTreeMap<u64, u32> {
        let mut hist = BTreeMap::new();
        for row in &self.rows {
            *hist.entry(row.ctr).or_insert(0u32) += 1;
        }
        hist
    }

    /// Line-delimited human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "scheme={} lambda={} epsilon={:.4} trials={} iterations-per-trial={}\n",
            self.scheme.as_str(),
            self.lambda,
            self.epsilon,
            self.trials,
            self.rows.first().map(|r| r.iterations).unwrap_or(0),
        ));
        out.push_str(&format!(
            "verdicts: User={} PKG={}\n",
            self.user_verdicts, self.pkg_verdicts
        ));
        let hist = self
            .ctr_histogram()
            .into_iter()
            .map(|(ctr, n)| format!("{ctr}x{n}"))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!("ctr-histogram: {hist}\n"));
        out.push_str(&format!("per-iteration-hit-rate: {:.6}\n", self.hit_rate));
        out.push_str(&format!("seed: {}\n", self.seed));
        out.push_str(&format!("elapsed-ms: {}\n", self.elapsed.as_millis()));
        out
    }

    /// CSV summary: one row per trial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,verdict,ctr,iterations,seed\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.trial, row.culprit, row.ctr, row.iterations, row.seed
            ));
        }
        out
    }
}

/// Runs `trials` independent trace invocations of the decoder and tallies
/// verdicts. Trials fan out across worker threads (the decoder contract is
/// stateless); the aggregation is order-independent.
pub fn run_trace_experiment(
    subject: &TraceSubject,
    params: &TraceParams,
    decoder: &dyn Decoder,
    trials: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    let started = Instant::now();
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(trials.max(1) as usize)
        .min(8);
    let mut rows: Vec<Result<TrialRow>> = Vec::with_capacity(trials as usize);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..workers {
            let subject_ref = &*subject;
            let decoder_ref = decoder;
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                let mut trial = worker as u32;
                while trial < trials {
                    let trial_seed = derive_seed(seed, "trial", trial as u64);
                    let mut src = SeededSource::new(trial_seed);
                    let row = subject_ref
                        .trace(params, decoder_ref, &mut src)
                        .map(|outcome| TrialRow {
                            trial,
                            culprit: outcome.culprit,
                            ctr: outcome.ctr,
                            iterations: outcome.iterations,
                            seed: trial_seed,
                        });
                    out.push(row);
                    trial += workers as u32;
                }
                out
            }));
        }
        for handle in handles {
            rows.extend(handle.join().expect("trace worker panicked"));
        }
    });
    let mut rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.trial);
    let pkg_verdicts = rows.iter().filter(|r| r.culprit == Culprit::Pkg).count() as u32;
    let user_verdicts = rows.len() as u32 - pkg_verdicts;
    let total_ctr: u64 = rows.iter().map(|r| r.ctr).sum();
    let total_iters: u64 = rows.iter().map(|r| r.iterations).sum();
    Ok(ExperimentReport {
        scheme: subject.scheme(),
        lambda: params.lambda(),
        epsilon: params.epsilon(),
        trials,
        pkg_verdicts,
        user_verdicts,
        rows,
        hit_rate: if total_iters == 0 {
            0.0
        } else {
            total_ctr as f64 / total_iters as f64
        },
        elapsed: started.elapsed(),
        seed,
    })
}

/// Statelessness replay audit: ask the queries in order, then in a shuffled
/// order, and require the same multiset of answers.
pub fn audit_statelessness(
    decoder: &dyn Decoder,
    scheme: SchemeId,
    queries: &[(Vec<u8>, Vec<u8>)],
    shuffle_seed: u64,
) -> bool {
    let ask = |order: &[usize]| -> Vec<Option<Vec<u8>>> {
        order
            .iter()
            .map(|&i| {
                decoder.decrypt(&DecoderQuery {
                    scheme,
                    ciphertext: &queries[i].0,
                    context: &queries[i].1,
                })
            })
            .collect()
    };
    let in_order: Vec<usize> = (0..queries.len()).collect();
    let mut shuffled = in_order.clone();
    let mut src = SeededSource::new(shuffle_seed);
    for i in (1..shuffled.len()).rev() {
        let j = (src.next_u64() % (i as u64 + 1)) as usize;
        shuffled.swap(i, j);
    }
    let mut a = ask(&in_order);
    let mut b = ask(&shuffled);
    a.sort();
    b.sort();
    a == b
}

// ---------------------------------------------------------------------------
// Dishonest-PKG view audit (perfect family hiding)
// ---------------------------------------------------------------------------

/// Which scheme's ceremony view is audited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditScheme {
    Core,
    Cca,
    Gentry,
    Ibbe,
}

impl AuditScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            AuditScheme::Core => "core",
            AuditScheme::Cca => "cca",
            AuditScheme::Gentry => "gentry",
            AuditScheme::Ibbe => "ibbe",
        }
    }
}

/// Commitment flavor under audit. The single-base flavor is a deliberately
/// broken negative control: it pins the committed value, so the audit must
/// flag it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommitmentFlavor {
    Pedersen,
    SingleBase,
}

/// Outcome of the view audit.
#[derive(Debug, Clone)]
pub struct FindKeyAuditReport {
    pub scheme: AuditScheme,
    pub flavor: CommitmentFlavor,
    pub ceremonies: u32,
    pub candidates_per_view: u64,
    pub consistent_views: u32,
    pub inconsistent_views: u32,
}

impl FindKeyAuditReport {
    pub fn all_views_hide_perfectly(&self) -> bool {
        self.inconsistent_views == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "scheme={} flavor={:?} ceremonies={} candidates-per-view={} consistent={} inconsistent={}\n",
            self.scheme.as_str(),
            self.flavor,
            self.ceremonies,
            self.candidates_per_view,
            self.consistent_views,
            self.inconsistent_views
        )
    }
}

/// For each recorded authority view of a ceremony (the bases and the
/// commitment `R`), checks every candidate family share `t0'` in `Z_p*` for
/// algebraic consistency: solve for `theta'` in the exponent and re-commit.
/// A perfectly hiding commitment admits every candidate; the single-base
/// straw man admits exactly one. Mock backend only — the audit solves
/// discrete logarithms.
pub fn run_findkey_view_audit(
    scheme: AuditScheme,
    ctx: &BilinearContext,
    ceremonies: u32,
    flavor: CommitmentFlavor,
    seed: u64,
) -> Result<FindKeyAuditReport> {
    let p = ctx.mock_modulus().ok_or(Error::MockBackendRequired)?;
    let mut sys_src = SeededSource::new(derive_seed(seed, "audit-setup", 0));
    // One system per audit; identity-dependent bases are re-derived per
    // ceremony below.
    let core_system = basic::setup(ctx, basic::HashModeRequest::BonehBoyen, &mut sys_src);
    let cca_system = cca::setup(ctx, cca::CipherSuite::default(), &mut sys_src);
    let gentry_system = gentry::setup(ctx, &mut sys_src);
    let ibbe_system = ibbe::aibbe_setup(ctx, 4, &mut sys_src);

    let mut consistent_views = 0u32;
    let mut inconsistent_views = 0u32;
    for ceremony in 0..ceremonies {
        let mut src = SeededSource::new(derive_seed(seed, "audit-ceremony", ceremony as u64));
        let bases = match scheme {
            AuditScheme::Core => core_system.0.pedersen_bases(),
            AuditScheme::Cca => cca_system.0.pedersen_bases(),
            AuditScheme::Gentry => {
                // Fresh identity per ceremony; skip the singular one.
                let mut id = src.next_nonzero(ctx);
                loop {
                    match gentry_system.0.pedersen_bases(&id) {
                        Ok(b) => break b,
                        Err(_) => id = src.next_nonzero(ctx),
                    }
                }
            }
            AuditScheme::Ibbe => ibbe_system.0.pedersen_bases(),
        };
        let witness = RepresentationWitness::random(ctx, &mut src);
        let view_commitment = match flavor {
            CommitmentFlavor::Pedersen => sigma::commit(&bases, &witness),
            // Straw man: deterministic single-base commitment, theta unused.
            CommitmentFlavor::SingleBase => bases.base_a().exp(witness.t0()),
        };
        let base_a_log = ctx.scalar_from_u64(bases.base_a().mock_exponent().unwrap());
        let base_b_log = ctx.scalar_from_u64(bases.base_b().mock_exponent().unwrap());
        let r_log = ctx.scalar_from_u64(view_commitment.mock_exponent().unwrap());
        let mut all_candidates_open = true;
        for candidate in 1..p {
            let t0_candidate = ctx.scalar_from_u64(candidate);
            let opens = match flavor {
                CommitmentFlavor::Pedersen => {
                    let theta = r_log
                        .sub(&base_a_log.mul(&t0_candidate))
                        .mul(&base_b_log.inv()?);
                    let reopened = bases
                        .base_a()
                        .exp(&t0_candidate)
                        .mul(&bases.base_b().exp(&theta));
                    reopened == view_commitment
                }
                CommitmentFlavor::SingleBase => {
                    bases.base_a().exp(&t0_candidate) == view_commitment
                }
            };
            if !opens {
                all_candidates_open = false;
                break;
            }
        }
        if all_candidates_open {
            consistent_views += 1;
        } else {
            inconsistent_views += 1;
        }
    }
    Ok(FindKeyAuditReport {
        scheme,
        flavor,
        ceremonies,
        candidates_per_view: p - 1,
        consistent_views,
        inconsistent_views,
    })
}

// ---------------------------------------------------------------------------
// Two-key extraction check
// ---------------------------------------------------------------------------

/// A core-scheme system prepared with the extraction trapdoor
/// `Z = g^{-ID} * X^alpha`, under which `F(ID) = X^alpha` and two keys from
/// distinct families algebraically yield `h^{1/x}`.
pub struct ExtractionTrapdoor {
    pub mpk: basic::MasterPublicKey,
    pub msk: basic::MasterSecretKey,
    pub alpha: Scalar,
    pub id: basic::Identity,
}

/// Tape order: `x`, `h`, `Y`, `alpha`.
pub fn setup_with_extraction_trapdoor(
    ctx: &BilinearContext,
    id: &Scalar,
    src: &mut dyn ScalarSource,
) -> ExtractionTrapdoor {
    let g = ctx.generator();
    let x = src.next_nonzero(ctx);
    let h = ctx.random_source(src);
    let y = ctx.random_source(src);
    let alpha = src.next_nonzero(ctx);
    let x_pub = g.exp(&x);
    let z = g.exp(id).inverse().mul(&x_pub.exp(&alpha));
    let e_g_h = ctx.pair(&g, &h);
    let e_g_y = ctx.pair(&g, &y);
    ExtractionTrapdoor {
        mpk: basic::MasterPublicKey {
            ctx: ctx.clone(),
            x: x_pub,
            y,
            z,
            h,
            hash_mode: basic::IdentityHashMode::BonehBoyen,
            e_g_h,
            e_g_y,
        },
        msk: basic::MasterSecretKey { x },
        alpha,
        id: basic::Identity::Scalar(*id),
    }
}

/// Given two valid keys for the trapdoor identity with distinct families,
/// extracts and returns `h^{1/x}` via
/// `((d1 * d2^{-alpha}) / (d1' * d2'^{-alpha}))^{1/(t - t')}`, verifying the
/// result against the master material.
pub fn cdh_extract_check(
    trapdoor: &ExtractionTrapdoor,
    first: &basic::UserKey,
    second: &basic::UserKey,
) -> Result<SourceElement> {
    if first.d3 == second.d3 {
        return Err(Error::EqualFamilies);
    }
    if !basic::key_sanity_check(&trapdoor.mpk, &trapdoor.id, first)
        || !basic::key_sanity_check(&trapdoor.mpk, &trapdoor.id, second)
    {
        return Err(Error::KeySanityFailed);
    }
    let strip = |key: &basic::UserKey| key.d1.mul(&key.d2.exp(&trapdoor.alpha).inverse());
    let ratio = strip(first).div(&strip(second));
    let extracted = ratio.exp(&first.d3.sub(&second.d3).inv()?);
    let expected = trapdoor.mpk.h.exp(&trapdoor.msk.x.inv()?);
    if extracted != expected {
        return Err(Error::ExtractionFailed(
            "extracted element does not match h^{1/x}",
        ));
    }
    Ok(extracted)
}
